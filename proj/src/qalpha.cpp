#include "pellpad/qalpha.hpp"

#include <stdexcept>
#include <utility>

namespace pellpad {

QAlpha QAlpha::operator+(const QAlpha& o) const {
  return QAlpha(c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2]);
}

QAlpha QAlpha::operator-(const QAlpha& o) const {
  return QAlpha(c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2]);
}

QAlpha QAlpha::operator*(const QAlpha& o) const {
  mpq_class e[5];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e[i + j] += c_[i] * o.c_[j];
  // x^3 = x + 1, x^4 = x^2 + x
  return QAlpha(e[0] + e[3], e[1] + e[3] + e[4], e[2] + e[4]);
}

QAlpha QAlpha::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(alpha)");
  // Columns of the multiplication-by-this matrix are this * alpha^j.
  QAlpha col[3] = {*this, *this * alpha(), *this * alpha() * alpha()};
  mpq_class m[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = col[c][r];
    m[r][3] = r == 0 ? 1 : 0;
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    while (m[piv][c] == 0) ++piv;
    if (piv != c)
      for (int k = 0; k < 4; ++k) std::swap(m[piv][k], m[c][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c || m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return QAlpha(m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]);
}

mpq_class QAlpha::norm() const {
  QAlpha col[3] = {*this, *this * alpha(), *this * alpha() * alpha()};
  mpq_class m[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = col[c][r];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<mpq_class, 4> QAlpha::charpoly() const {
  QAlpha col[3] = {*this, *this * alpha(), *this * alpha() * alpha()};
  mpq_class m[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = col[c][r];
  mpq_class tr = m[0][0] + m[1][1] + m[2][2];
  mpq_class minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                     m[1][1] * m[2][2] - m[1][2] * m[2][1];
  return {mpq_class(1), -tr, minors, -norm()};
}

std::string QAlpha::to_string() const {
  return "(" + c_[0].get_str() + ") + (" + c_[1].get_str() + ")a + (" + c_[2].get_str() + ")a^2";
}

QAlpha QAlpha::binet_a() {
  QAlpha x = alpha();
  return x * (x + QAlpha(1)) / (QAlpha(3) * x * x - QAlpha(1));
}

QAlpha QAlpha::power_of_alpha(long e) { return pow(alpha(), e); }

QAlpha pow(const QAlpha& x, long n) {
  if (n < 0) return pow(x.inverse(), -n);
  QAlpha r(1), b = x;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

std::vector<mpz_class> minimal_polynomial(const QAlpha& x) {
  std::vector<mpq_class> c;
  if (x.is_rational()) {
    c = {mpq_class(1), -x[0]};
  } else {
    // [Q(alpha):Q] = 3 is prime, so an irrational element has degree 3.
    auto cp = x.charpoly();
    c.assign(cp.begin(), cp.end());
  }
  mpz_class l = 1;
  for (auto& q : c) l = lcm(l, mpz_class(q.get_den()));
  std::vector<mpz_class> out;
  mpz_class g = 0;
  for (auto& q : c) {
    out.push_back(mpz_class(q * l));
    g = gcd(g, out.back());
  }
  for (auto& z : out) z /= g;
  return out;
}

std::optional<long> alpha_exponent(const QAlpha& x, long range) {
  // alpha is a unit, so x must have norm +1 (the norm of alpha is 1).
  if (x.norm() != 1) return std::nullopt;
  QAlpha up(1), down(1);
  QAlpha a = QAlpha::alpha(), ai = a.inverse();
  if (x == up) return 0;
  for (long e = 1; e <= range; ++e) {
    up = up * a;
    down = down * ai;
    if (x == up) return e;
    if (x == down) return -e;
  }
  return std::nullopt;
}

}  // namespace pellpad
