#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pellpad {

// Exact element c0 + c1*alpha + c2*alpha^2 of Q(alpha), alpha^3 = alpha + 1.
class QAlpha {
 public:
  QAlpha() : c_{0, 0, 0} {}
  QAlpha(const mpq_class& c0, const mpq_class& c1 = 0, const mpq_class& c2 = 0) : c_{c0, c1, c2} {
    for (auto& x : c_) x.canonicalize();
  }

  static QAlpha alpha() { return QAlpha(0, 1, 0); }
  // a = alpha(alpha + 1)/(3 alpha^2 - 1), the Binet coefficient.
  static QAlpha binet_a();
  static QAlpha power_of_alpha(long e);

  const mpq_class& operator[](int i) const { return c_[i]; }

  QAlpha operator+(const QAlpha& o) const;
  QAlpha operator-(const QAlpha& o) const;
  QAlpha operator*(const QAlpha& o) const;
  QAlpha inverse() const;
  QAlpha operator/(const QAlpha& o) const { return *this * o.inverse(); }
  bool operator==(const QAlpha& o) const { return c_ == o.c_; }
  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  mpq_class norm() const;
  // Characteristic polynomial of multiplication by this element, monic:
  // {1, c2, c1, c0} for x^3 + c2 x^2 + c1 x + c0.
  std::array<mpq_class, 4> charpoly() const;
  bool is_rational() const { return c_[1] == 0 && c_[2] == 0; }
  std::string to_string() const;

 private:
  std::array<mpq_class, 3> c_;
};

QAlpha pow(const QAlpha& x, long n);

// Primitive integer minimal polynomial, leading coefficient first.
std::vector<mpz_class> minimal_polynomial(const QAlpha& x);

// e with x == alpha^e and |e| <= range, if any.
std::optional<long> alpha_exponent(const QAlpha& x, long range = 64);

}  // namespace pellpad
