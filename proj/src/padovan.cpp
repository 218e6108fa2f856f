#include "pellpad/padovan.hpp"

#include <algorithm>
#include <mutex>

namespace pellpad {

const mpz_class& PadovanTable::get(long n) {
  if (n < 0) throw DomainError("negative Padovan index");
  {
    std::shared_lock lk(mu_);
    if (n < (long)values_.size()) return values_[n];
  }
  std::unique_lock lk(mu_);
  while ((long)values_.size() <= n) {
    size_t k = values_.size();
    values_.push_back(values_[k - 2] + values_[k - 3]);
  }
  return values_[n];
}

void PadovanTable::reserve(long n) { (void)get(n); }

long PadovanTable::size() const {
  std::shared_lock lk(mu_);
  return (long)values_.size();
}

PadovanTable& padovan_table() {
  static PadovanTable table;
  return table;
}

mpz_class padovan(long n) { return padovan_table().get(n); }

BinetError binet_residual(long n, const PrecisionPolicy& pol, int shift) {
  if (n < 1) throw DomainError("binet_residual needs n >= 1");
  PrecisionPolicy p = pol;
  // a*alpha^n cancels against P_n: about 0.61 n bits are lost.
  p.start_bits = std::max(p.start_bits, (long)(0.7 * n) + 128);
  if (p.max_bits < p.start_bits) p.max_bits = p.start_bits * 4;
  return with_precision(p, [&](long prec) {
    const auto k = constants(prec);
    BinetError out;
    out.n = n;
    out.shift = shift;
    out.e_n = BigReal::from_mpz(padovan(n), prec) - k.a * pow(k.alpha, n - shift);
    out.bound = exp(-(k.log_alpha * (n - shift)) / 2);
    Ordering o = certified_compare(abs(out.e_n), out.bound);
    if (o == Ordering::unknown) throw AmbiguousAtPrecision("binet bound");
    out.certified = o == Ordering::less;
    return out;
  });
}

bool growth_bounds_hold(long n, const PrecisionPolicy& pol, int shift) {
  if (n < 4) throw DomainError("growth bounds need n >= 4");
  PrecisionPolicy p = pol;
  p.start_bits = std::max(p.start_bits, (long)(0.5 * n) + 128);
  if (p.max_bits < p.start_bits) p.max_bits = p.start_bits * 4;
  return with_precision(p, [&](long prec) {
    const auto k = constants(prec);
    BigReal pn = BigReal::from_mpz(padovan(n), prec);
    Ordering lo = certified_compare(pow(k.alpha, n - 2 - shift), pn);
    Ordering hi = certified_compare(pn, pow(k.alpha, n - 1 - shift));
    if (lo == Ordering::unknown || hi == Ordering::unknown) throw AmbiguousAtPrecision("growth");
    return lo == Ordering::less && hi == Ordering::less;
  });
}

namespace {

void push_canonical(std::vector<Rep>& out, long n, long m) {
  long a = canonical_index(n), b = canonical_index(m);
  if (a < b) std::swap(a, b);
  out.emplace_back(a, b);
}

void finish(std::vector<Rep>& reps) {
  std::sort(reps.begin(), reps.end(), std::greater<>());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
}

uint64_t low_limb(const mpz_class& v) { return v == 0 ? 0 : (uint64_t)mpz_getlimbn(v.get_mpz_t(), 0); }

}  // namespace

std::vector<Rep> representations(const mpz_class& x, long n_max) {
  std::vector<Rep> reps;
  if (x < 0) return reps;
  auto& t = padovan_table();
  for (long n = 0; n <= n_max; ++n) {
    const mpz_class& pn = t.get(n);
    if (pn > x) break;
    mpz_class r = x - pn;
    if (r > pn) continue;
    for (long m = 0; m <= n; ++m) {
      const mpz_class& pm = t.get(m);
      if (pm > r) break;
      if (pm == r) push_canonical(reps, n, m);
    }
  }
  finish(reps);
  return reps;
}

SumIndex::SumIndex(long n_max) : n_max_(n_max) {
  auto& t = padovan_table();
  t.reserve(n_max);
  vals_.reserve(n_max + 1);
  bits_.reserve(n_max + 1);
  for (long i = 0; i <= n_max; ++i) {
    vals_.push_back(t.get(i));
    bits_.push_back(i == 0 ? 0 : mpz_sizeinbase(vals_.back().get_mpz_t(), 2));
    by_low_.emplace(low_limb(vals_.back()), i);
  }
}

long SumIndex::index_of(const mpz_class& v) const {
  auto [lo, hi] = by_low_.equal_range(low_limb(v));
  long best = -1;
  for (auto it = lo; it != hi; ++it)
    if (vals_[it->second] == v) {
      long c = canonical_index(it->second);
      if (best < 0 || c < best) best = c;
    }
  return best;
}

std::vector<Rep> SumIndex::find(const mpz_class& x, long m_min) const {
  std::vector<Rep> reps;
  if (x < 0) return reps;
  size_t b = x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
  // P_n <= x <= 2 P_n, so P_n has b or b-1 bits.
  auto first = std::lower_bound(bits_.begin(), bits_.end(), b == 0 ? 0 : b - 1);
  for (long n = first - bits_.begin(); n <= n_max_ && bits_[n] <= b; ++n) {
    if (vals_[n] > x) break;
    mpz_class r = x - vals_[n];
    if (r > vals_[n]) continue;
    long m = index_of(r);
    if (m < 0 || m < m_min) continue;
    push_canonical(reps, n, m);
  }
  if (b <= 2) {
    // Tiny values repeat at small indices; fall back to the direct scan.
    for (auto r : representations(x, std::min(n_max_, 10L)))
      if (r.second >= m_min) reps.push_back(r);
  }
  finish(reps);
  return reps;
}

}  // namespace pellpad
