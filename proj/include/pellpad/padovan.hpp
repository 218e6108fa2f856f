#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pellpad/bigreal.hpp"

namespace pellpad {

// Lazily grown table of exact Padovan numbers. Readers share a lock; growth
// takes it exclusively. References stay valid because storage is a deque.
class PadovanTable {
 public:
  const mpz_class& get(long n);
  void reserve(long n);
  long size() const;

 private:
  mutable std::shared_mutex mu_;
  std::deque<mpz_class> values_{0, 1, 1};
};

PadovanTable& padovan_table();
mpz_class padovan(long n);

// With P_0 = 0 the dominant term of P_n is a alpha^(n-1), not a alpha^n.
// `shift` selects the exponent n - shift; shift = 0 is the textbook
// statement, which only holds for n <= 4.
struct BinetError {
  long n = 0;
  int shift = 0;
  BigReal e_n;        // P_n - a alpha^(n - shift)
  BigReal bound;      // alpha^(-(n - shift)/2)
  bool certified = false;  // |e_n| < bound, decided rigorously
};

BinetError binet_residual(long n, const PrecisionPolicy& pol = PrecisionPolicy::from_env(), int shift = 0);

// alpha^(n-2-shift) <= P_n <= alpha^(n-1-shift), decided rigorously; n >= 4.
// shift = 0 fails from n = 5 on; shift = 1 holds for n >= 5.
bool growth_bounds_hold(long n, const PrecisionPolicy& pol = PrecisionPolicy::from_env(), int shift = 0);

// Indices 1, 2 collapse to 3 and 4 to 5.
inline long canonical_index(long i) {
  if (i == 1 || i == 2) return 3;
  if (i == 4) return 5;
  return i;
}

using Rep = std::pair<long, long>;  // (n, m), n >= m, canonical

// All canonical (n, m) with P_n + P_m = x and m <= n <= n_max, sorted by
// descending n.
std::vector<Rep> representations(const mpz_class& x, long n_max);

// Value lookup for P_0..P_nmax, with a bit-length index for fast
// P_n + P_m membership on huge values.
class SumIndex {
 public:
  explicit SumIndex(long n_max);
  long n_max() const { return n_max_; }
  const mpz_class& value(long n) const { return vals_[n]; }
  // Canonical index with P_i = v, or -1.
  long index_of(const mpz_class& v) const;
  // Same as representations() but O(1) candidate n per call.
  std::vector<Rep> find(const mpz_class& x, long m_min = 0) const;

 private:
  long n_max_;
  std::vector<mpz_class> vals_;
  std::vector<size_t> bits_;
  std::unordered_multimap<uint64_t, long> by_low_;
};

}  // namespace pellpad
