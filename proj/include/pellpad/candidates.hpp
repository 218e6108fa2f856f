#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pellpad/padovan.hpp"
#include "pellpad/pell.hpp"

namespace pellpad {

// Q^s_k(x1) = P_n + P_m with k >= 2.
struct TableHit {
  int sign = 1;
  long k = 0;
  mpz_class x1;
  long n = 0, m = 0;  // one canonical representation
};

// A row of the candidate table: the least k >= 2 for this (x1, sign), with d
// the squarefree kernel of x1^2 - sign (x1^2 - 4 sign) and y1 the cofactor root.
struct TableRow {
  int sign = 1;
  long k1 = 0;
  mpz_class x1, y1, d;
  long n = 0, m = 0;
  bool fundamental = true;  // (x1, y1) is the fundamental solution for d
  UnitValue unit(Family f) const { return {x1, f, sign}; }
};

struct TableSearchConfig {
  Family family = Family::unit;
  long n_max = 3318;
  long k_max = 3125;
  long sieve_k_max = 105;  // prime k up to here use the residue sieve
  int sieve_primes = 24;
};

struct TableSearchResult {
  std::vector<TableHit> hits;        // every (sign, x1, k), sorted
  std::vector<TableRow> rows;        // sorted by (sign desc, x1)
  std::vector<UnitValue> units;      // one per row
  std::vector<UnitValue> primitive;  // units that are not powers of smaller ones
  std::map<std::string, std::string> power_of;  // unit -> "v^r" for the removed ones
  long sieve_survivors = 0;
};

TableSearchResult table_search(const TableSearchConfig& cfg);

// r >= 2 with u = v^r, if any.
std::optional<long> power_relation(const UnitValue& u, const UnitValue& v);

// Keeps units that are not a power (exponent >= 2) of another unit in the list.
std::vector<UnitValue> primitive_units(std::vector<UnitValue> units,
                                       std::map<std::string, std::string>* removed = nullptr);

bool is_squarefree(const mpz_class& d);

// (d, y) with n = d y^2 and d squarefree.
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n);

}  // namespace pellpad
