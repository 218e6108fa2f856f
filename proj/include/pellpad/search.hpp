#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pellpad/padovan.hpp"
#include "pellpad/pell.hpp"

namespace pellpad {

struct SolutionRecord {
  mpz_class d;
  EqKind eq;
  long ordinal = 0;  // index among solutions of the stated equation
  long k_unit = 0;   // power of the fundamental unit of d
  mpz_class x;
  std::vector<Rep> reps;  // canonical (n, m), n descending
  bool operator==(const SolutionRecord&) const = default;
};

using SolutionMap = std::map<mpz_class, std::vector<SolutionRecord>>;

struct SearchBox {
  long k_max = 0;
  long n_max = 0;
};

// d (any nonsquare, not only squarefree) with at least two stated solutions
// x = P_n + P_m, n <= box.n_max, unit exponent <= box.k_max. Candidates are
// units of squarefree kernels; orders Z[s sqrt d0] are derived from them.
SolutionMap scan_final(const EqKind& eq, const SearchBox& box, const std::vector<UnitValue>& candidates);

// Same output by brute force over every nonsquare d <= d_max.
SolutionMap small_d_sweep(const EqKind& eq, long d_max, long k_max, long n_max);

SolutionMap restrict_d(const SolutionMap& m, const mpz_class& d_max);
SolutionMap squarefree_part(const SolutionMap& m);

// ---------------------------------------------------------------- theorem lists

struct ListedSolution {
  mpz_class d;
  long ordinal = 0;
  mpz_class x;
  bool x_printed = true;  // false where the list gives only P_n + P_m
  std::vector<Rep> reps;  // as printed
};

struct TheoremList {
  EqKind eq;
  std::vector<mpz_class> d_set;
  std::vector<ListedSolution> entries;
};

const std::vector<TheoremList>& theorem_lists();
const TheoremList& theorem_list(const EqKind& eq);

struct TheoremDiff {
  std::string where;     // "d=3 x1"
  std::string printed;
  std::string computed;
  // "mismatch": computation disagrees with the list;
  // "erratum":  a printed pair does not sum to the printed value;
  // "omission": the list leaves out a valid representation.
  std::string kind;
};

struct TheoremReport {
  EqKind eq;
  bool d_set_match = false;
  bool values_match = false;
  bool reps_match = false;  // modulo errata
  std::vector<TheoremDiff> diffs;
  std::vector<std::string> checked;      // one line per listed solution
  std::vector<mpz_class> nonsquarefree;  // extra exceptional d outside the squarefree statement
  bool ok() const { return d_set_match && values_match && reps_match; }
};

// Compares the squarefree part of `computed` against the encoded list.
TheoremReport verify_theorem(const TheoremList& list, const SolutionMap& computed);

std::string format_reps(const std::vector<Rep>& reps);

}  // namespace pellpad
