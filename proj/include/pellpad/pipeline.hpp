#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "pellpad/bigreal.hpp"
#include "pellpad/candidates.hpp"
#include "pellpad/pell.hpp"
#include "pellpad/qalpha.hpp"
#include "pellpad/reduction.hpp"
#include "pellpad/search.hpp"

namespace pellpad {

// How integer cutoffs are taken from real inequalities alpha^w < Y.
//  published: w <= floor(log Y / log 1.33), the printed figures' convention,
//             plus the printed Legendre factors and LLL box sizes;
//  certified: w <= floor(log Y / log alpha) with exact constants throughout.
enum class Convention { published, certified };
const char* to_string(Convention c);
Convention parse_convention(const std::string& s);

// Printed figures for one family. They drive the published convention where
// the chain feeds a printed value forward, and serve as test oracles.
struct PrintedFigures {
  std::string good1, good2;      // coefficients of the two basic inequalities
  std::string n2_abs, n1_abs;    // absolute bounds
  std::string lll_X;             // box used for the first LLL cycle
  struct Cycle {
    long lambda = 0, nu = 0, n1 = 0;
    std::string n2;              // bound fed into the next stage
  };
  Cycle cycle[2];
  long k1 = 0;
  long n2_final = 0, k2_final = 0;
};

struct FamilySetup {
  Family family = Family::unit;
  QAlpha c;                // 2a or a
  std::string c_name;
  mpq_class lam1, lam2;    // |Lambda_1| < lam1 / alpha^n etc. before taking logs
  mpq_class gam1, gam2;    // |Gamma_1| < gam1 / alpha^n,  |Gamma_2| < gam2 / alpha^(n-m)
  long g3 = 0, g4 = 0, g5 = 0;  // |Gamma_i| < g_i n2 / alpha^(.)
  long bmul = 0;           // B = bmul * n2 in the three-term forms
  long leg3 = 0, leg5 = 0; // printed Legendre factors (published convention)
  long log_add = 0;        // log delta <= n1 log alpha + log(log_add)
  long k_shift = 0;        // delta^k <= 2 alpha^(n + k_shift)
  UnitValue smallest;      // least admissible unit
  PrintedFigures printed;
};

const FamilySetup& setup(Family f);

struct BoundCertificate {
  EqKind eq;
  std::string stage;
  Convention convention = Convention::published;
  std::map<std::string, mpz_class> symbols;  // n1, n2, k1, k2, lambda, chi, nu, n-m
  std::vector<ReductionOutcome> provenance;
  std::map<std::string, std::string> constants_used;  // decimal strings
  std::vector<std::string> notes;
  bool sampled = false;
};

// ---------------------------------------------------------------- absolute bounds

struct AbsoluteBounds {
  BigReal good1, good2;        // n < good1 (n-m) log n log delta;  n-m < good2 log n log delta
  BigReal matveev1, matveev2;  // the bare Matveev coefficients behind them
  BigReal g12;                 // n < g12 (log n)^2 (log delta)^2
  BigReal c3, c4, c5;          // lambda < c3 log n2, nu < c4 (log n2)^2, n1 < c5 (log n2)^4
  BigReal L4;                  // log delta < L4 (log n2)^4
  BigReal H;                   // n2 < H (log n2)^10
  mpz_class n2, n1, k1;
  BoundCertificate cert;
};

AbsoluteBounds absolute_bounds(Family f, const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- first reduction

struct SweepOptions {
  bool full = false;
  std::vector<long> lambdas{1, 100, 321, 1000, 2714};  // sampled lambda values, clamped to the range
  std::vector<long> chis_after{1, 2, 50};              // sampled chi - lambda offsets, plus chi = nu
};

struct CycleOptions {
  Convention convention = Convention::published;
  SweepOptions sweep;
};

struct FormRecord {
  long lambda = 0, chi = 0;
  std::string method;
  BigReal bound;
};

struct CycleReport {
  int cycle = 0;
  mpz_class M;                  // n2 bound entering the cycle
  std::vector<mpz_class> X;     // LLL boxes
  LegendreResult legendre;      // on tau
  mpz_class lambda;             // lambda cutoff
  std::vector<FormRecord> gamma4;
  FormRecord gamma4_min;
  mpz_class nu;
  long gamma5_count = 0;
  FormRecord gamma5_min;
  mpz_class n1_lll;
  mpz_class aM_equal;           // max a(M) over the tau_lambda family
  long aM_equal_lambda = 0;
  std::vector<long> rational_lambdas;  // c (1 + alpha^-lambda) a power of alpha
  mpz_class n1_equal;
  mpz_class n1;                 // max over the three cases
  mpz_class n1_used;            // fed forward
  BigReal log_delta;            // log delta < log_delta
  mpz_class n2_gl, n2_fixed, n2;
  mpz_class n2_used;
  mpz_class k1;                 // derived from n1_used
  bool sampled = false;
  BoundCertificate cert;
};

CycleReport reduction_cycle(Family f, int cycle, const mpz_class& M, const AbsoluteBounds& ab,
                            const CycleOptions& opt,
                            const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// Lambda cutoff alone (step (a)); cheap enough for tests.
mpz_class lambda_cutoff(Family f, const mpz_class& M, Convention conv, LegendreResult* leg = nullptr,
                        const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// Lower bound on the three-term form for one lambda.
FormRecord gamma4_bound(Family f, long lambda, const std::vector<mpz_class>& X, const mpz_class& C_base,
                        const PrecisionPolicy& pol = PrecisionPolicy::from_env());
// Lower bound on the four-term form for one (lambda, chi), lambda < chi.
FormRecord gamma5_bound(Family f, long lambda, long chi, const std::vector<mpz_class>& X,
                        const mpz_class& C_base, const PrecisionPolicy& pol = PrecisionPolicy::from_env());
// nu cutoff implied by a lower bound on |Gamma_4|.
mpz_class nu_from_bound(Family f, const mpz_class& M, const BigReal& bound, Convention conv);

struct FirstReduction {
  CycleReport cycles[2];
  BoundCertificate cert;
};

FirstReduction first_reduction(Family f, const AbsoluteBounds& ab, const CycleOptions& opt,
                               const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- final reduction

struct UnitReduction {
  UnitValue unit;
  BDOutcome stage1;
  ReductionOutcome stage1_record;
  long stage2_max = 0;        // max n2 over j = 1..b_t
  long stage2_argmax = 0;
  std::vector<long> legendre_j;  // j where c (1 + alpha^-j) is a power of alpha
};

struct FinalRanges {
  long n_max = 0;  // n2 bound after both passes
  long k_max = 0;  // k2 bound
};

struct FinalReduction {
  TableSearchResult table;
  std::vector<UnitReduction> units;  // table order of the primitive units
  FinalRanges box;
  BoundCertificate cert;
};

struct FinalOptions {
  Convention convention = Convention::published;
  long n1 = 0;                 // table search range
  long k1 = 0;
  mpz_class M;                 // n2 bound from the first reduction
};

UnitReduction reduce_unit(Family f, const UnitValue& u, const mpz_class& M,
                          const PrecisionPolicy& pol = PrecisionPolicy::from_env());
long k2_cutoff(Family f, long n_max, Convention conv);

FinalReduction final_reduction(Family f, const FinalOptions& opt,
                               const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- certify

struct CertifyOptions {
  Convention convention = Convention::published;
  bool sample = true;
  SweepOptions sweep;  // used when sample is set
};

struct CertifyCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct Certification {
  EqKind eq;
  CertifyOptions options;
  AbsoluteBounds absolute;
  FirstReduction first;
  FinalReduction final;
  SearchBox box;  // box actually scanned
  SolutionMap solutions;
  TheoremReport theorem;
  std::vector<CertifyCheck> checks;  // chain invariants
  bool chain_ok() const;
  bool ok() const { return chain_ok() && theorem.ok(); }
};

// absolute -> first -> final -> scan_final -> theorem comparison.
Certification certify(const EqKind& eq, const CertifyOptions& opt,
                      const PrecisionPolicy& pol = PrecisionPolicy::from_env());
// Search and checks for `eq`, reusing the bound chain of `base` (same family).
Certification certify(const EqKind& eq, const Certification& base);

}  // namespace pellpad
