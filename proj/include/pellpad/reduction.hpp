#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pellpad/bigreal.hpp"
#include "pellpad/contfrac.hpp"
#include "pellpad/qalpha.hpp"

namespace pellpad {

class RootIsolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ThetaTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EpsilonNonpositive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- heights

struct HeightedNumber {
  std::string description;
  std::vector<mpz_class> minimal_polynomial;  // leading coefficient first, a0 > 0
  int degree = 0;
  BigReal height;
};

BigReal height_rational(const mpz_class& p, const mpz_class& q, long prec);

// (1/D)(log a0 + sum log max(|z_i|, 1)) with every conjugate z_i isolated in
// a certified disc (Weierstrass correction radii).
BigReal height_algebraic(const std::vector<mpz_class>& minpoly,
                         const PrecisionPolicy& pol = PrecisionPolicy::from_env());

HeightedNumber heighted(const QAlpha& x, const std::string& description,
                        const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- Matveev

struct LinearFormData {
  int t = 0;
  long D = 1;  // degree of the number field
  std::vector<BigReal> A;
  BigReal B;
};

// 1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * prod A_i  (no (1 + log B) factor).
BigReal matveev_constant(int t, long D, const std::vector<BigReal>& A, long prec);

// The full bound: matveev_constant(...) * (1 + log B). Then
// log |Lambda| > -matveev_bound(data) whenever Lambda != 0.
BigReal matveev_bound(const LinearFormData& data);

// ---------------------------------------------------------------- outcomes

enum class ReductionKind { legendre, bd, lll, matveev, gl };
const char* to_string(ReductionKind k);

struct ReductionOutcome {
  ReductionKind kind = ReductionKind::bd;
  std::string label;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::optional<mpz_class> bound;     // integer bound, when the step yields one
  std::optional<BigReal> real_bound;  // real-valued result (lower bound, gl value)
  bool success = false;
  std::string note;
};

// ---------------------------------------------------------------- Baker-Davenport

struct BDInstance {
  std::string label;
  RealFn tau, mu;
  RealFn A;
  RealFn B;  // B > 1
  mpz_class M;
};

struct BDOutcome {
  bool success = false;
  long index = -1;  // convergent index s with q_s > 6M and eps > 0
  mpz_class q;
  BigReal eps;
  mpz_class bound;  // no solution with w > bound
  int attempts = 0;
  std::string failure;

  ReductionOutcome outcome(const BDInstance& inst) const;
};

// Walks convergents from the first q > 6M; gives up after `max_tries`.
BDOutcome bd_reduce(const BDInstance& inst, const CFExpansion& cf, int max_tries = 50,
                    const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- LLL

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct LLLReduced {
  IntMatrix basis;
  // d[0] = 1, d[i] = Gram determinant of the first i rows; |b_i*|^2 = d[i]/d[i-1].
  std::vector<mpz_class> d;
  std::vector<mpq_class> gs_norms() const;
};

LLLReduced lll_reduce(IntMatrix rows, const mpq_class& delta = mpq_class(3, 4));
IntMatrix lll_reduce_basis(const IntMatrix& rows);

struct LLLInstance {
  std::string label;
  std::vector<RealFn> tau;
  std::vector<mpz_class> X;
  mpz_class C;
};

struct LLLOutcome {
  BigReal bound;  // |sum x_i tau_i| >= bound for 0 < max|x_i|, |x_i| <= X_i
  mpq_class theta2, Q, R;
  ReductionOutcome outcome(const LLLInstance& inst) const;
};

// Throws ThetaTooSmall when theta^2 < Q + R^2.
LLLOutcome lll_lower_bound(const LLLInstance& inst,
                           const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// ---------------------------------------------------------------- forms over Q(alpha)

// sum x_i log(eta_i) with |x_i| <= X_i, eta_i > 0 in Q(alpha).
struct LogTerm {
  std::string label;
  QAlpha eta;
  mpz_class X;
  RealFn value;  // log(eta); optional, defaults to log_of(eta)
};

struct ReducedForm {
  std::vector<LogTerm> terms;  // alpha, when present, is terms[base]
  int base = -1;
  std::vector<std::string> relations;  // human-readable record of each substitution
};

// Eliminates terms with eta_i = alpha^e * prod_{j != i} eta_j^{s_j}, s_j in {-1, 0, 1};
// coefficient bounds of the surviving terms absorb the eliminated ones.
ReducedForm reduce_form(std::vector<LogTerm> terms, int base);

struct FormBound {
  BigReal bound;
  std::string method;  // "trivial", "legendre", "lll"
  ReducedForm form;
};

// Lower bound for a nonzero form. Two surviving terms use Legendre, three or
// more use LLL with C = c_for_t(t).
FormBound form_lower_bound(const std::vector<LogTerm>& terms, int base,
                           const std::function<mpz_class(int t, const mpz_class& X)>& c_for_t,
                           const PrecisionPolicy& pol = PrecisionPolicy::from_env());

BigReal log_of(const QAlpha& eta, long prec);

// ---------------------------------------------------------------- resolvers

// If H > (4r^2)^r and L < H (log L)^r then L < 2^r H (log H)^r.
BigReal gl_resolve(int r, const BigReal& H);

// Largest x with x < a0 + a1 (1 + ln x) + a2 (1 + ln x)^2, as a certified
// integer: F(x) <= x and F'(x) < 1 both hold at the returned x.
struct FixedPoint {
  mpz_class x;
  int iterations = 0;
};
FixedPoint resolve_log_quadratic(const BigReal& a0, const BigReal& a1, const BigReal& a2,
                                 const mpz_class& start);

}  // namespace pellpad
