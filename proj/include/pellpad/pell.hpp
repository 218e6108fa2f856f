#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pellpad/bigreal.hpp"

namespace pellpad {

enum class Family { unit, quad };  // x^2 - d y^2 = +-1, X^2 - d Y^2 = +-4

struct EqKind {
  Family family = Family::unit;
  int sign = 1;

  // "unit-plus", "unit-minus", "quad-plus", "quad-minus"
  static EqKind parse(const std::string& s);
  std::string name() const;
  // Right-hand side of the stated equation: +-1 or +-4.
  int rhs() const { return (family == Family::unit ? 1 : 4) * sign; }
  bool operator==(const EqKind&) const = default;
};

const char* to_string(Family f);

class SignUnsolvable : public DomainError {
 public:
  using DomainError::DomainError;
};

class FactoringTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PellFundamental {
  mpz_class d;
  Family family = Family::unit;
  mpz_class x1, y1;
  int eps = 1;  // x1^2 - d y1^2 = eps (unit) or 4 eps (quad)
};

// A fundamental unit known only through x1 and its norm sign.
struct UnitValue {
  mpz_class x1;
  Family family = Family::unit;
  int eps = 1;

  // delta = x1 + sqrt(x1^2 - eps), or rho = (x1 + sqrt(x1^2 - 4 eps))/2.
  BigReal delta(long prec) const;
  BigReal log_delta(long prec) const;
  std::string describe() const;
  bool operator==(const UnitValue&) const = default;
  auto operator<=>(const UnitValue& o) const {
    if (family != o.family) return family <=> o.family;
    if (auto c = cmp(x1, o.x1); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return eps <=> o.eps;
  }
};

PellFundamental fundamental(const mpz_class& d, Family family);

// Exact x_k (unit) or X_k (quad), k >= 0.
mpz_class solution_x(const PellFundamental& f, long k);
mpz_class solution_y(const PellFundamental& f, long k);

struct StatedSolution {
  long ordinal = 0;  // position among solutions of the stated equation
  long k = 0;        // power of the fundamental unit
  mpz_class x;
};

std::vector<StatedSolution> stated_equation_solutions(const PellFundamental& f, int sign, long k_max);

// Lucas V_k(P, Q): V_0 = 2, V_1 = P, V_{k+1} = P V_k - Q V_{k-1}.
mpz_class lucas_v(const mpz_class& P, int Q, long k);
uint64_t lucas_v_mod(uint64_t P, int Q, long k, uint64_t mod);

// Q^{+-}_k(x1) for the unit family, R^{+-}_k(X1) for the quad family.
mpz_class q_closed_form(const mpz_class& x1, Family family, int sign, long k);

// Smallest admissible x1 for (family, sign).
long q_domain_min(Family family, int sign);

std::optional<mpz_class> invert_q(const mpz_class& target, Family family, int sign, long k);

struct DPair {
  mpz_class d, y1;
  bool operator==(const DPair&) const = default;
};

// All (d, y) with d y^2 = x1^2 - sign (unit) or x1^2 - 4 sign (quad), d >= 2 nonsquare.
std::vector<DPair> recover_d(const mpz_class& x1, Family family, int sign);

// Prime factorisation by trial division plus a primality check on the
// cofactor; throws FactoringTimeout when the cofactor is composite and large.
std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n);

}  // namespace pellpad
