#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "pellpad/certificate.hpp"
#include "pellpad/search.hpp"

using namespace pellpad;

namespace {

const EqKind kinds[] = {{Family::unit, 1}, {Family::unit, -1}, {Family::quad, 1}, {Family::quad, -1}};

// x values of the stated equation for d by the norm form alone: walk y >= 1
// upward until d y^2 passes x_cap^2.
std::set<mpz_class> brute_xs(long d, long rhs, long x_cap) {
  std::set<mpz_class> out;
  for (long y = 1; d * y * y - 4 <= x_cap * x_cap; ++y) {
    long v = d * y * y + rhs;
    if (v <= 0) continue;
    long r = (long)std::sqrt((double)v);
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    if (r * r == v && r <= x_cap) out.insert(r);
  }
  return out;
}

std::vector<UnitValue> kernel_units(Family f, long d_max) {
  std::vector<UnitValue> out;
  for (long d = 2; d <= d_max; ++d) {
    if (!is_squarefree(d)) continue;
    auto p = fundamental(d, f);
    out.push_back({p.x1, f, p.eps});
  }
  return out;
}

}  // namespace

TEST_CASE("sweep examples") {
  auto m = small_d_sweep({Family::unit, 1}, 50, 40, 120);
  REQUIRE(m.count(2));
  std::vector<mpz_class> xs;
  for (auto& r : m[2]) xs.push_back(r.x);
  CHECK(xs == std::vector<mpz_class>{3, 17});
  CHECK(m.count(3));
  CHECK(m.count(7) == 0);
  for (auto& [d, recs] : m) {
    CHECK(recs.size() >= 2);
    for (auto& r : recs) {
      CHECK(r.x * r.x - r.eq.rhs() == d * sqrt((r.x * r.x - r.eq.rhs()) / d) * sqrt((r.x * r.x - r.eq.rhs()) / d));
      for (auto [n, mm] : r.reps) CHECK(padovan(n) + padovan(mm) == r.x);
    }
  }
}

TEST_CASE("sweep x values against the norm form") {
  // For d <= 30 every solution with x <= 2 P_45 appears.
  const long N = 45;
  long cap = 2 * padovan(N).get_si();
  for (const EqKind& eq : kinds) {
    auto m = small_d_sweep(eq, 30, 200, N);
    for (long d = 2; d <= 30; ++d) {
      mpz_class r = sqrt(mpz_class(d));
      if (r * r == d) continue;
      std::set<mpz_class> want;
      for (const auto& x : brute_xs(d, eq.rhs(), cap))
        if (!representations(x, N).empty()) want.insert(x);
      std::set<mpz_class> got;
      if (m.count(d))
        for (auto& rec : m[d]) got.insert(rec.x);
      if (want.size() >= 2)
        CHECK(got == want);
      else
        CHECK(got.empty());
    }
  }
}

TEST_CASE("scan_final agrees with the sweep on small d") {
  SearchBox box{60, 150};
  for (const EqKind& eq : kinds) {
    auto scanned = restrict_d(scan_final(eq, box, kernel_units(eq.family, 200)), 200);
    auto swept = small_d_sweep(eq, 200, box.k_max, box.n_max);
    CHECK(scanned.size() == swept.size());
    for (auto& [d, recs] : swept) {
      REQUIRE(scanned.count(d));
      CHECK(scanned[d] == recs);
    }
  }
}

TEST_CASE("squarefree_part and restrict_d") {
  auto m = small_d_sweep({Family::unit, 1}, 30, 40, 120);
  CHECK(m.count(8));
  auto sf = squarefree_part(m);
  CHECK(sf.count(8) == 0);
  CHECK(sf.count(2));
  CHECK(restrict_d(m, 5).rbegin()->first <= 5);
}

TEST_CASE("verify_theorem classifies differences") {
  EqKind eq{Family::unit, -1};
  auto m = small_d_sweep(eq, 40, 60, 120);
  TheoremReport ok = verify_theorem(theorem_list(eq), m);
  CHECK(ok.d_set_match);
  CHECK(ok.values_match);
  CHECK(ok.reps_match);
  bool erratum = false;
  for (auto& d : ok.diffs) erratum = erratum || d.kind == "erratum";
  CHECK(erratum);  // d = 2, x = 41

  auto missing = m;
  missing.erase(5);
  TheoremReport bad = verify_theorem(theorem_list(eq), missing);
  CHECK_FALSE(bad.d_set_match);
  CHECK_FALSE(bad.ok());

  auto extra = m;
  SolutionRecord fake{mpz_class(11), eq, 1, 1, mpz_class(10), {{10, 4}}};
  extra[11] = {fake, fake};
  CHECK_FALSE(verify_theorem(theorem_list(eq), extra).d_set_match);
}

TEST_CASE("theorem lists") {
  CHECK(theorem_list({Family::unit, 1}).d_set == std::vector<mpz_class>{2, 3, 6, 15, 110, 483});
  CHECK(theorem_list({Family::unit, -1}).d_set == std::vector<mpz_class>{2, 5, 10, 17});
  CHECK(theorem_list({Family::quad, 1}).d_set == std::vector<mpz_class>{3, 5, 21});
  CHECK(theorem_list({Family::quad, -1}).d_set == std::vector<mpz_class>{2, 5});
  CHECK(theorem_lists().size() == 4);
}

TEST_CASE("format_reps") {
  CHECK(format_reps({{9, 3}, {8, 6}}) == "P9+P3 = P8+P6");
}

TEST_CASE("solution map JSON round trip") {
  EqKind eq{Family::quad, 1};
  auto m = small_d_sweep(eq, 30, 40, 100);
  REQUIRE_FALSE(m.empty());
  json j = to_json(m);
  std::string text = j.dump();
  auto back = solutions_from_json(json::parse(text), eq);
  CHECK(back == m);
}
