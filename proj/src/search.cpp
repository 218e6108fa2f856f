#include "pellpad/search.hpp"

#include <algorithm>
#include <set>

#include "pellpad/candidates.hpp"

namespace pellpad {

namespace {

struct Walk {
  std::vector<mpz_class> x, y;  // index k, starting at k = 0
  std::vector<int> norm;
};

// Powers of the fundamental unit until x exceeds `limit` or k exceeds `k_max`.
Walk walk_unit(const PellFundamental& f, const mpz_class& limit, long k_max) {
  Walk w;
  mpz_class c = f.family == Family::unit ? mpz_class(2 * f.x1) : f.x1;
  mpz_class x0 = f.family == Family::unit ? 1 : 2, x1 = f.x1, y0 = 0, y1 = f.y1;
  w.x.push_back(x0);
  w.y.push_back(y0);
  w.norm.push_back(1);
  for (long k = 1; k <= k_max && x1 <= limit; ++k) {
    w.x.push_back(x1);
    w.y.push_back(y1);
    w.norm.push_back((f.eps < 0 && k % 2 == 1) ? -1 : 1);
    mpz_class nx = c * x1 - f.eps * x0, ny = c * y1 - f.eps * y0;
    x0 = std::move(x1);
    x1 = std::move(nx);
    y0 = std::move(y1);
    y1 = std::move(ny);
  }
  return w;
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out{1};
  if (n <= 1) return out;
  for (auto& [p, e] : factor(n)) {
    size_t base = out.size();
    mpz_class pk = 1;
    for (unsigned j = 1; j <= e; ++j) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

mpz_class sum_limit(long n_max) { return 2 * padovan(n_max); }

}  // namespace

SolutionMap scan_final(const EqKind& eq, const SearchBox& box, const std::vector<UnitValue>& candidates) {
  SumIndex sidx(box.n_max);
  const mpz_class limit = sum_limit(box.n_max);
  std::set<mpz_class> kernels;
  for (const auto& u : candidates) {
    if (u.family != eq.family) throw DomainError("scan_final: candidate family differs from equation");
    mpz_class N = u.x1 * u.x1 - (eq.family == Family::unit ? u.eps : 4 * u.eps);
    mpz_class d0 = squarefree_split(N).first;
    if (d0 >= 2) kernels.insert(d0);
  }
  SolutionMap out;
  for (const auto& d0 : kernels) {
    PellFundamental f = fundamental(d0, eq.family);
    if (eq.sign < 0 && f.eps > 0) continue;
    // Exponents are of the unit of d0; an order of index s has unit delta^r, r >= 1,
    // so walking r * k_max powers covers every order.
    Walk w = walk_unit(f, limit, box.k_max * 64);
    const long K = (long)w.x.size() - 1;
    std::vector<std::vector<Rep>> reps(K + 1);
    std::vector<long> hits;
    for (long k = 1; k <= K; ++k) {
      if (w.norm[k] != eq.sign) continue;
      reps[k] = sidx.find(w.x[k]);
      if (!reps[k].empty()) hits.push_back(k);
    }
    if (hits.size() < 2) continue;
    std::set<mpz_class> orders{1};
    for (size_t a = 0; a < hits.size(); ++a)
      for (size_t b = a + 1; b < hits.size(); ++b)
        for (auto& s : divisors(gcd(w.y[hits[a]], w.y[hits[b]]))) orders.insert(s);
    for (const auto& s : orders) {
      long r = 0;
      for (long k = 1; k <= K && r == 0; ++k)
        if (mpz_divisible_p(w.y[k].get_mpz_t(), s.get_mpz_t())) r = k;
      if (r == 0) continue;
      std::vector<SolutionRecord> recs;
      long ordinal = 0;
      for (long k = r; k <= K && k / r <= box.k_max; k += r) {
        if (w.norm[k] != eq.sign) continue;
        ++ordinal;
        if (!reps[k].empty()) recs.push_back({d0 * s * s, eq, ordinal, k / r, w.x[k], reps[k]});
      }
      if (recs.size() >= 2) out[d0 * s * s] = std::move(recs);
    }
  }
  return out;
}

SolutionMap small_d_sweep(const EqKind& eq, long d_max, long k_max, long n_max) {
  SumIndex sidx(n_max);
  const mpz_class limit = sum_limit(n_max);
  SolutionMap out;
  for (long dv = 2; dv <= d_max; ++dv) {
    mpz_class d = dv;
    if (mpz_perfect_square_p(d.get_mpz_t())) continue;
    PellFundamental f = fundamental(d, eq.family);
    if (eq.sign < 0 && f.eps > 0) continue;
    Walk w = walk_unit(f, limit, k_max);
    std::vector<SolutionRecord> recs;
    long ordinal = 0;
    for (long k = 1; k < (long)w.x.size(); ++k) {
      if (w.norm[k] != eq.sign) continue;
      ++ordinal;
      auto reps = sidx.find(w.x[k]);
      if (!reps.empty()) recs.push_back({d, eq, ordinal, k, w.x[k], reps});
    }
    if (recs.size() >= 2) out[d] = std::move(recs);
  }
  return out;
}

SolutionMap restrict_d(const SolutionMap& m, const mpz_class& d_max) {
  SolutionMap out;
  for (const auto& [d, recs] : m)
    if (d <= d_max) out[d] = recs;
  return out;
}

SolutionMap squarefree_part(const SolutionMap& m) {
  SolutionMap out;
  for (const auto& [d, recs] : m)
    if (is_squarefree(d)) out[d] = recs;
  return out;
}

std::string format_reps(const std::vector<Rep>& reps) {
  std::string s;
  for (const auto& [n, m] : reps) {
    if (!s.empty()) s += " = ";
    s += "P" + std::to_string(n) + "+P" + std::to_string(m);
  }
  return s;
}

// ---------------------------------------------------------------- theorem lists

namespace {

ListedSolution L(long d, long idx, long x, std::vector<Rep> reps, bool printed = true) {
  return {d, idx, x, printed, std::move(reps)};
}

std::vector<TheoremList> build_lists() {
  std::vector<TheoremList> v;
  v.push_back({{Family::unit, 1},
               {2, 3, 6, 15, 110, 483},
               {L(2, 1, 3, {{6, 0}, {5, 3}}), L(2, 2, 17, {{12, 3}}),
                L(3, 1, 2, {{3, 0}, {3, 3}}), L(3, 2, 7, {{9, 0}, {7, 6}}), L(3, 3, 26, {{13, 8}}),
                L(6, 1, 5, {{8, 0}, {7, 3}, {6, 5}}), L(6, 2, 49, {{16, 0}, {15, 12}, {14, 13}}),
                L(15, 1, 4, {{7, 0}, {6, 3}, {5, 5}}), L(15, 2, 31, {{14, 6}}),
                L(110, 1, 21, {{13, 0}, {12, 8}, {11, 10}}), L(110, 2, 881, {{26, 17}, {25, 22}}),
                L(483, 1, 22, {{13, 3}}), L(483, 2, 967, {{26, 20}, {25, 23}})}});
  v.push_back({{Family::unit, -1},
               {2, 5, 10, 17},
               {L(2, 1, 1, {{3, 0}}), L(2, 2, 7, {{9, 0}, {8, 5}, {7, 6}}),
                L(2, 3, 41, {{15, 7}, {14, 10}, {13, 12}}),
                L(5, 1, 2, {{5, 0}, {3, 3}}), L(5, 2, 38, {{15, 3}}),
                L(10, 1, 3, {{6, 0}, {5, 3}}), L(10, 2, 117, {{19, 6}}),
                L(17, 1, 4, {{7, 0}, {6, 3}, {5, 5}}), L(17, 2, 268, {{22, 6}}, false)}});
  v.push_back({{Family::quad, 1},
               {3, 5, 21},
               {L(3, 1, 4, {{7, 0}, {6, 3}, {5, 5}}), L(3, 2, 14, {{11, 5}, {10, 8}}), L(3, 3, 52, {{16, 6}}),
                L(5, 1, 3, {{6, 0}, {5, 3}}), L(5, 2, 7, {{9, 0}, {7, 6}}), L(5, 3, 18, {{12, 5}}),
                L(21, 1, 5, {{8, 0}, {7, 3}, {6, 5}}), L(21, 2, 23, {{13, 5}, {12, 9}}),
                L(21, 3, 2525, {{30, 11}})}});
  v.push_back({{Family::quad, -1},
               {2, 5},
               {L(2, 1, 2, {{5, 0}, {3, 3}}), L(2, 2, 14, {{11, 5}, {10, 8}}),
                L(5, 1, 1, {{3, 0}}), L(5, 2, 4, {{7, 0}, {6, 3}, {5, 5}}),
                L(5, 3, 11, {{10, 5}, {9, 7}}), L(5, 4, 29, {{14, 3}})}});
  return v;
}

}  // namespace

const std::vector<TheoremList>& theorem_lists() {
  static const std::vector<TheoremList> lists = build_lists();
  return lists;
}

const TheoremList& theorem_list(const EqKind& eq) {
  for (const auto& l : theorem_lists())
    if (l.eq == eq) return l;
  throw DomainError("no theorem list for " + eq.name());
}

TheoremReport verify_theorem(const TheoremList& list, const SolutionMap& computed) {
  TheoremReport rep;
  rep.eq = list.eq;
  SolutionMap sq = squarefree_part(computed);
  for (const auto& [d, recs] : computed)
    if (!sq.count(d)) rep.nonsquarefree.push_back(d);

  std::vector<mpz_class> got;
  for (const auto& [d, recs] : sq) got.push_back(d);
  rep.d_set_match = got == list.d_set;
  if (!rep.d_set_match) {
    std::string a, b;
    for (auto& d : list.d_set) a += d.get_str() + " ";
    for (auto& d : got) b += d.get_str() + " ";
    rep.diffs.push_back({"d set", a, b, "mismatch"});
  }
  rep.values_match = true;
  rep.reps_match = true;
  for (const auto& d : list.d_set) {
    std::vector<const ListedSolution*> printed;
    for (const auto& e : list.entries)
      if (e.d == d) printed.push_back(&e);
    auto it = sq.find(d);
    const std::vector<SolutionRecord> none;
    const auto& recs = it == sq.end() ? none : it->second;
    if (recs.size() != printed.size()) {
      rep.values_match = false;
      rep.diffs.push_back({"d=" + d.get_str() + " count", std::to_string(printed.size()),
                           std::to_string(recs.size()), "mismatch"});
    }
    for (size_t i = 0; i < printed.size(); ++i) {
      const ListedSolution& e = *printed[i];
      std::string where = "d=" + d.get_str() + " x" + std::to_string(e.ordinal);
      if (i >= recs.size()) continue;
      const SolutionRecord& r = recs[i];
      mpz_class x = e.x;
      if (r.x != x) {
        rep.values_match = false;
        rep.diffs.push_back({where + " value", x.get_str(), r.x.get_str(), "mismatch"});
        continue;
      }
      std::vector<Rep> bad, missing, extra;
      for (const auto& p : e.reps) {
        if (padovan(p.first) + padovan(p.second) != x)
          bad.push_back(p);
        else if (std::find(r.reps.begin(), r.reps.end(), p) == r.reps.end())
          missing.push_back(p);
      }
      for (const auto& p : r.reps)
        if (std::find(e.reps.begin(), e.reps.end(), p) == e.reps.end()) extra.push_back(p);
      if (!missing.empty()) rep.reps_match = false;
      if (!bad.empty())
        rep.diffs.push_back({where + " representation", format_reps(bad) + " (sum is not " + x.get_str() + ")",
                             format_reps(r.reps), "erratum"});
      if (!missing.empty())
        rep.diffs.push_back({where + " representation", format_reps(missing), format_reps(r.reps), "mismatch"});
      if (!extra.empty() && bad.empty())
        rep.diffs.push_back({where + " representation", format_reps(e.reps),
                             format_reps(r.reps) + " (list omits " + format_reps(extra) + ")", "omission"});
      std::string line = where + " = " + x.get_str() + " = " + format_reps(r.reps) + "  [ordinal " +
                         std::to_string(r.ordinal) + ", k=" + std::to_string(r.k_unit) + "]";
      if (!e.x_printed) line += "  [value not printed in the list]";
      rep.checked.push_back(line);
    }
  }
  return rep;
}

}  // namespace pellpad
