#include "pellpad/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace pellpad {

namespace {

std::vector<uint32_t> primes_below(uint32_t lim) {
  std::vector<bool> comp(lim, false);
  std::vector<uint32_t> out;
  for (uint32_t i = 2; i < lim; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (uint64_t j = (uint64_t)i * i; j < lim; j += i) comp[j] = true;
  }
  return out;
}

const std::vector<uint32_t>& small_primes() {
  static const std::vector<uint32_t> p = primes_below(1u << 20);
  return p;
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
  // p prime: a^(p-2)
  uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Residues of Q^s_k(x) mod p over all x.
std::vector<char> image_mod(Family f, int s, long k, uint64_t p) {
  std::vector<char> img(p, 0);
  uint64_t half = inv_mod(2, p);
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t v = f == Family::unit ? lucas_v_mod(2 * x % p, s, k, p) * half % p : lucas_v_mod(x, s, k, p);
    img[v] = 1;
  }
  return img;
}

struct Found {
  int sign;
  long k;
  mpz_class x;
  bool operator<(const Found& o) const {
    return std::tie(sign, x, k) < std::tie(o.sign, o.x, o.k);
  }
};

class Searcher {
 public:
  Searcher(const TableSearchConfig& cfg) : cfg_(cfg), sidx_(cfg.n_max) {
    tmax_ = 2 * sidx_.value(cfg.n_max);
  }

  TableSearchResult run() {
    TableSearchResult res;
    for (int s : {1, -1}) {
      for (uint32_t k : small_primes()) {
        if (k > cfg_.k_max) break;
        if (q_closed_form(q_domain_min(cfg_.family, s), cfg_.family, s, k) > tmax_) break;
        if (k <= cfg_.sieve_k_max)
          sieve(s, k, res);
        else
          enumerate(s, k);
      }
    }
    collect(res);
    return res;
  }

 private:
  void record(int s, long k, const mpz_class& x, long n, long m) {
    if (k > cfg_.k_max) return;
    Found f{s, k, x};
    auto it = found_.find(f);
    if (it == found_.end()) found_.emplace(f, std::make_pair(n, m));
  }

  // All (r, x, s) with Q^s_r(x) = y and s^r = sy, including r = 1.
  void descend(const mpz_class& y, int sy, long mult, long n, long m, long outer) {
    record(sy, mult * outer, y, n, m);
    for (uint32_t q : small_primes()) {
      mpz_class lo1 = q_closed_form(q_domain_min(cfg_.family, 1), cfg_.family, 1, q);
      mpz_class lo2 = q_closed_form(q_domain_min(cfg_.family, -1), cfg_.family, -1, q);
      if (std::min(lo1, lo2) > y) break;
      for (int sz : {1, -1}) {
        int pw = (sz < 0 && q % 2 == 1) ? -1 : 1;
        if (pw != sy) continue;
        if (auto z = invert_q(y, cfg_.family, sz, q)) descend(*z, sz, mult * q, n, m, outer);
      }
    }
  }

  void hit(int s, long k, const mpz_class& y, long n, long m) { descend(y, s, 1, n, m, k); }

  void sieve(int s, long k, TableSearchResult& res) {
    std::vector<uint32_t> ps;
    for (uint32_t p : small_primes()) {
      if (p < 11) continue;
      if (k == 2 || p % k == 1 || p % k == k - 1) ps.push_back(p);
      if ((int)ps.size() == cfg_.sieve_primes) break;
    }
    const long N = cfg_.n_max;
    std::vector<std::vector<uint32_t>> res_mod(ps.size(), std::vector<uint32_t>(N + 1));
    std::vector<std::vector<char>> img(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) {
      for (long n = 0; n <= N; ++n) res_mod[i][n] = mpz_fdiv_ui(sidx_.value(n).get_mpz_t(), ps[i]);
      img[i] = image_mod(cfg_.family, s, k, ps[i]);
    }
    mpz_class qmin = q_closed_form(q_domain_min(cfg_.family, s), cfg_.family, s, k);
    const auto& r0 = res_mod[0];
    const auto& i0 = img[0];
    const uint32_t p0 = ps[0];
    for (long n = 0; n <= N; ++n) {
      for (long m = 0; m <= n; m = (m == 0 ? 3 : m + 1)) {
        uint32_t v = r0[n] + r0[m];
        if (v >= p0) v -= p0;
        if (!i0[v]) continue;
        bool ok = true;
        for (size_t i = 1; i < ps.size() && ok; ++i) {
          uint32_t w = res_mod[i][n] + res_mod[i][m];
          if (w >= ps[i]) w -= ps[i];
          ok = img[i][w];
        }
        if (!ok) continue;
        ++res.sieve_survivors;
        mpz_class T = sidx_.value(n) + sidx_.value(m);
        if (T < qmin) continue;
        if (auto x = invert_q(T, cfg_.family, s, k)) hit(s, k, *x, canonical_index(n), canonical_index(m));
      }
    }
  }

  void enumerate(int s, long k) {
    for (mpz_class x = q_domain_min(cfg_.family, s);; ++x) {
      mpz_class T = q_closed_form(x, cfg_.family, s, k);
      if (T > tmax_) break;
      auto reps = sidx_.find(T);
      if (!reps.empty()) hit(s, k, x, reps[0].first, reps[0].second);
    }
  }

  void collect(TableSearchResult& res) {
    for (auto& [f, nm] : found_) {
      if (f.k < 2) continue;
      res.hits.push_back({f.sign, f.k, f.x, nm.first, nm.second});
    }
    std::map<std::pair<int, mpz_class>, const TableHit*> first;
    for (auto& h : res.hits) {
      auto key = std::make_pair(h.sign, h.x1);
      auto it = first.find(key);
      if (it == first.end() || h.k < it->second->k) first[key] = &h;
    }
    for (auto& [key, h] : first) {
      mpz_class N = h->x1 * h->x1 - (cfg_.family == Family::unit ? 1 : 4) * h->sign;
      auto [d, y] = squarefree_split(N);
      if (d < 2) continue;
      TableRow row;
      row.sign = h->sign;
      row.k1 = h->k;
      row.x1 = h->x1;
      row.y1 = y;
      row.d = d;
      row.n = h->n;
      row.m = h->m;
      PellFundamental f = fundamental(d, cfg_.family);
      row.fundamental = f.x1 == row.x1 && f.y1 == row.y1 && f.eps == row.sign;
      res.rows.push_back(row);
    }
    std::sort(res.rows.begin(), res.rows.end(), [](const TableRow& a, const TableRow& b) {
      return std::tie(b.sign, a.x1) < std::tie(a.sign, b.x1);
    });
    for (auto& r : res.rows) res.units.push_back(r.unit(cfg_.family));
    res.primitive = primitive_units(res.units, &res.power_of);
  }

  TableSearchConfig cfg_;
  SumIndex sidx_;
  mpz_class tmax_;
  std::map<Found, std::pair<long, long>> found_;
};

}  // namespace

std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n) {
  mpz_class d = 1, y = 1;
  for (auto& [p, e] : factor(n)) {
    if (e % 2) d *= p;
    for (unsigned i = 0; i < e / 2; ++i) y *= p;
  }
  return {d, y};
}

bool is_squarefree(const mpz_class& d) {
  for (auto& [p, e] : factor(d))
    if (e > 1) return false;
  return true;
}

std::optional<long> power_relation(const UnitValue& u, const UnitValue& v) {
  if (u.family != v.family) return std::nullopt;
  double r = u.log_delta(128).approx() / v.log_delta(128).approx();
  long k = std::lround(r);
  if (k < 2 || std::fabs(r - k) > 1e-6) return std::nullopt;
  int sign = (v.eps < 0 && k % 2 == 1) ? -1 : 1;
  if (sign != u.eps) return std::nullopt;
  if (q_closed_form(v.x1, v.family, v.eps, k) != u.x1) return std::nullopt;
  return k;
}

std::vector<UnitValue> primitive_units(std::vector<UnitValue> units,
                                       std::map<std::string, std::string>* removed) {
  std::sort(units.begin(), units.end(), [](const UnitValue& a, const UnitValue& b) {
    return a.log_delta(128).approx() < b.log_delta(128).approx();
  });
  std::vector<UnitValue> out;
  for (const auto& u : units) {
    bool power = false;
    for (const auto& v : out) {
      if (auto r = power_relation(u, v)) {
        power = true;
        if (removed) (*removed)[u.describe()] = "(" + v.describe() + ")^" + std::to_string(*r);
        break;
      }
    }
    if (!power) out.push_back(u);
  }
  return out;
}

TableSearchResult table_search(const TableSearchConfig& cfg) {
  Searcher s(cfg);
  return s.run();
}

}  // namespace pellpad
