#include "pellpad/certificate.hpp"

#include <ostream>

namespace pellpad {

namespace {

std::string str(const mpz_class& z) { return z.get_str(); }

json reps_json(const std::vector<Rep>& reps) {
  json a = json::array();
  for (const auto& [n, m] : reps) a.push_back({n, m});
  return a;
}

mpz_class mpz_field(const json& j, const char* key) {
  if (!j.contains(key)) throw CertificateFormatError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  mpz_class z;
  if (v.is_string()) {
    if (z.set_str(v.get<std::string>(), 10) != 0) throw CertificateFormatError(std::string("bad integer in '") + key + "'");
  } else if (v.is_number_integer()) {
    z = v.get<long>();
  } else {
    throw CertificateFormatError(std::string("field '") + key + "' is not an integer");
  }
  return z;
}

}  // namespace

json to_json(const BigReal& x) {
  return {{"mid", x.to_string(30)}, {"sci", x.sci(6)}, {"prec", x.prec()}};
}

json to_json(const ReductionOutcome& o) {
  json j{{"kind", to_string(o.kind)}, {"label", o.label}, {"success", o.success}};
  json in = json::object();
  for (const auto& [k, v] : o.inputs) in[k] = v;
  j["inputs"] = in;
  if (o.bound) j["bound"] = str(*o.bound);
  if (o.real_bound) j["real_bound"] = o.real_bound->sci(8);
  if (!o.note.empty()) j["note"] = o.note;
  return j;
}

json to_json(const BoundCertificate& c) {
  json j{{"eq_family", to_string(c.eq.family)}, {"stage", c.stage}, {"convention", to_string(c.convention)},
         {"sampled", c.sampled}};
  json s = json::object();
  for (const auto& [k, v] : c.symbols) s[k] = str(v);
  j["symbols"] = s;
  json p = json::array();
  for (const auto& o : c.provenance) p.push_back(to_json(o));
  j["provenance"] = p;
  json k = json::object();
  for (const auto& [a, b] : c.constants_used) k[a] = b;
  j["constants_used"] = k;
  j["notes"] = c.notes;
  return j;
}

json to_json(const SolutionRecord& r) {
  return {{"ordinal", r.ordinal}, {"k_unit", r.k_unit}, {"x", str(r.x)}, {"reps", reps_json(r.reps)}};
}

json to_json(const SolutionMap& m) {
  json j = json::object();
  for (const auto& [d, recs] : m) {
    json a = json::array();
    for (const auto& r : recs) a.push_back(to_json(r));
    j[str(d)] = a;
  }
  return j;
}

json to_json(const TheoremReport& r) {
  json diffs = json::array();
  for (const auto& d : r.diffs)
    diffs.push_back({{"kind", d.kind}, {"where", d.where}, {"printed", d.printed}, {"computed", d.computed}});
  json ns = json::array();
  for (const auto& d : r.nonsquarefree) ns.push_back(str(d));
  return {{"eq", r.eq.name()},       {"ok", r.ok()},          {"d_set_match", r.d_set_match},
          {"values_match", r.values_match}, {"reps_match", r.reps_match}, {"diffs", diffs},
          {"checked", r.checked},    {"nonsquarefree_d", ns}};
}

json to_json(const AbsoluteBounds& ab) {
  return {{"good1", ab.good1.sci(6)}, {"good2", ab.good2.sci(6)}, {"g12", ab.g12.sci(6)},
          {"c3", ab.c3.sci(6)},       {"c4", ab.c4.sci(6)},       {"c5", ab.c5.sci(6)},
          {"L4", ab.L4.sci(6)},       {"H", ab.H.sci(6)},         {"n2", str(ab.n2)},
          {"n1", str(ab.n1)},         {"k1", str(ab.k1)},         {"certificate", to_json(ab.cert)}};
}

json to_json(const CycleReport& c) {
  json X = json::array();
  for (const auto& x : c.X) X.push_back(str(x));
  return {{"cycle", c.cycle},
          {"M", str(c.M)},
          {"X", X},
          {"legendre", {{"N", c.legendre.N}, {"aM", str(c.legendre.aM)}, {"argmax", c.legendre.argmax}}},
          {"lambda", str(c.lambda)},
          {"gamma4_instances", c.gamma4.size()},
          {"gamma4_min", {{"lambda", c.gamma4_min.lambda}, {"method", c.gamma4_min.method}, {"bound", c.gamma4_min.bound.sci(6)}}},
          {"nu", str(c.nu)},
          {"gamma5_instances", c.gamma5_count},
          {"gamma5_min",
           {{"lambda", c.gamma5_min.lambda}, {"chi", c.gamma5_min.chi}, {"method", c.gamma5_min.method},
            {"bound", c.gamma5_min.bound.sci(6)}}},
          {"n1_lll", str(c.n1_lll)},
          {"aM_equal", str(c.aM_equal)},
          {"aM_equal_lambda", c.aM_equal_lambda},
          {"rational_lambdas", c.rational_lambdas},
          {"n1_equal", str(c.n1_equal)},
          {"n1", str(c.n1)},
          {"n1_used", str(c.n1_used)},
          {"log_delta_bound", c.log_delta.sci(8)},
          {"n2_gl", str(c.n2_gl)},
          {"n2_fixed", str(c.n2_fixed)},
          {"n2", str(c.n2)},
          {"n2_used", str(c.n2_used)},
          {"k1", str(c.k1)},
          {"sampled", c.sampled},
          {"certificate", to_json(c.cert)}};
}

json to_json(const FinalReduction& f) {
  json rows = json::array();
  for (const auto& r : f.table.rows)
    rows.push_back({{"sign", r.sign}, {"k1", r.k1}, {"x1", str(r.x1)}, {"y1", str(r.y1)}, {"d", str(r.d)},
                    {"n", r.n}, {"m", r.m}, {"fundamental", r.fundamental}});
  json units = json::array();
  for (const auto& u : f.units)
    units.push_back({{"x1", str(u.unit.x1)},
                     {"eps", u.unit.eps},
                     {"unit", u.unit.describe()},
                     {"stage1",
                      {{"index", u.stage1.index}, {"q", str(u.stage1.q)}, {"eps", u.stage1.eps.sci(6)},
                       {"bound", str(u.stage1.bound)}, {"attempts", u.stage1.attempts}}},
                     {"stage2_max", u.stage2_max},
                     {"stage2_argmax", u.stage2_argmax},
                     {"legendre_j", u.legendre_j}});
  json pow = json::object();
  for (const auto& [a, b] : f.table.power_of) pow[a] = b;
  return {{"rows", rows},
          {"powers_removed", pow},
          {"units", units},
          {"box", {{"n_max", f.box.n_max}, {"k_max", f.box.k_max}}},
          {"certificate", to_json(f.cert)}};
}

json to_json(const PellFundamental& f) {
  return {{"d", str(f.d)}, {"family", to_string(f.family)}, {"x1", str(f.x1)}, {"y1", str(f.y1)}, {"eps", f.eps}};
}

json to_json(const CFExpansion& cf, size_t max_terms) {
  json q = json::array();
  for (size_t i = 0; i < cf.size() && i < max_terms; ++i) q.push_back(str(cf.quotients[i]));
  json j{{"source", cf.source}, {"quotients", q}, {"certified_upto", cf.certified_upto},
         {"precision_bits", cf.precision_bits}};
  if (cf.period) j["period"] = cf.period;
  return j;
}

json certificate_json(const Certification& c, const PrecisionPolicy& pol) {
  json cand = json::array();
  for (const auto& u : c.final.table.primitive) cand.push_back({{"x1", str(u.x1)}, {"eps", u.eps}});
  json checks = json::array();
  for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"ok", k.ok}, {"detail", k.detail}});
  json stages = json::array();
  stages.push_back(to_json(c.absolute.cert));
  stages.push_back(to_json(c.first.cert));
  stages.push_back(to_json(c.final.cert));
  return {{"schema", "pellpad-certificate"},
          {"schema_version", kSchemaVersion},
          {"tool", {{"name", "pellpad"}, {"version", kToolVersion}}},
          {"precision", {{"start_bits", pol.start_bits}, {"max_bits", pol.max_bits}, {"growth", pol.growth}}},
          {"eq", c.eq.name()},
          {"convention", to_string(c.options.convention)},
          {"sampled", c.options.sample},
          {"absolute", to_json(c.absolute)},
          {"cycles", {to_json(c.first.cycles[0]), to_json(c.first.cycles[1])}},
          {"final", to_json(c.final)},
          {"stages", stages},
          {"search",
           {{"box", {{"k_max", c.box.k_max}, {"n_max", c.box.n_max}}},
            {"candidates", cand},
            {"solutions", to_json(c.solutions)}}},
          {"theorem", to_json(c.theorem)},
          {"checks", checks},
          {"ok", c.ok()}};
}

SolutionMap solutions_from_json(const json& j, const EqKind& eq) {
  SolutionMap m;
  for (const auto& [dk, arr] : j.items()) {
    mpz_class d;
    if (d.set_str(dk, 10) != 0) throw CertificateFormatError("bad d '" + dk + "'");
    std::vector<SolutionRecord> recs;
    for (const auto& r : arr) {
      SolutionRecord s;
      s.d = d;
      s.eq = eq;
      s.ordinal = r.at("ordinal").get<long>();
      s.k_unit = r.at("k_unit").get<long>();
      s.x = mpz_field(r, "x");
      for (const auto& p : r.at("reps")) s.reps.emplace_back(p.at(0).get<long>(), p.at(1).get<long>());
      recs.push_back(std::move(s));
    }
    m[d] = std::move(recs);
  }
  return m;
}

StoredCertificate read_certificate(const json& j) {
  if (j.value("schema", "") != "pellpad-certificate") throw CertificateFormatError("not a pellpad certificate");
  int v = j.value("schema_version", 0);
  if (v != kSchemaVersion)
    throw CertificateFormatError("schema version " + std::to_string(v) + " not supported (expected " +
                                 std::to_string(kSchemaVersion) + ")");
  try {
    StoredCertificate s;
    s.eq = EqKind::parse(j.at("eq").get<std::string>());
    s.sampled = j.at("sampled").get<bool>();
    s.convention = j.at("convention").get<std::string>();
    const json& sr = j.at("search");
    s.box = {sr.at("box").at("k_max").get<long>(), sr.at("box").at("n_max").get<long>()};
    for (const auto& u : sr.at("candidates")) s.candidates.push_back({mpz_field(u, "x1"), s.eq.family, u.at("eps").get<int>()});
    s.solutions = solutions_from_json(sr.at("solutions"), s.eq);
    s.theorem = j.at("theorem");
    s.ok = j.at("ok").get<bool>();
    return s;
  } catch (const json::exception& e) {
    throw CertificateFormatError(std::string("malformed certificate: ") + e.what());
  }
}

void write_table_csv(std::ostream& os, const TableSearchResult& t) {
  os << "sign,k1,x1,y1,d,n,m,fundamental\n";
  for (const auto& r : t.rows)
    os << (r.sign > 0 ? "+" : "-") << ',' << r.k1 << ',' << r.x1 << ',' << r.y1 << ',' << r.d << ',' << r.n << ','
       << r.m << ',' << (r.fundamental ? 1 : 0) << '\n';
}

void write_stage_csv(std::ostream& os, const FinalReduction& f) {
  os << "t,unit,q_index,q,epsilon,b_t,n2_max,argmax_j\n";
  long t = 0;
  for (const auto& u : f.units)
    os << ++t << ",\"" << u.unit.describe() << "\"," << u.stage1.index << ',' << u.stage1.q.get_str() << ','
       << u.stage1.eps.sci(4) << ',' << u.stage1.bound << ',' << u.stage2_max << ',' << u.stage2_argmax << '\n';
}

void write_solutions_csv(std::ostream& os, const SolutionMap& m) {
  os << "d,ordinal,k_unit,x,representations\n";
  for (const auto& [d, recs] : m)
    for (const auto& r : recs) os << d << ',' << r.ordinal << ',' << r.k_unit << ',' << r.x << ",\"" << format_reps(r.reps) << "\"\n";
}

}  // namespace pellpad
