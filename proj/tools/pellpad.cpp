// pellpad: command-line front end.
//
// Exit codes: 0 success, 1 certified mismatch or failed check, 2 usage error,
// 3 precision exhausted.

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "pellpad/certificate.hpp"
#include "pellpad/contfrac.hpp"
#include "pellpad/padovan.hpp"
#include "pellpad/pell.hpp"
#include "pellpad/pipeline.hpp"
#include "pellpad/reduction.hpp"
#include "pellpad/search.hpp"

using namespace pellpad;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kPrecision = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

mpz_class parse_int(const std::string& s) {
  mpq_class q;
  try {
    q = parse_decimal(s);
  } catch (const std::exception&) {
    throw UsageError("not a number: " + s);
  }
  if (q.get_den() != 1) throw UsageError("not an integer: " + s);
  return q.get_num();
}

Family parse_family(const std::string& s) {
  if (s == "unit") return Family::unit;
  if (s == "quad") return Family::quad;
  throw UsageError("family must be unit or quad");
}

// ---------------------------------------------------------------- real expressions
//
//   expr := term ('/' term)*      term := ['-'] atom ('*' atom)*
//   atom := decimal | alpha | a | log_alpha | log_a | log_2a
//         | log2a-over-logalpha | loga-over-logalpha
//         | sqrt(N) | log1p_alpha(J) | log_delta(unit|quad, X1, EPS) | '(' expr ')'

class RealExpr {
 public:
  explicit RealExpr(std::string s) : src_(std::move(s)) {
    for (char c : src_)
      if (!std::isspace((unsigned char)c)) s_ += c;
    parse_check();
  }

  BigReal eval(long prec) const {
    size_t i = 0;
    BigReal v = expr(i, prec);
    return v;
  }

  RealFn fn() const {
    auto self = std::make_shared<RealExpr>(*this);
    return [self](long p) { return self->eval(p); };
  }

 private:
  void parse_check() {
    size_t i = 0;
    expr(i, 64);
    if (i != s_.size()) throw UsageError("trailing input in expression '" + src_ + "'");
  }

  BigReal expr(size_t& i, long p) const {
    BigReal v = term(i, p);
    while (i < s_.size() && s_[i] == '/') {
      ++i;
      v = v / term(i, p);
    }
    return v;
  }

  BigReal term(size_t& i, long p) const {
    bool neg = i < s_.size() && s_[i] == '-';
    if (neg) ++i;
    BigReal v = atom(i, p);
    while (i < s_.size() && s_[i] == '*') {
      ++i;
      v = v * atom(i, p);
    }
    return neg ? -v : v;
  }

  std::vector<std::string> args(size_t& i) const {
    if (i >= s_.size() || s_[i] != '(') throw UsageError("expected '(' in '" + src_ + "'");
    size_t close = s_.find(')', i);
    if (close == std::string::npos) throw UsageError("unbalanced '(' in '" + src_ + "'");
    std::vector<std::string> out;
    std::stringstream ss(s_.substr(i + 1, close - i - 1));
    for (std::string a; std::getline(ss, a, ',');) out.push_back(a);
    i = close + 1;
    return out;
  }

  BigReal atom(size_t& i, long p) const {
    if (i >= s_.size()) throw UsageError("unexpected end of '" + src_ + "'");
    if (s_[i] == '(') {
      ++i;
      BigReal v = expr(i, p);
      if (i >= s_.size() || s_[i] != ')') throw UsageError("unbalanced '(' in '" + src_ + "'");
      ++i;
      return v;
    }
    if (std::isdigit((unsigned char)s_[i]) || s_[i] == '.') {
      size_t j = i;
      while (j < s_.size() && (std::isdigit((unsigned char)s_[j]) || s_[j] == '.' || s_[j] == 'e' ||
                               ((s_[j] == '-' || s_[j] == '+') && j > i && s_[j - 1] == 'e')))
        ++j;
      std::string lit = s_.substr(i, j - i);
      i = j;
      return BigReal::from_decimal(lit, p);
    }
    size_t j = i;
    while (j < s_.size() && (std::isalnum((unsigned char)s_[j]) || s_[j] == '_' || s_[j] == '-')) ++j;
    std::string name = s_.substr(i, j - i);
    i = j;
    auto K = [p] { return constants(p); };
    if (name == "alpha") return K().alpha;
    if (name == "a") return K().a;
    if (name == "log_alpha") return K().log_alpha;
    if (name == "log_a") return K().log_a;
    if (name == "log_2a") return K().log_2a;
    if (name == "log2a-over-logalpha" || name == "tau") return K().log_2a / K().log_alpha;
    if (name == "loga-over-logalpha") return abs(K().log_a) / K().log_alpha;
    if (name == "sqrt") {
      auto a = args(i);
      if (a.size() != 1) throw UsageError("sqrt takes one argument");
      return sqrt(BigReal::from_mpz(parse_int(a[0]), p));
    }
    if (name == "log1p_alpha") {
      auto a = args(i);
      if (a.size() != 1) throw UsageError("log1p_alpha takes one argument");
      long j2 = parse_int(a[0]).get_si();
      long q = p + (long)(0.41 * (double)std::labs(j2)) + 64;
      BigReal v = log(exp(-(constants(q).log_alpha * j2)) + 1);
      return v;
    }
    if (name == "log_delta") {
      auto a = args(i);
      if (a.size() != 3) throw UsageError("log_delta takes (family, x1, eps)");
      UnitValue u{parse_int(a[1]), parse_family(a[0]), (int)parse_int(a[2]).get_si()};
      return u.log_delta(p);
    }
    throw UsageError("unknown name '" + name + "' in '" + src_ + "'");
  }

  std::string src_, s_;
};

RealFn real_field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("config lacks '") + key + "'");
  const json& v = j.at(key);
  return RealExpr(v.is_string() ? v.get<std::string>() : v.dump()).fn();
}

mpz_class int_field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("config lacks '") + key + "'");
  const json& v = j.at(key);
  return parse_int(v.is_string() ? v.get<std::string>() : v.dump());
}

// ---------------------------------------------------------------- commands

int cmd_padovan_value(long n) {
  if (n < 0) throw UsageError("N must be nonnegative");
  std::cout << padovan(n) << '\n';
  return kOk;
}

int cmd_padovan_reps(const std::string& x, long nmax) {
  json j{{"x", x}, {"n_max", nmax}, {"representations", json::array()}};
  for (const auto& [n, m] : representations(parse_int(x), nmax)) j["representations"].push_back({n, m});
  emit(j);
  return kOk;
}

int cmd_pell_fundamental(const std::string& d, const std::string& fam) {
  emit(to_json(fundamental(parse_int(d), parse_family(fam))));
  return kOk;
}

int cmd_pell_xk(const std::string& d, long k, const std::string& fam) {
  PellFundamental f = fundamental(parse_int(d), parse_family(fam));
  emit({{"d", d}, {"k", k}, {"x", solution_x(f, k).get_str()}, {"y", solution_y(f, k).get_str()},
        {"fundamental", to_json(f)}});
  return kOk;
}

int cmd_pell_invert(const std::string& target, long k, const std::string& fam, int sign) {
  auto x = invert_q(parse_int(target), parse_family(fam), sign, k);
  json j{{"target", target}, {"k", k}, {"family", fam}, {"sign", sign}};
  j["x1"] = x ? json(x->get_str()) : json(nullptr);
  emit(j);
  return kOk;
}

int cmd_pell_recover(const std::string& x1, const std::string& fam, int sign) {
  json a = json::array();
  for (const auto& p : recover_d(parse_int(x1), parse_family(fam), sign))
    a.push_back({{"d", p.d.get_str()}, {"y1", p.y1.get_str()}});
  emit({{"x1", x1}, {"family", fam}, {"sign", sign}, {"pairs", a}});
  return kOk;
}

int cmd_cf_expand(const std::string& tau, long terms) {
  if (terms < 1) throw UsageError("--terms must be positive");
  CFExpansion cf = expand(RealExpr(tau).fn(), (size_t)terms, tau);
  emit(to_json(cf, (size_t)terms));
  return kOk;
}

int cmd_cf_legendre(const std::string& tau, const std::string& M) {
  mpz_class m = parse_int(M);
  CFExpansion cf = expand_until_q(RealExpr(tau).fn(), m, tau);
  LegendreResult lr = legendre_bound(cf, m);
  emit({{"tau", tau}, {"M", M}, {"N", lr.N}, {"aM", lr.aM.get_str()}, {"argmax", lr.argmax},
        {"qN", lr.qN.get_str()}});
  return kOk;
}

int cmd_reduce_bd(const std::string& path) {
  json c = read_json_file(path);
  BDInstance inst{c.value("label", "bd"), real_field(c, "tau"), real_field(c, "mu"), real_field(c, "A"),
                  real_field(c, "B"), int_field(c, "M")};
  CFExpansion cf = expand_until_q(inst.tau, 6 * inst.M, "tau", 60);
  BDOutcome o = bd_reduce(inst, cf);
  json j = to_json(o.outcome(inst));
  j["q_index"] = o.index;
  j["q"] = o.q.get_str();
  if (o.success) j["epsilon"] = o.eps.sci(6);
  emit(j);
  return o.success ? kOk : kMismatch;
}

int cmd_reduce_lll(const std::string& path) {
  json c = read_json_file(path);
  LLLInstance inst;
  inst.label = c.value("label", "lll");
  for (const auto& t : c.at("tau")) inst.tau.push_back(RealExpr(t.is_string() ? t.get<std::string>() : t.dump()).fn());
  for (const auto& x : c.at("X")) inst.X.push_back(parse_int(x.is_string() ? x.get<std::string>() : x.dump()));
  if (inst.X.size() != inst.tau.size()) throw UsageError("tau and X differ in length");
  if (c.contains("C")) {
    inst.C = int_field(c, "C");
  } else {
    mpz_class mx = *std::max_element(inst.X.begin(), inst.X.end());
    mpz_class base = mx * (long)inst.X.size();
    mpz_pow_ui(inst.C.get_mpz_t(), base.get_mpz_t(), inst.X.size() + 1);
  }
  LLLOutcome o = lll_lower_bound(inst);
  emit(to_json(o.outcome(inst)));
  return kOk;
}

int cmd_reduce_matveev(const std::string& path) {
  json c = read_json_file(path);
  LinearFormData d;
  d.t = c.at("t").get<int>();
  d.D = c.at("D").get<long>();
  for (const auto& a : c.at("A")) d.A.push_back(RealExpr(a.is_string() ? a.get<std::string>() : a.dump()).eval(256));
  if ((int)d.A.size() != d.t) throw UsageError("A must have t entries");
  d.B = real_field(c, "B")(256);
  BigReal b = matveev_bound(d);
  emit({{"kind", "matveev"}, {"t", d.t}, {"D", d.D}, {"coefficient", matveev_constant(d.t, d.D, d.A, 256).sci(6)},
        {"bound", b.sci(6)}});
  return kOk;
}

int cmd_reduce_gl(int r, const std::string& H) {
  BigReal h = BigReal::from_decimal(H, 256);
  BigReal L = gl_resolve(r, h);
  emit({{"kind", "gl"}, {"r", r}, {"H", H}, {"bound", L.sci(6)}});
  return kOk;
}

int cmd_pipeline_absolute(const std::string& fam) {
  emit(to_json(absolute_bounds(parse_family(fam))));
  return kOk;
}

int cmd_pipeline_certify(const std::string& eq, const std::string& out, bool sample, const std::string& conv,
                         const std::string& csv_dir) {
  CertifyOptions opt;
  opt.sample = sample;
  opt.convention = parse_convention(conv);
  PrecisionPolicy pol = PrecisionPolicy::from_env();
  Certification c = certify(EqKind::parse(eq), opt, pol);
  json j = certificate_json(c, pol);
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    std::ostringstream t, s, l;
    write_table_csv(t, c.final.table);
    write_stage_csv(s, c.final);
    write_solutions_csv(l, c.solutions);
    write_file(csv_dir + "/" + eq + "-table.csv", t.str());
    write_file(csv_dir + "/" + eq + "-bd.csv", s.str());
    write_file(csv_dir + "/" + eq + "-solutions.csv", l.str());
  }
  json summary{{"eq", eq},
               {"ok", c.ok()},
               {"sampled", sample},
               {"box", {{"k_max", c.box.k_max}, {"n_max", c.box.n_max}}},
               {"theorem", to_json(c.theorem)},
               {"checks", j.at("checks")}};
  if (!out.empty()) summary["certificate"] = out;
  emit(summary);
  return c.ok() ? kOk : kMismatch;
}

int cmd_search_final(const std::string& eq, const std::string& cert_path, const std::string& format) {
  StoredCertificate s = read_certificate(read_json_file(cert_path));
  if (s.eq != EqKind::parse(eq)) throw UsageError("certificate is for " + s.eq.name());
  SolutionMap m = scan_final(s.eq, s.box, s.candidates);
  if (s.eq.family == Family::quad)
    for (auto& [d, recs] : small_d_sweep(s.eq, 3, s.box.k_max, s.box.n_max)) m[d] = recs;
  bool same = m == s.solutions;
  if (format == "csv") {
    write_solutions_csv(std::cout, m);
  } else {
    emit({{"eq", eq}, {"box", {{"k_max", s.box.k_max}, {"n_max", s.box.n_max}}}, {"matches_certificate", same},
          {"solutions", to_json(m)}});
  }
  return same ? kOk : kMismatch;
}

int cmd_search_sweep(const std::string& eq, long dmax, long kmax, long nmax, const std::string& format) {
  if (dmax < 2) throw UsageError("--dmax must be at least 2");
  SolutionMap m = small_d_sweep(EqKind::parse(eq), dmax, kmax, nmax);
  if (format == "csv")
    write_solutions_csv(std::cout, m);
  else
    emit({{"eq", eq}, {"d_max", dmax}, {"k_max", kmax}, {"n_max", nmax}, {"solutions", to_json(m)}});
  return kOk;
}

int cmd_verify(const std::string& cert_path) {
  StoredCertificate s = read_certificate(read_json_file(cert_path));
  TheoremReport r = verify_theorem(theorem_list(s.eq), s.solutions);
  json now = to_json(r);
  bool reproduced = now == s.theorem;
  emit({{"eq", s.eq.name()}, {"reproduced", reproduced}, {"theorem", now}});
  return reproduced && r.ok() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pell equations with Padovan-sum x-coordinates: bounds, reductions, searches"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::function<int()> run;

  // padovan
  auto* pad = app.add_subcommand("padovan", "Padovan numbers");
  pad->require_subcommand(1);
  long pad_n = 0;
  auto* pv = pad->add_subcommand("value", "print P_N");
  pv->add_option("N", pad_n)->required();
  pv->callback([&] { run = [&] { return cmd_padovan_value(pad_n); }; });
  std::string reps_x;
  long reps_nmax = 500;
  auto* pr = pad->add_subcommand("reps", "all (n, m) with P_n + P_m = X");
  pr->add_option("X", reps_x)->required();
  pr->add_option("--nmax", reps_nmax);
  pr->callback([&] { run = [&] { return cmd_padovan_reps(reps_x, reps_nmax); }; });

  // pell
  auto* pell = app.add_subcommand("pell", "Pell equations");
  pell->require_subcommand(1);
  std::string d_arg, fam = "unit", target;
  long k_arg = 1;
  int sign = 1;
  auto* pf = pell->add_subcommand("fundamental", "fundamental solution");
  pf->add_option("-d", d_arg)->required();
  pf->add_option("--family", fam)->check(CLI::IsMember({"unit", "quad"}));
  pf->callback([&] { run = [&] { return cmd_pell_fundamental(d_arg, fam); }; });
  auto* px = pell->add_subcommand("xk", "k-th solution");
  px->add_option("-d", d_arg)->required();
  px->add_option("-k", k_arg)->required()->check(CLI::NonNegativeNumber);
  px->add_option("--family", fam)->check(CLI::IsMember({"unit", "quad"}));
  px->callback([&] { run = [&] { return cmd_pell_xk(d_arg, k_arg, fam); }; });
  auto* pi = pell->add_subcommand("invert", "x1 with Q_k(x1) = target");
  pi->add_option("--target", target)->required();
  pi->add_option("-k", k_arg)->required()->check(CLI::Range(2L, 1L << 30));
  pi->add_option("--family", fam)->check(CLI::IsMember({"unit", "quad"}));
  pi->add_option("--sign", sign)->check(CLI::IsMember({1, -1}));
  pi->callback([&] { run = [&] { return cmd_pell_invert(target, k_arg, fam, sign); }; });
  auto* prd = pell->add_subcommand("recover", "(d, y1) pairs for a given x1");
  prd->add_option("--x1", target)->required();
  prd->add_option("--family", fam)->check(CLI::IsMember({"unit", "quad"}));
  prd->add_option("--sign", sign)->check(CLI::IsMember({1, -1}));
  prd->callback([&] { run = [&] { return cmd_pell_recover(target, fam, sign); }; });

  // cf
  auto* cf = app.add_subcommand("cf", "continued fractions");
  cf->require_subcommand(1);
  std::string tau = "log2a-over-logalpha", M = "4.87e165";
  long terms = 24;
  auto* ce = cf->add_subcommand("expand", "partial quotients");
  ce->add_option("--tau", tau);
  ce->add_option("--terms", terms);
  ce->callback([&] { run = [&] { return cmd_cf_expand(tau, terms); }; });
  auto* cl = cf->add_subcommand("legendre", "a(M) for the Legendre criterion");
  cl->add_option("--tau", tau);
  cl->add_option("-M", M)->required();
  cl->callback([&] { run = [&] { return cmd_cf_legendre(tau, M); }; });

  // reduce
  auto* red = app.add_subcommand("reduce", "single reduction steps");
  red->require_subcommand(1);
  std::string config, H;
  int r_arg = 10;
  auto* rb = red->add_subcommand("bd", "Baker-Davenport from a JSON config");
  rb->add_option("--config", config)->required()->check(CLI::ExistingFile);
  rb->callback([&] { run = [&] { return cmd_reduce_bd(config); }; });
  auto* rl = red->add_subcommand("lll", "LLL lower bound from a JSON config");
  rl->add_option("--config", config)->required()->check(CLI::ExistingFile);
  rl->callback([&] { run = [&] { return cmd_reduce_lll(config); }; });
  auto* rm = red->add_subcommand("matveev", "Matveev bound from a JSON config");
  rm->add_option("--config", config)->required()->check(CLI::ExistingFile);
  rm->callback([&] { run = [&] { return cmd_reduce_matveev(config); }; });
  auto* rg = red->add_subcommand("gl", "L < H (log L)^r resolver");
  rg->add_option("-r", r_arg)->required()->check(CLI::PositiveNumber);
  rg->add_option("--H", H)->required();
  rg->callback([&] { run = [&] { return cmd_reduce_gl(r_arg, H); }; });

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "full proof chain");
  pipe->require_subcommand(1);
  std::string eq = "unit-plus", out, conv = "published", csv_dir;
  bool sample = false;
  const std::vector<std::string> eqs{"unit-plus", "unit-minus", "quad-plus", "quad-minus"};
  auto* pa = pipe->add_subcommand("absolute", "absolute bounds only");
  pa->add_option("--family", fam)->check(CLI::IsMember({"unit", "quad"}));
  pa->callback([&] { run = [&] { return cmd_pipeline_absolute(fam); }; });
  auto* pc = pipe->add_subcommand("certify", "absolute bounds through theorem comparison");
  pc->add_option("--eq", eq)->required()->check(CLI::IsMember(eqs));
  pc->add_option("--out", out);
  pc->add_flag("--sample", sample, "sampled LLL sweep (CI scale)");
  pc->add_option("--convention", conv)->check(CLI::IsMember({"published", "certified"}));
  pc->add_option("--csv-dir", csv_dir, "created if missing");
  pc->callback([&] { run = [&] { return cmd_pipeline_certify(eq, out, sample, conv, csv_dir); }; });

  // search
  auto* se = app.add_subcommand("search", "final searches");
  se->require_subcommand(1);
  std::string cert, format = "json";
  long dmax = 1000, kmax = 133, nmax = 411;
  auto* sf = se->add_subcommand("final", "rescan the box stored in a certificate");
  sf->add_option("--eq", eq)->required()->check(CLI::IsMember(eqs));
  sf->add_option("--cert", cert)->required()->check(CLI::ExistingFile);
  sf->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  sf->callback([&] { run = [&] { return cmd_search_final(eq, cert, format); }; });
  auto* ss = se->add_subcommand("sweep", "brute force over small d");
  ss->add_option("--eq", eq)->required()->check(CLI::IsMember(eqs));
  ss->add_option("--dmax", dmax);
  ss->add_option("--kmax", kmax);
  ss->add_option("--nmax", nmax);
  ss->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  ss->callback([&] { run = [&] { return cmd_search_sweep(eq, dmax, kmax, nmax, format); }; });

  // verify
  auto* ve = app.add_subcommand("verify", "re-check a stored certificate");
  ve->add_option("--cert", cert)->required()->check(CLI::ExistingFile);
  ve->callback([&] { run = [&] { return cmd_verify(cert); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "pellpad: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "pellpad: " << e.what() << '\n';
    return kUsage;
  } catch (const CertificateFormatError& e) {
    std::cerr << "pellpad: " << e.what() << '\n';
    return kUsage;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "pellpad: " << e.what() << '\n';
    return kPrecision;
  } catch (const std::exception& e) {
    std::cerr << "pellpad: " << e.what() << '\n';
    return kMismatch;
  }
}
