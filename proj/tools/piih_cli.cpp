// piih: gap probabilities, hierarchy equations and large-gap expansions from the command line.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "piih/io.hpp"
#include "piih/piih.hpp"
#include "piih/verify.hpp"

namespace {

using nlohmann::json;
using namespace piih;

constexpr unsigned kMaxN = 8;
constexpr unsigned kMaxNodes = 400;

struct Common {
  unsigned n = 1;
  std::vector<std::string> tau;
  std::string out;
  std::string format;
};

std::vector<Rational> rational_taus(const Common& c) {
  std::vector<Rational> t;
  for (const auto& v : c.tau) {
    try {
      t.push_back(parse_rational(v));
    } catch (const Error&) {
      throw UsageError("--tau: '" + v + "' is not a rational number");
    }
  }
  if (c.tau.empty() && c.n > 1) t.assign(c.n - 1, Rational(0));
  if (t.size() != c.n - 1)
    throw UsageError("--tau expects " + std::to_string(c.n - 1) + " values for n = " + std::to_string(c.n));
  return t;
}

ModelParams model(const Common& c, double rho = 1.0) {
  ModelParams p;
  p.n = c.n;
  for (const auto& t : rational_taus(c)) p.taus.push_back(to_double(t));
  p.rho = rho;
  return p;
}

/// Output goes to stdout unless --out is given; a relative --out lands in
/// $PIIH_OUTPUT_DIR when that is set.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    std::filesystem::path p(path);
    if (const char* dir = std::getenv("PIIH_OUTPUT_DIR"); dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
    file_.open(p, std::ios::binary);
    if (!file_) throw Error("cannot open output file " + p.string());
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_table(const Common& c, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  Sink sink(c.out);
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      arr.push_back(o);
    }
    sink.os() << arr.dump(2) << "\n";
  } else {
    io::write_csv(sink.os(), header, rows);
  }
}

void add_model_options(CLI::App* sub, Common& c, bool rational) {
  sub->add_option("--n", c.n, "hierarchy member / Airy order")->check(CLI::Range(1u, kMaxN));
  sub->add_option("--tau", c.tau, rational ? "tau_1..tau_{n-1}, rationals like 1/3" : "tau_1..tau_{n-1}")
      ->delimiter(',');
  sub->add_option("--out", c.out, "write to this file instead of stdout");
}

// JSON config: top-level keys apply to every subcommand that knows them; a
// section named after the subcommand overrides them. Flags on the command line win.
void apply_config(CLI::App* sub, const json& cfg) {
  json merged = json::object();
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!it->is_object()) merged[it.key()] = *it;
  if (cfg.contains(sub->get_name())) {
    const json& sec = cfg.at(sub->get_name());
    if (!sec.is_object()) throw UsageError("config section '" + sub->get_name() + "' must be an object");
    for (auto it = sec.begin(); it != sec.end(); ++it) {
      if (!sub->get_option_no_throw("--" + it.key()))
        throw UsageError("config: unknown key '" + it.key() + "' for " + sub->get_name());
      merged[it.key()] = *it;
    }
  }
  for (auto it = merged.begin(); it != merged.end(); ++it) {
    CLI::Option* opt = sub->get_option_no_throw("--" + it.key());
    if (!opt || opt->count() > 0) continue;
    const json& v = *it;
    if (v.is_array()) {
      for (const auto& e : v) opt->add_result(e.is_string() ? e.get<std::string>() : e.dump());
    } else if (v.is_string()) {
      opt->add_result(v.get<std::string>());
    } else if (v.is_boolean() || v.is_number()) {
      opt->add_result(v.dump());
    } else {
      throw UsageError("config: unsupported value for '" + it.key() + "'");
    }
    try {
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw UsageError("config: '" + it.key() + "': " + e.what());
    }
  }
}

void require(CLI::App* sub, std::initializer_list<const char*> names) {
  if (!sub->parsed()) return;
  for (const char* name : names)
    if (sub->get_option(name)->count() == 0) throw UsageError(std::string(name) + " is required");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    return cfg;
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Gap probabilities, Painleve II hierarchy and large-gap expansions"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; explicit flags override it");

  // hierarchy
  Common hc;
  hc.format = "text";
  std::string alpha_text;
  bool symbolic_taus = false;
  auto* hier = app.add_subcommand("hierarchy", "print the n-th member of the Painleve II hierarchy");
  add_model_options(hier, hc, true);
  hier->add_option("--alpha", alpha_text, "numeric alpha (default: symbolic)");
  hier->add_flag("--symbolic-taus", symbolic_taus, "print tau1, tau2, ... instead of values");
  hier->add_option("--format", hc.format)->check(CLI::IsMember({"text", "json", "latex"}));

  // aigen
  Common ac;
  ac.format = "csv";
  std::string x_range;
  unsigned deriv = 0;
  auto* aigen = app.add_subcommand("aigen", "generalized Airy function Ai_{2n+1} on a grid");
  add_model_options(aigen, ac, false);
  aigen->add_option("--x", x_range, "a:b:step");
  aigen->add_option("--deriv", deriv, "derivative order")->check(CLI::Range(0u, 16u));
  aigen->add_option("--format", ac.format)->check(CLI::IsMember({"csv", "json"}));

  // kernel
  Common kc;
  kc.format = "text";
  double kx = 0.0, ky = 0.0, krho = 1.0;
  auto* kern = app.add_subcommand("kernel", "kernel K(x,y): contour integral vs factored form");
  add_model_options(kern, kc, false);
  kern->add_option("--x", kx);
  kern->add_option("--y", ky);
  kern->add_option("--rho", krho)->check(CLI::Range(0.0, 1.0));
  kern->add_option("--format", kc.format)->check(CLI::IsMember({"text", "json"}));

  // fredholm
  Common fc;
  fc.format = "csv";
  std::string s_range;
  double frho = 1.0;
  unsigned nodes = 60, fd_order = 6;
  bool err_est = false;
  auto* fred = app.add_subcommand("fredholm", "log F(s; rho) and q on a grid");
  add_model_options(fred, fc, false);
  fred->add_option("--rho", frho)->check(CLI::Range(0.0, 1.0));
  fred->add_option("--s", s_range, "a:b:step");
  fred->add_option("--nodes", nodes, "quadrature nodes m")->check(CLI::Range(4u, kMaxNodes));
  fred->add_option("--fd-order", fd_order, "finite-difference order (even)")->check(CLI::IsMember({2u, 4u, 6u, 8u}));
  fred->add_flag("--error-estimate", err_est, "fill the err column from an m vs 2m comparison");
  fred->add_option("--format", fc.format)->check(CLI::IsMember({"csv", "json"}));

  // asympt
  Common sc;
  sc.format = "text";
  std::string series = "largegap";
  unsigned depth = 0;
  bool as_float = false, consistent = false;
  auto* asym = app.add_subcommand("asympt", "exact large-gap expansions");
  add_model_options(asym, sc, true);
  asym->add_option("--series", series)->check(CLI::IsMember({"largegap", "q", "zeta0", "g1"}));
  asym->add_option("--depth", depth, "number of correction orders (q, zeta0, g1)");
  asym->add_flag("--float", as_float, "append decimal values");
  asym->add_flag("--consistent", consistent, "use the ODE-consistent log coefficient and |s| term");
  asym->add_option("--format", sc.format)->check(CLI::IsMember({"text", "json"}));

  // verify
  std::string suite_name = "all";
  std::string verify_out;
  auto* ver = app.add_subcommand("verify", "run acceptance checks");
  ver->add_option("--suite", suite_name)->check(CLI::IsMember({"exact", "asympt", "numeric", "all"}));
  ver->add_option("--out", verify_out, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!config_path.empty()) {
    const json cfg = load_config(config_path);
    for (auto* sub : app.get_subcommands()) apply_config(sub, cfg);
  }
  // checked after the config merge so the file can supply them
  require(aigen, {"--x"});
  require(kern, {"--x", "--y"});
  require(fred, {"--s"});

  if (hier->parsed()) {
    const Rational alpha = alpha_text.empty() ? Rational(0) : parse_rational(alpha_text);
    const auto eq = build_hierarchy_eq(hc.n, rational_taus(hc), alpha);
    RenderOptions ro{symbolic_taus, alpha_text.empty()};
    Sink sink(hc.out);
    if (hc.format == "json") {
      json j = io::to_json(eq);
      if (alpha_text.empty()) j["alpha"] = "alpha";
      sink.os() << j.dump(2) << "\n";
    } else {
      sink.os() << (hc.format == "latex" ? render_latex(eq, ro) : render_text(eq, ro)) << "\n";
    }
    return 0;
  }

  if (aigen->parsed()) {
    const auto p = model(ac);
    p.validate();
    std::vector<std::vector<double>> rows;
    for (double x : io::parse_range(x_range)) {
      const auto v = phi_eval(p, x, deriv);
      rows.push_back({x, v.value, v.err_estimate});
    }
    emit_table(ac, {"x", "value", "err_estimate"}, rows);
    return 0;
  }

  if (kern->parsed()) {
    const auto ke = KernelEval::make(model(kc));
    const double f = krho * kernel_factored(ke, kx, ky);
    const double c = krho * kernel_contour(ke, kx, ky);
    Sink sink(kc.out);
    if (kc.format == "json") {
      sink.os() << json{{"x", kx}, {"y", ky}, {"factored", f}, {"contour", c}, {"difference", c - f}}.dump(2) << "\n";
    } else {
      sink.os() << "factored   " << io::fmt17(f) << "\ncontour    " << io::fmt17(c) << "\ndifference "
                << io::fmt17(c - f) << "\n";
    }
    return 0;
  }

  if (fred->parsed()) {
    ProfileOptions po;
    po.m = nodes;
    po.fd_order = fd_order;
    po.estimate_error = err_est;
    const auto pr = gap_profile(model(fc, frho), io::parse_range(s_range), po);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pr.s.size(); ++i)
      rows.push_back({pr.s[i], pr.logF[i], pr.dlogF[i], pr.q2[i], pr.q[i], pr.err[i]});
    emit_table(fc, {"s", "logF", "dlogF", "q2", "q", "err"}, rows);
    return 0;
  }

  if (asym->parsed()) {
    const auto taus = rational_taus(sc);
    const Expansion conv = consistent ? Expansion::Consistent : Expansion::Stated;
    AsymSeries s;
    std::string lhs;
    if (series == "largegap") {
      s = largegap_series(sc.n, taus, conv);
      lhs = "logF";
    } else if (series == "q") {
      s = q_series(sc.n, taus, depth, conv);
      lhs = "q";
    } else if (series == "zeta0") {
      s = zeta0_series(sc.n, taus, depth);
      lhs = "zeta0";
    } else {
      s = g1_series(sc.n, taus, depth);
      lhs = "g1";
    }
    Sink sink(sc.out);
    if (sc.format == "json") sink.os() << io::to_json(s, as_float).dump(2) << "\n";
    else sink.os() << lhs << " ~ " << to_human(s, as_float) << "\n";
    return 0;
  }

  if (ver->parsed()) {
    Sink sink(verify_out);
    bool ok = true;
    for (const auto& check : verify::suite(suite_name)) {
      const auto r = verify::run(check);
      sink.os() << verify::format(r) << "\n";
      ok = ok && r.passed;
    }
    return ok ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const piih::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
