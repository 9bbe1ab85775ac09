#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kptau/convolution.hpp"
#include "kptau/error.hpp"
#include "kptau/integrate.hpp"
#include "kptau/matmodels.hpp"
#include "kptau/partition.hpp"
#include "kptau/symfunc.hpp"
#include "kptau/tau.hpp"
#include "kptau/verify.hpp"

namespace kptau::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitModule = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double rel_dev(double value, double oracle) {
  if (value == oracle) return 0.0;
  return std::abs(value - oracle) / std::abs(oracle);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw UsageError(what + ": '" + text + "' is not a finite number");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(parse_number(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// "name" or "name:key=value,key=value"; unknown keys are rejected.
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> params;

  explicit FamilySpec(const std::string& text) {
    const auto colon = text.find(':');
    name = text.substr(0, colon);
    if (colon == std::string::npos) return;
    std::stringstream s(text.substr(colon + 1));
    std::string item;
    while (std::getline(s, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value in '" + text + "'");
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }

  std::string take(const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError(name + ": missing '" + key + "'");
    std::string v = it->second;
    params.erase(it);
    return v;
  }

  void done() const {
    if (!params.empty()) throw UsageError(name + ": unknown key '" + params.begin()->first + "'");
  }
};

RhoSequence parse_rho(const std::string& text) {
  FamilySpec f(text);
  if (f.name == "exp") {
    f.done();
    return RhoSequence::exp_family();
  }
  if (f.name == "binomial") {
    const double a = parse_number(f.take("a"), "binomial a");
    const double zeta = parse_number(f.take("zeta"), "binomial zeta");
    f.done();
    return RhoSequence::binomial(a, zeta);
  }
  if (f.name == "custom") {
    const std::string file = f.take("file");
    f.done();
    return RhoSequence::custom_from_json(read_file(file));
  }
  throw UsageError("unknown rho family '" + f.name + "'");
}

MeasureSpec parse_measure(const std::string& text) {
  FamilySpec f(text);
  if (f.name == "gauss") {
    const double sigma = parse_number(f.take("sigma"), "gauss sigma");
    f.done();
    if (!(sigma > 0.0)) throw UsageError("gauss sigma must be positive");
    return MeasureSpec::gauss(sigma);
  }
  if (f.name == "table") {
    const std::string file = f.take("file");
    f.done();
    return MeasureSpec::table_from_json(read_file(file));
  }
  throw UsageError("unknown measure '" + f.name + "'");
}

Partition parse_lambda(const std::string& text) {
  try {
    return Partition::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--lambda: ") + e.what());
  }
}

EigenList eigen_arg(const std::string& text, const std::string& what, int n) {
  auto v = parse_list(text, what);
  if (n > 0 && static_cast<int>(v.size()) != n)
    throw UsageError(what + ": expected " + std::to_string(n) + " entries");
  return EigenList(std::move(v));
}

// Config file keys become flags. Lists may be arrays; numbers keep their
// shortest round-trip form.
std::vector<std::string> expand_config(const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      return std::string(buf, p);
    }
    throw UsageError("config values must be strings, numbers or arrays");
  };
  std::vector<std::string> args;
  if (!cfg.contains("command")) throw UsageError("config needs a 'command'");
  args.push_back(scalar(cfg["command"]));
  if (cfg.contains("subcommand")) args.push_back(scalar(cfg["subcommand"]));
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command" || key == "subcommand") continue;
    args.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const auto& x : value) joined += (joined.empty() ? "" : ",") + scalar(x);
      args.push_back(joined);
    } else {
      args.push_back(scalar(value));
    }
  }
  return args;
}

struct Options {
  // schur
  std::string lambda, t, eigs;
  // shared
  std::string rho = "exp", rho_t = "exp", measure = "gauss:sigma=1", a, b, method = "both";
  std::string in, out, convention = "standard", suite = "all";
  int n = 0, cutoff = -1;
  double z = 0.0, sigma = 1.0;
  std::optional<double> sigma_t, tol;
  std::uint64_t seed = 42;
  long samples = 100000;
};

void check_method(const std::string& m) {
  if (m != "det" && m != "series" && m != "both")
    throw UsageError("--method must be det, series or both");
}

std::vector<json> cmd_schur(const Options& o) {
  const Partition lambda = parse_lambda(o.lambda);
  if (o.t.empty() == o.eigs.empty()) throw UsageError("schur needs exactly one of --t, --eigs");
  json j;
  j["command"] = "schur";
  j["lambda"] = lambda.to_string();
  if (!o.t.empty()) {
    const FlowVector t(parse_list(o.t, "--t"));
    j["jt"] = num(schur_jt(lambda, t));
    j["value"] = j["jt"];
    j["pass"] = true;
    return {j};
  }
  const EigenList a(parse_list(o.eigs, "--eigs"));
  const double jt = schur_jt(lambda, miwa(a, lambda.weight() + a.size()));
  j["jt"] = num(jt);
  double value = jt;
  try {
    const double ch = schur_char(lambda, a);
    const double dev = std::abs(ch - jt) / (1.0 + std::abs(jt));
    j["char"] = num(ch);
    j["rel_dev"] = num(dev);
    j["tolerance"] = o.tol.value_or(1e-9);
    j["pass"] = std::isfinite(dev) && dev <= o.tol.value_or(1e-9);
    value = ch;
  } catch (const DegeneracyError&) {
    j["char"] = nullptr;  // repeated eigenvalues: Jacobi-Trudi only
    j["pass"] = true;
  }
  j["value"] = num(value);
  return {j};
}

std::vector<json> cmd_hypergeom(const Options& o) {
  check_method(o.method);
  if (o.n < 1) throw UsageError("--N is required");
  const RhoSequence rho = parse_rho(o.rho);
  const EigenList a = eigen_arg(o.a, "--a", o.n), b = eigen_arg(o.b, "--b", o.n);
  const int cutoff = o.cutoff < 0 ? 20 : o.cutoff;
  const double tol = o.tol.value_or(1e-7);
  json j;
  j["command"] = "tau hypergeom";
  j["rho"] = rho.describe();
  j["N"] = o.n;
  bool pass = true;
  double s = 0.0, d = 0.0;
  if (o.method != "det") {
    const auto series = tau_hypergeom_series(rho, o.n, a, b, cutoff);
    s = series.value;
    j["series"] = num(s);
    j["cutoff"] = cutoff;
    j["last_stratum"] = num(series.last_stratum);
    j["converged"] = series.converged;
  }
  if (o.method != "series") {
    const Determinant det = tau_hypergeom_det(rho, o.n, a, b);
    d = det.value;
    j["det"] = num(d);
    j["condition"] = num(det.condition);
  }
  if (o.method == "both") {
    const double dev = rel_dev(s, d);
    j["rel_dev"] = num(dev);
    j["tolerance"] = tol;
    pass = std::isfinite(dev) && dev <= tol;
  }
  j["pass"] = pass;
  return {j};
}

std::vector<json> cmd_convolve(const Options& o) {
  if (o.in.empty() || o.out.empty()) throw UsageError("tau convolve needs --in and --out");
  const std::string text = read_file(o.in);
  const RhoSequence rho = parse_rho(o.rho);
  bool two_index = false;
  try {
    for (const auto& c : json::parse(text).at("coeffs")) two_index = two_index || c.contains("mu");
  } catch (const json::exception& e) {
    throw UsageError("--in: " + std::string(e.what()));
  }
  std::string result;
  std::size_t count = 0;
  if (two_index) {
    const TauSeries2 tau = apply_conv2(rho, parse_rho(o.rho_t), TauSeries2::from_json(text));
    result = tau.to_json();
    count = tau.coeffs().size();
  } else {
    const TauSeries tau = apply_conv(rho, TauSeries::from_json(text));
    result = tau.to_json();
    count = tau.coeffs().size();
  }
  std::ofstream f(o.out);
  f << result << '\n';
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  json j;
  j["command"] = "tau convolve";
  j["in"] = o.in;
  j["out"] = o.out;
  j["rho"] = rho.describe();
  if (two_index) j["rhot"] = parse_rho(o.rho_t).describe();
  j["coefficients"] = count;
  j["pass"] = true;
  return {j};
}

std::vector<json> cmd_baker(const Options& o) {
  if (o.in.empty()) throw UsageError("tau baker needs --in");
  const TauSeries tau = TauSeries::from_json(read_file(o.in));
  const FlowVector t = o.t.empty() ? FlowVector() : FlowVector(parse_list(o.t, "--t"));
  const MiwaShift conv = parse_miwa_shift(o.convention);
  json j;
  j["command"] = "tau baker";
  j["z"] = o.z;
  j["convention"] = to_string(conv);
  j["value"] = num(baker_akhiezer(tau, o.z, t, conv));
  j["pass"] = true;
  return {j};
}

std::vector<json> cmd_verify(const Options& o) {
  VerifyOptions v;
  v.seed = o.seed;
  v.n = o.n > 0 ? o.n : 2;
  v.samples = o.samples;
  v.tol = o.tol;
  std::vector<json> lines;
  for (const auto& r : run_suite(o.suite, v)) lines.push_back(json::parse(r.to_json()));
  return lines;
}

std::vector<json> cmd_matmodel_one(const Options& o) {
  check_method(o.method);
  const RhoSequence rho = parse_rho(o.rho);
  const MeasureSpec m = parse_measure(o.measure);
  const EigenList a = eigen_arg(o.a, "--a", o.n);
  const int n = a.size();
  const int cutoff = o.cutoff < 0 ? 18 : o.cutoff;
  if (cutoff + n > kMaxMomentDegree) throw UsageError("--cutoff too large for the moment table");
  const double tol = o.tol.value_or(1e-6);
  json j;
  j["command"] = "matmodel one";
  j["measure"] = m.describe();
  j["rho"] = rho.describe();
  j["N"] = n;
  double d = 0.0, s = 0.0;
  bool pass = true;
  if (o.method != "series") {
    const Determinant det = z_n_rho_det(rho, m, a);
    d = det.value;
    j["det"] = num(d);
    j["condition"] = num(det.condition);
  }
  if (o.method != "det") {
    s = z_n_ext_series(rho, moments(m, cutoff + n), n, a, cutoff);
    j["series"] = num(s);
    j["cutoff"] = cutoff;
  }
  if (o.method == "both") {
    const double dev = rel_dev(d, s);
    j["rel_dev"] = num(dev);
    j["tolerance"] = tol;
    pass = std::isfinite(dev) && dev <= tol;
  }
  j["pass"] = pass;
  return {j};
}

std::vector<json> cmd_matmodel_two(const Options& o) {
  const double s1 = o.sigma, s2 = o.sigma_t.value_or(o.sigma);
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw UsageError("--sigma must be positive");
  CoupledMeasure::gauss_pair(s1, s2);  // divergence guard before any work
  const RhoSequence rho = parse_rho(o.rho), rho_t = parse_rho(o.rho_t);
  const EigenList a = eigen_arg(o.a, "--a", o.n);
  const EigenList b = eigen_arg(o.b, "--b", a.size());
  const int n = a.size();
  const MeasureSpec m1 = MeasureSpec::gauss(s1), m2 = MeasureSpec::gauss(s2);
  const Determinant det = z2_ext_det(rho, rho_t, m1, m2, a, b);

  json j;
  j["command"] = "matmodel two";
  j["sigma"] = s1;
  j["sigmat"] = s2;
  j["rho"] = rho.describe();
  j["rhot"] = rho_t.describe();
  j["N"] = n;
  j["det"] = num(det.value);
  j["condition"] = num(det.condition);
  std::vector<json> lines;
  const bool gaussian = rho.family() == RhoFamily::exp && rho_t.family() == RhoFamily::exp && s1 == s2;
  if (gaussian) {
    const auto closed = z2_gaussian_closed(s1, a, b);
    const double tol = o.tol.value_or(1e-8);
    const double dev = rel_dev(det.value, closed.rederived);
    j["oracle"] = num(closed.rederived);
    j["oracle_method"] = "completed-square closed form";
    j["rel_dev"] = num(dev);
    j["tolerance"] = tol;
    j["pass"] = std::isfinite(dev) && dev <= tol;
    lines.push_back(j);
    json lit;
    lit["command"] = "matmodel two";
    lit["quantity"] = "displayed constants (informational)";
    lit["value"] = num(closed.literal);
    lit["oracle"] = num(det.value);
    lit["rel_dev"] = num(rel_dev(closed.literal, det.value));
    lit["tolerance"] = nullptr;
    lit["pass"] = true;
    lines.push_back(lit);
    return lines;
  }
  const int cutoff = o.cutoff < 0 ? 14 : o.cutoff;
  if (cutoff + n > kMaxBimomentDegree) throw UsageError("--cutoff too large for the bimoment table");
  const double series =
      z2_ext_series(rho, rho_t, bimoments(m1, m2, cutoff + n), n, a, b, cutoff);
  const double tol = o.tol.value_or(1e-5);
  const double dev = rel_dev(det.value, series);
  j["oracle"] = num(series);
  j["oracle_method"] = "series, cutoff " + std::to_string(cutoff);
  j["rel_dev"] = num(dev);
  j["tolerance"] = tol;
  j["pass"] = std::isfinite(dev) && dev <= tol;
  lines.push_back(j);
  return lines;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc) {
        auto expanded = expand_config(argv[++i]);
        args.insert(args.end(), expanded.begin(), expanded.end());
      } else if (a.rfind("--config=", 0) == 0) {
        auto expanded = expand_config(a.substr(9));
        args.insert(args.end(), expanded.begin(), expanded.end());
      } else {
        args.push_back(a);
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Schur expansions, convolution flows and matrix-model checks"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output", output, "write JSON lines here instead of stdout");

  Options o;
  auto tol = [&o](CLI::App* c) {
    c->add_option_function<double>("--tol", [&o](double v) { o.tol = v; },
                                   "override the pass tolerance")
        ->check(CLI::NonNegativeNumber);
  };

  auto* schur = app.add_subcommand("schur", "Schur function by both routes");
  schur->add_option("--lambda", o.lambda, "partition, e.g. 2,1 or ()")->required();
  schur->add_option("--t", o.t, "flow variables t_1,t_2,...");
  schur->add_option("--eigs", o.eigs, "eigenvalues a_1,...,a_N");
  tol(schur);

  auto* tau = app.add_subcommand("tau", "tau-function operations");
  tau->require_subcommand(1);
  auto* hyper = tau->add_subcommand("hypergeom", "hypergeometric tau, series and determinant");
  hyper->add_option("--rho", o.rho, "exp | binomial:a=,zeta= | custom:file=");
  hyper->add_option("--N", o.n)->required()->check(CLI::Range(1, 8));
  hyper->add_option("--a", o.a)->required();
  hyper->add_option("--b", o.b)->required();
  hyper->add_option("--method", o.method, "det | series | both");
  hyper->add_option("--cutoff", o.cutoff)->check(CLI::Range(0, 40));
  tol(hyper);
  auto* conv = tau->add_subcommand("convolve", "apply a convolution to a stored series");
  conv->add_option("--rho", o.rho);
  conv->add_option("--rhot", o.rho_t, "second family for two-index series");
  conv->add_option("--in", o.in)->required();
  conv->add_option("--out", o.out)->required();
  auto* baker = tau->add_subcommand("baker", "Baker-Akhiezer function of a stored series");
  baker->add_option("--in", o.in)->required();
  baker->add_option("--z", o.z)->required();
  baker->add_option("--t", o.t);
  baker->add_option("--convention", o.convention, "standard | paper-literal");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", o.suite, "suite name or all");
  verify->add_option("--seed", o.seed);
  verify->add_option("--n", o.n, "matrix size for Haar suites")->check(CLI::Range(1, kMaxHaarDimension / 2));
  verify->add_option("--samples", o.samples)->check(CLI::Range(100L, 100000000L));
  tol(verify);

  auto* mat = app.add_subcommand("matmodel", "matrix-model partition functions");
  mat->require_subcommand(1);
  auto* one = mat->add_subcommand("one", "one-matrix model, determinant and series");
  one->add_option("--measure", o.measure, "gauss:sigma= | table:file=");
  one->add_option("--rho", o.rho);
  one->add_option("--N", o.n)->check(CLI::Range(1, 8));
  one->add_option("--a", o.a)->required();
  one->add_option("--method", o.method, "det | series | both");
  one->add_option("--cutoff", o.cutoff)->check(CLI::Range(0, 40));
  tol(one);
  auto* two = mat->add_subcommand("two", "two-matrix model on a Gaussian pair");
  two->add_option("--sigma", o.sigma);
  two->add_option_function<double>("--sigmat", [&o](double v) { o.sigma_t = v; });
  two->add_option("--rho", o.rho);
  two->add_option("--rhot", o.rho_t);
  two->add_option("--N", o.n)->check(CLI::Range(1, 8));
  two->add_option("--a", o.a)->required();
  two->add_option("--b", o.b)->required();
  two->add_option("--cutoff", o.cutoff)->check(CLI::Range(0, 30));
  tol(two);

  std::string label;
  std::vector<json> lines;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (schur->parsed()) {
      label = "schur";
      lines = cmd_schur(o);
    } else if (hyper->parsed()) {
      label = "tau hypergeom";
      lines = cmd_hypergeom(o);
    } else if (conv->parsed()) {
      label = "tau convolve";
      lines = cmd_convolve(o);
    } else if (baker->parsed()) {
      label = "tau baker";
      lines = cmd_baker(o);
    } else if (verify->parsed()) {
      label = "verify " + o.suite;
      lines = cmd_verify(o);
    } else if (one->parsed()) {
      label = "matmodel one";
      lines = cmd_matmodel_one(o);
    } else {
      label = "matmodel two";
      lines = cmd_matmodel_two(o);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << label << ": " << e.what() << '\n';
    return kExitModule;
  }

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) {
      err << "error: cannot write '" << output << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = output.empty() ? out : file;
  std::size_t passed = 0;
  for (const auto& j : lines) {
    sink << j.dump() << '\n';
    if (j.value("pass", false)) ++passed;
  }
  err << label << ": " << passed << "/" << lines.size() << " pass\n";
  return passed == lines.size() ? 0 : kExitFail;
}

}  // namespace kptau::cli
