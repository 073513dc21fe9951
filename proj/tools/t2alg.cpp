// t2alg: build and check operators, convolve fuzzy truth values, run the
// distributivity suites.
//
// Exit status: 0 pass, 1 mathematical failure or exhausted search, 2 usage or
// configuration error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "t2alg.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace t2alg;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Defaults shared by every command.
constexpr std::size_t kDefaultN = 64;
constexpr std::size_t kDefaultTrials = 200;
constexpr std::size_t kDefaultSearchTrials = 1000;
constexpr const char* kDefaultMode = "snap";
constexpr const char* kDefaultComparison = "dilated";
constexpr double kDefaultTol = 0.0;

std::string sha256_file(const std::string& path) {
  const std::string data = io::read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Records what a run read, wrote and resolved; written next to the outputs.
struct Manifest {
  std::string command;
  json config = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string path;
  std::string started = utc_now();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(int status) const {
    json j;
    j["command"] = command;
    j["config"] = config;
    json digests = json::object();
    for (const auto& in : inputs) {
      try {
        digests[in] = "sha256:" + sha256_file(in);
      } catch (const Error&) {
        digests[in] = nullptr;
      }
    }
    j["inputs"] = digests;
    j["outputs"] = outputs;
    j["exit_status"] = status;
    j["timing"] = {
        {"started_at", started},
        {"finished_at", utc_now()},
        {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
    };
    io::write_file(path, j.dump(2) + "\n");
  }
};

std::string default_manifest_path(const std::string& primary_output, const std::string& command) {
  if (!primary_output.empty()) return primary_output + ".manifest.json";
  std::string name = "t2alg-" + command + ".manifest.json";
  for (char& c : name)
    if (c == ' ') c = '-';
  return name;
}

ConvMode parse_mode(const std::string& s) {
  if (s == "exact") return ConvMode::exact;
  if (s == "snap") return ConvMode::snap;
  throw Error(ErrorKind::invalid_config, "unknown mode '" + s + "' (exact|snap)");
}

Comparison parse_comparison(const std::string& s) {
  if (s == "strict") return Comparison::strict;
  if (s == "dilated") return Comparison::dilated;
  throw Error(ErrorKind::invalid_config, "unknown comparison '" + s + "' (strict|dilated)");
}

CdMode parse_cd_mode(const std::string& s) {
  if (s == "CD") return CdMode::CD;
  if (s == "CDl") return CdMode::CDl;
  if (s == "CDr") return CdMode::CDr;
  throw Error(ErrorKind::invalid_config, "unknown CD mode '" + s + "' (CD|CDl|CDr)");
}

TheoremId require_theorem(const std::string& s) {
  if (auto id = parse_theorem(s)) return *id;
  std::string known;
  for (const auto& [id, name] : kTheoremNames) known += (known.empty() ? "" : ", ") + std::string(name);
  throw Error(ErrorKind::invalid_config, "unknown theorem '" + s + "' (" + known + ")");
}

/// --seed when given, else T2ALG_SEED, else 0.
std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value) {
  if (flag->count() > 0) return value;
  if (const char* env = std::getenv("T2ALG_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_config, std::string("T2ALG_SEED is not an integer: '") + env + "'");
    }
  }
  return 0;
}

std::string json_number(double v) { return io::format_real(v, 17); }

std::string format_elements(const std::vector<double>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + io::format_real(v[i], 12);
  return out + "}";
}

std::string axiom_summary(const AxiomReport& r) {
  std::ostringstream out;
  out << "commutative: " << (r.commutative ? "yes" : "no") << "\n"
      << "associative: " << (r.associative ? "yes" : "no") << " (residual "
      << io::format_real(r.associativity_residual, 6) << ")\n"
      << "monotone: " << (r.monotone ? "yes" : "no") << "\n"
      << "idempotent: " << (r.idempotent ? "yes" : "no") << "\n"
      << "neutral elements: " << format_elements(r.neutral_elements) << "\n"
      << "absorbing elements: " << format_elements(r.absorbing_elements) << "\n"
      << "boundary class: " << to_string(r.boundary_class) << "\n"
      << "max jump: " << io::format_real(r.max_jump, 6) << "\n";
  return out.str();
}

struct OperatorSource {
  std::string spec;
  std::string table;

  void add(CLI::App* app, const std::string& prefix = "") {
    app->add_option("--" + prefix + "spec", spec, "operator spec file");
    app->add_option("--" + prefix + "table", table, "operator table file (n=<resolution> CSV)");
  }

  BinaryOp load(const Grid& grid, Manifest& m) const {
    if (!spec.empty() && !table.empty()) {
      throw Error(ErrorKind::invalid_config, "give either a spec or a table, not both");
    }
    if (!table.empty()) {
      m.inputs.push_back(table);
      BinaryOp op = io::load_table(table);
      require_same_grid(op.grid(), grid, "operator table");
      return op;
    }
    if (spec.empty()) throw Error(ErrorKind::invalid_config, "an operator spec or table is required");
    m.inputs.push_back(spec);
    return build_operator(grid, load_spec(spec));
  }
};

// ---------------------------------------------------------------------------
// ops

struct OpsBuild {
  std::string spec;
  std::string out;
  std::size_t n = kDefaultN;

  int run(Manifest& m) const {
    m.command = "ops build";
    m.config = {{"spec", spec}, {"n", n}, {"out", out}};
    m.inputs.push_back(spec);
    const Grid grid(n);
    const BinaryOp op = build_operator(grid, load_spec(spec));
    const std::string table = io::format_table(op);
    if (out.empty()) {
      std::cout << table;
    } else {
      io::write_file(out, table);
      m.outputs.push_back(out);
    }
    std::cout << "family: " << op.meta().family << "\n"
              << "grid-closed: " << (op.closed() ? "yes" : "no") << "\n"
              << axiom_summary(axiom_report(op));
    return kExitPass;
  }
};

struct OpsCheck {
  OperatorSource source;
  std::size_t n = kDefaultN;

  int run(Manifest& m) const {
    m.command = "ops check";
    m.config = {{"spec", source.spec}, {"table", source.table}, {"n", n}};
    const Grid grid(n);
    const BinaryOp op = source.load(grid, m);
    std::cout << "grid-closed: " << (op.closed() ? "yes" : "no") << "\n" << axiom_summary(axiom_report(op));
    return kExitPass;
  }
};

struct OpsCdCheck {
  OperatorSource F;
  OperatorSource U;
  std::size_t n = kDefaultN;
  std::string mode = "CD";
  double tol = kDefaultTol;
  std::string composition = "real";

  int run(Manifest& m) const {
    m.command = "ops cd-check";
    m.config = {{"spec_F", F.spec}, {"table_F", F.table}, {"spec_U", U.spec}, {"table_U", U.table},
                {"n", n},           {"mode", mode},       {"tol", tol},       {"composition", composition}};
    if (composition != "real" && composition != "snap") {
      throw Error(ErrorKind::invalid_config, "unknown composition '" + composition + "' (real|snap)");
    }
    const Grid grid(n);
    const BinaryOp f = F.load(grid, m);
    const BinaryOp u = U.load(grid, m);
    const CdVerdict v = check_conditional_distributivity(
        f, u, parse_cd_mode(mode), tol, composition == "snap" ? Composition::snap : Composition::real);
    std::cout << mode << ": " << (v.pass ? "pass" : "fail") << "\n"
              << "max residual: " << io::format_real(v.max_residual, 12) << "\n"
              << "guarded triples: " << v.guarded_triples << "\n";
    if (!v.pass) {
      std::cout << "witness (" << to_string(v.side) << "): x=" << io::format_real(grid.point(v.witness[0]), 12)
                << " y=" << io::format_real(grid.point(v.witness[1]), 12)
                << " z=" << io::format_real(grid.point(v.witness[2]), 12) << "\n";
    }
    return v.pass ? kExitPass : kExitFail;
  }
};

// ---------------------------------------------------------------------------
// ftv

struct FtvBinary {
  std::string which;  // conv | meet | join
  OperatorSource op;
  std::string f;
  std::string g;
  std::string out;
  std::string mode = "exact";

  int run(Manifest& m) const {
    m.command = "ftv " + which;
    m.config = {{"f", f}, {"g", g}, {"out", out}};
    m.inputs.push_back(f);
    m.inputs.push_back(g);
    const FTV a = io::load_ftv(f);
    const FTV b = io::load_ftv(g);
    FTV result = a;
    if (which == "conv") {
      m.config["spec"] = op.spec;
      m.config["table"] = op.table;
      m.config["mode"] = mode;
      result = convolve(op.load(a.grid(), m), a, b, parse_mode(mode));
    } else {
      result = which == "meet" ? meet(a, b) : join(a, b);
    }
    const std::string text = io::format_ftv(result);
    if (out.empty()) {
      std::cout << text;
    } else {
      io::write_file(out, text);
      m.outputs.push_back(out);
      std::cout << "wrote " << out << " (height " << io::format_real(result.height(), 12) << ")\n";
    }
    return kExitPass;
  }
};

// ---------------------------------------------------------------------------
// dist

struct DistCommon {
  std::string theorem;
  std::size_t n = kDefaultN;
  std::uint64_t seed_flag = 0;
  CLI::Option* seed_opt = nullptr;
  std::string mode = kDefaultMode;
  double tol = kDefaultTol;
  std::string spec_F;
  std::string spec_U;

  void add(CLI::App* app) {
    app->add_option("--theorem", theorem, "theorem id, e.g. T-MIN-MAX-i")->required();
    app->add_option("--n", n, "grid resolution")->capture_default_str();
    seed_opt = app->add_option("--seed", seed_flag, "base seed (T2ALG_SEED when absent)");
    app->add_option("--mode", mode, "exact|snap")->capture_default_str();
    app->add_option("--tol", tol, "comparison tolerance")->capture_default_str();
    app->add_option("--spec-F", spec_F, "outer operator spec (default: the theorem's fixture)");
    app->add_option("--spec-U", spec_U, "inner uninorm or t-conorm spec (default: the theorem's fixture)");
  }

  /// Resolved operator specs; records inputs in the manifest.
  std::pair<OperatorSpec, std::optional<OperatorSpec>> specs(TheoremId id, Manifest& m) const {
    auto defaults = fixtures::suite_defaults(id);
    OperatorSpec F = defaults.first;
    std::optional<OperatorSpec> V = defaults.second;
    if (!spec_F.empty()) {
      m.inputs.push_back(spec_F);
      F = load_spec(spec_F);
    }
    if (!spec_U.empty()) {
      m.inputs.push_back(spec_U);
      V = load_spec(spec_U);
    }
    return {F, V};
  }

  void record(json& config) const {
    config["theorem"] = theorem;
    config["n"] = n;
    config["mode"] = mode;
    config["tol"] = tol;
    config["spec_F"] = spec_F.empty() ? json("<default>") : json(spec_F);
    config["spec_U"] = spec_U.empty() ? json("<default>") : json(spec_U);
  }

  void record(json& config, const OperatorSpec& F, const std::optional<OperatorSpec>& V) const {
    config["operator_F"] = format_spec(F);
    config["operator_U"] = V ? json(format_spec(*V)) : json(nullptr);
  }
};

std::vector<std::string> write_witness(const std::string& prefix, const Witness& w) {
  std::vector<std::string> paths;
  const std::array<std::pair<const char*, const FTV*>, 3> subjects{{{"f", &w.f}, {"g", &w.g}, {"h", &w.h}}};
  for (const auto& [name, ftv] : subjects) {
    const std::string path = prefix + "_" + name + ".csv";
    io::save_ftv(path, *ftv);
    paths.push_back(path);
  }
  return paths;
}

std::string strip_csv(const std::string& path) {
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return path.substr(0, path.size() - 4);
  return path;
}

struct DistSuite {
  DistCommon common;
  std::size_t trials = kDefaultTrials;
  std::string comparison = kDefaultComparison;
  std::string report;
  std::size_t jobs = 1;
  bool exhaustive = false;

  int run(Manifest& m) const {
    m.command = "dist suite";
    common.record(m.config);
    m.config["trials"] = trials;
    m.config["comparison"] = comparison;
    m.config["report"] = report;
    m.config["jobs"] = jobs;
    m.config["exhaustive"] = exhaustive;
    const std::uint64_t seed = resolve_seed(common.seed_opt, common.seed_flag);
    m.config["seed"] = seed;
    const TheoremId id = require_theorem(common.theorem);
    auto [F, V] = common.specs(id, m);
    common.record(m.config, F, V);

    SuiteConfig config;
    config.theorem = id;
    config.n = common.n;
    config.trials = trials;
    config.seed = seed;
    config.mode = parse_mode(common.mode);
    config.comparison = parse_comparison(comparison);
    config.tolerance = common.tol;
    config.F = F;
    config.V = V;
    config.jobs = jobs;
    const SuiteReport r = exhaustive ? run_exhaustive(config) : run_suite(config);

    std::string witness_files;
    if (!report.empty()) {
      if (r.worst && r.failures > 0) {
        for (const auto& p : write_witness(strip_csv(report) + "_witness", *r.worst)) {
          witness_files += (witness_files.empty() ? "" : ";") + p;
          m.outputs.push_back(p);
        }
      }
      std::string csv = "theorem_id,n,trials,mode,comparison,tol,passes,max_deviation,witness_file\n";
      csv += std::string(to_string(id)) + "," + std::to_string(r.n) + "," + std::to_string(r.trials) + "," +
             std::string(to_string(r.mode)) + "," + std::string(to_string(r.comparison)) + "," +
             json_number(r.tolerance) + "," + std::to_string(r.passes) + "," + json_number(r.max_deviation) +
             "," + witness_files + "\n";
      io::write_file(report, csv);
      m.outputs.push_back(report);
    }

    std::cout << to_string(id) << ": " << r.passes << "/" << r.trials << " trials pass (n=" << r.n << ", "
              << to_string(r.mode) << ", " << to_string(r.comparison) << ", tol " << io::format_real(r.tolerance, 6)
              << ")\n"
              << "max deviation: " << io::format_real(r.max_deviation, 12) << "\n";
    if (r.failures > 0 && r.worst) {
      std::cout << "worst trial: " << r.worst->trial << " at z=" << io::format_real(r.worst->z / double(r.n), 12)
                << "\n";
    }
    return r.failures == 0 ? kExitPass : kExitFail;
  }
};

struct DistSearch {
  DistCommon common;
  std::size_t trials = kDefaultSearchTrials;
  std::string perturb;
  std::string out;
  bool convex_only = false;

  int run(Manifest& m) const {
    m.command = "dist search";
    common.record(m.config);
    m.config["trials"] = trials;
    const std::uint64_t seed = resolve_seed(common.seed_opt, common.seed_flag);
    m.config["seed"] = seed;
    const TheoremId id = require_theorem(common.theorem);
    auto [Fspec, Vspec] = common.specs(id, m);
    common.record(m.config, Fspec, Vspec);
    const Side side = theorem_side(id);
    std::string subject = perturb.empty() ? (side == Side::left ? "f" : "h") : perturb;
    m.config["perturb"] = subject;
    m.config["side"] = side == Side::left ? "left" : "right";
    m.config["convex_only"] = convex_only;
    m.config["out"] = out;

    SearchConfig cfg;
    cfg.side = side;
    if (subject == "f") cfg.perturb = Subject::f;
    else if (subject == "g") cfg.perturb = Subject::g;
    else if (subject == "h") cfg.perturb = Subject::h;
    else throw Error(ErrorKind::invalid_config, "unknown subject '" + subject + "' (f|g|h)");
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.mode = parse_mode(common.mode);
    cfg.tolerance = common.tol;
    cfg.convex_only = convex_only;

    SuiteConfig sc;
    sc.theorem = id;
    sc.n = common.n;
    sc.F = Fspec;
    sc.V = Vspec;
    if (trials == 0) throw Error(ErrorKind::invalid_config, "trials must be positive");
    const auto [F, V] = suite_operators(sc);
    const auto w = search_counterexample(F, V, cfg);
    if (!w) {
      std::cout << "no counterexample in " << trials << " trials\n";
      return kExitFail;
    }
    std::cout << "counterexample at trial " << w->trial << ": deviation " << io::format_real(w->deviation, 12)
              << " at z=" << io::format_real(w->z / double(common.n), 12) << "\n";
    const std::string prefix = out.empty() ? "witness" : out;
    for (const auto& p : write_witness(prefix, *w)) {
      m.outputs.push_back(p);
      std::cout << "wrote " << p << "\n";
    }
    return kExitPass;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operators, fuzzy truth values and distributivity suites on a quantized unit interval"};
  app.require_subcommand(1);
  // Lets --manifest follow the subcommand too.
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "manifest path (default: next to the primary output)");

  auto* ops = app.add_subcommand("ops", "build and check operators")->require_subcommand(1);
  auto* ftv = app.add_subcommand("ftv", "convolutions of fuzzy truth values")->require_subcommand(1);
  auto* dist = app.add_subcommand("dist", "distributivity suites")->require_subcommand(1);

  OpsBuild build;
  auto* c_build = ops->add_subcommand("build", "tabulate an operator from a spec");
  c_build->add_option("--spec", build.spec, "operator spec file")->required();
  c_build->add_option("--out", build.out, "table output (default: standard output)");
  c_build->add_option("--n", build.n, "grid resolution")->capture_default_str();

  OpsCheck check;
  auto* c_check = ops->add_subcommand("check", "axiom report of an operator");
  check.source.add(c_check);
  c_check->add_option("--n", check.n, "grid resolution")->capture_default_str();

  OpsCdCheck cd;
  auto* c_cd = ops->add_subcommand("cd-check", "conditional distributivity of F over U");
  cd.F.add(c_cd, "F-");
  cd.U.add(c_cd, "U-");
  c_cd->add_option("--n", cd.n, "grid resolution")->capture_default_str();
  c_cd->add_option("--cd", cd.mode, "CD|CDl|CDr")->capture_default_str();
  c_cd->add_option("--tol", cd.tol, "residual tolerance")->capture_default_str();
  c_cd->add_option("--composition", cd.composition, "real|snap")->capture_default_str();

  std::array<FtvBinary, 3> fb{};
  fb[0].which = "conv";
  fb[1].which = "meet";
  fb[2].which = "join";
  std::array<CLI::App*, 3> c_ftv{};
  for (std::size_t i = 0; i < 3; ++i) {
    auto& b = fb[i];
    c_ftv[i] = ftv->add_subcommand(b.which, b.which == "conv" ? "sup-min convolution"
                                           : b.which == "meet" ? "extended minimum"
                                                               : "extended maximum");
    c_ftv[i]->add_option("--f", b.f, "first fuzzy truth value file")->required();
    c_ftv[i]->add_option("--g", b.g, "second fuzzy truth value file")->required();
    c_ftv[i]->add_option("--out", b.out, "result file (default: standard output)");
    if (b.which == "conv") {
      b.op.add(c_ftv[i]);
      c_ftv[i]->add_option("--mode", b.mode, "exact|snap")->capture_default_str();
    }
  }

  DistSuite suite;
  auto* c_suite = dist->add_subcommand("suite", "run a theorem suite");
  suite.common.add(c_suite);
  c_suite->add_option("--trials", suite.trials, "number of trials")->capture_default_str();
  c_suite->add_option("--comparison", suite.comparison, "strict|dilated")->capture_default_str();
  c_suite->add_option("--report", suite.report, "CSV report path");
  c_suite->add_option("--jobs", suite.jobs, "concurrent trials")->capture_default_str();
  c_suite->add_flag("--exhaustive", suite.exhaustive, "all triples with grades in {0,1/2,1} (n <= 4)");

  DistSearch search;
  auto* c_search = dist->add_subcommand("search", "search for a counterexample with a non-convex subject");
  search.common.add(c_search);
  search.common.mode = "exact";
  c_search->add_option("--trials", search.trials, "number of trials")->capture_default_str();
  c_search->add_option("--perturb", search.perturb, "subject drawn non-convex: f|g|h (default: the convex one)");
  c_search->add_option("--out", search.out, "witness file prefix (default: witness)");
  c_search->add_flag("--convex-only", search.convex_only, "control run with a convex subject");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Manifest manifest;
  std::string primary;
  int status = kExitUsage;
  try {
    if (c_build->parsed()) {
      primary = build.out;
      status = build.run(manifest);
    } else if (c_check->parsed()) {
      status = check.run(manifest);
    } else if (c_cd->parsed()) {
      status = cd.run(manifest);
    } else if (c_suite->parsed()) {
      primary = suite.report;
      status = suite.run(manifest);
    } else if (c_search->parsed()) {
      primary = search.out;
      status = search.run(manifest);
    } else {
      for (std::size_t i = 0; i < 3; ++i) {
        if (c_ftv[i]->parsed()) {
          primary = fb[i].out;
          status = fb[i].run(manifest);
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kExitUsage;
  }

  try {
    manifest.path = manifest_path.empty() ? default_manifest_path(primary, manifest.command) : manifest_path;
    if (!manifest.command.empty()) manifest.write(status);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (status == kExitPass) status = kExitUsage;
  }
  return status;
}
