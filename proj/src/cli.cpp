#include "sicta/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sicta/analytic.hpp"
#include "sicta/montecarlo.hpp"
#include "sicta/verify.hpp"

namespace sicta::cli {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
std::string join(const std::vector<T>& items, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << sep;
    if constexpr (std::is_same_v<T, double>) {
      os << format_scalar(items[i]);
    } else {
      os << items[i];
    }
  }
  return os.str();
}

std::string provenance_header(const std::string& replay) {
  return "# sicta " + std::string(kVersion) + " | generator " + std::string(kGeneratorName) +
         " | run seeds " + std::string(kSeedDerivation) + "\n# replay: " + replay + "\n";
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_atomic(path, content);
  }
}

// Flags shared by every subcommand that builds a policy.
struct PolicyFlags {
  int d = 2;
  std::string policy = "fair";
  std::vector<double> probs;
  CLI::Option* d_option = nullptr;

  void add_to(CLI::App* app) {
    d_option = app->add_option("--d", d, "splitting factor (number of groups)")->capture_default_str();
    app->add_option("--policy", policy, "fair | biased | custom")
        ->capture_default_str()
        ->check(CLI::IsMember({"fair", "biased", "custom"}));
    app->add_option("--probs", probs, "group probabilities for --policy custom, e.g. 0.5,0.25,0.25")
        ->delimiter(',');
  }

  SplitPolicy build() {
    if (policy == "custom") {
      if (probs.empty()) throw ValidationError("--policy custom needs --probs");
      if (d_option->count() > 0 && d != static_cast<int>(probs.size())) {
        throw ValidationError("--d " + std::to_string(d) + " does not match the " +
                              std::to_string(probs.size()) + " entries of --probs");
      }
      d = static_cast<int>(probs.size());
    } else if (!probs.empty()) {
      throw ValidationError("--probs is only valid with --policy custom");
    }
    return make_policy(policy, d, probs);
  }

  std::string replay() const {
    std::string s = "--d " + std::to_string(d) + " --policy " + policy;
    if (policy == "custom") s += " --probs " + join(probs);
    return s;
  }
};

int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

const char* const kSummaryColumns =
    "d,policy,n,runs,seed,mean_cri,std,ci95,throughput_rom,throughput_mor,yg_closed_form,"
    "variant\n";

std::string summary_row(const SplitPolicy& policy, const ExperimentConfig& config,
                        const VariantSummary& v) {
  std::ostringstream os;
  os << policy.d() << ',' << policy.name() << ',' << config.n << ',' << v.runs << ','
     << config.master_seed << ',' << format_scalar(v.mean) << ',' << format_scalar(v.stddev)
     << ',' << format_scalar(v.ci95) << ',' << format_scalar(v.throughput_rom) << ','
     << format_scalar(v.throughput_mor) << ',' << format_scalar(yg_closed_form_mst(policy.d()))
     << ',' << to_string(v.variant) << '\n';
  return os.str();
}

json summary_json(const SplitPolicy& policy, const ExperimentConfig& config,
                  const VariantSummary& v) {
  return {{"d", policy.d()},
          {"policy", policy.name()},
          {"probs", std::vector<double>(policy.probs().begin(), policy.probs().end())},
          {"n", config.n},
          {"runs", v.runs},
          {"seed", config.master_seed},
          {"variant", to_string(v.variant)},
          {"mean_cri", v.mean},
          {"std", v.stddev},
          {"ci95", v.ci95},
          {"throughput_rom", v.throughput_rom},
          {"throughput_mor", v.throughput_mor},
          {"throughput_ci95", v.throughput_ci95},
          {"yg_closed_form", yg_closed_form_mst(policy.d())}};
}

json metadata(const std::string& replay, double wall_seconds) {
  return {{"generator", kGeneratorName},
          {"seed_derivation", kSeedDerivation},
          {"version", kVersion},
          {"replay", replay},
          {"wall_time_s", wall_seconds}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- simulate ---------------------------------------------------------------

struct SimulateCmd {
  PolicyFlags policy;
  int n = 0;
  int runs = 10'000;
  std::uint64_t seed = 42;
  std::vector<std::string> variants = {"corrected", "yg", "standard"};
  int max_depth = kDefaultMaxDepth;
  int threads = default_threads();
  std::string out_path, json_path, per_tree_path;
  bool dump_tree = false;

  void add_to(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("simulate", "Monte Carlo CRI lengths for one policy");
    sub->add_option("--n", n, "initial number of contenders")->required();
    policy.add_to(sub);
    sub->add_option("--runs", runs, "number of independent trees")->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--variants", variants, "corrected,yg,standard,slot_level")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--max-depth", max_depth, "tree depth bound")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads (output does not depend on it)");
    sub->add_option("--out", out_path, "CSV summary path (default: stdout)");
    sub->add_option("--json", json_path, "JSON summary path");
    sub->add_option("--per-tree", per_tree_path, "CSV with one row per simulated tree");
    sub->add_flag("--dump-tree", dump_tree, "print every tree to stderr in pre-order text");
    sub->callback([this] { selected = true; });
  }

  int execute(std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    config.n = n;
    config.policy = policy.build();
    config.runs = runs;
    config.master_seed = seed;
    config.variants.clear();
    for (const auto& v : variants) config.variants.push_back(parse_estimator(v));
    config.max_depth = max_depth;
    config.threads = threads;
    config.keep_per_run = !per_tree_path.empty();

    const std::string replay = "sicta simulate --n " + std::to_string(n) + " " + policy.replay() +
                               " --runs " + std::to_string(runs) + " --seed " +
                               std::to_string(seed) + " --variants " + join(variants) +
                               " --max-depth " + std::to_string(max_depth);
    const auto start = std::chrono::steady_clock::now();
    const RunSummary summary = run_experiment(config, dump_tree);
    const double wall = seconds_since(start);

    if (dump_tree) {
      for (std::size_t i = 0; i < summary.per_run.size(); ++i) {
        err << "run " << i << ": " << summary.per_run[i].tree_text << '\n';
      }
    }

    std::string csv = provenance_header(replay) + kSummaryColumns;
    json j;
    j["metadata"] = metadata(replay, wall);
    j["rows"] = json::array();
    for (const auto& v : summary.variants) {
      csv += summary_row(config.policy, config, v);
      j["rows"].push_back(summary_json(config.policy, config, v));
    }

    std::string per_tree;
    if (!per_tree_path.empty()) {
      per_tree = provenance_header(replay) +
                 "n,d,policy,corrected,yg,standard,slots_idle,slots_collision,slots_singleton,"
                 "sic_recoveries,derived_signals\n";
      for (const auto& r : summary.per_run) {
        std::ostringstream os;
        os << n << ',' << config.policy.d() << ',' << config.policy.name() << ','
           << r.corrected << ',' << r.yg << ',' << r.standard << ',' << r.slots.idle_slots << ','
           << r.slots.collision_slots << ',' << r.slots.singleton_slots << ','
           << r.slots.sic_recoveries << ',' << r.slots.derived_signals << '\n';
        per_tree += os.str();
      }
    }

    emit(out_path, csv, out);
    if (!json_path.empty()) write_atomic(json_path, j.dump(2) + "\n");
    if (!per_tree_path.empty()) write_atomic(per_tree_path, per_tree);
    return kExitOk;
  }

  bool selected = false;
};

// --- exact ------------------------------------------------------------------

struct ExactCmd {
  PolicyFlags policy;
  int n_max = 0;
  std::string variant = "all";
  bool rational = false;
  double budget = TableOptions{}.composition_budget;
  std::string out_path;
  bool selected = false;

  static constexpr int kRationalLimit = 64;

  void add_to(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("exact", "exact expected CRI lengths L_0..L_nmax");
    sub->add_option("--nmax", n_max, "largest n in the table")->required();
    policy.add_to(sub);
    sub->add_option("--variant", variant, "all | standard | yg | corrected")
        ->capture_default_str()
        ->check(CLI::IsMember({"all", "standard", "yg", "corrected"}));
    sub->add_flag("--rational", rational, "exact fractions (nmax <= 64)");
    sub->add_option("--budget", budget, "maximum number of compositions enumerated")
        ->capture_default_str();
    sub->add_option("--out", out_path, "CSV path (default: stdout)");
    sub->callback([this] { selected = true; });
  }

  template <class Scalar>
  std::string table_csv(const SplitPolicy& pol) {
    const TableOptions options{budget};
    const auto wanted = [&](const char* name) { return variant == "all" || variant == name; };
    std::optional<ExpectedCriTable<Scalar>> standard, yg, corrected;
    if (wanted("standard")) standard = expected_cri_table<Scalar>(n_max, pol, Variant::kStandard, options);
    if (wanted("yg")) yg = expected_cri_table<Scalar>(n_max, pol, Variant::kYg, options);
    if (wanted("corrected")) corrected = expected_cri_table<Scalar>(n_max, pol, Variant::kCorrected, options);

    std::string csv = "n,L_standard,L_yg,L_corrected,T_corrected\n";
    for (int n = 0; n <= n_max; ++n) {
      csv += std::to_string(n) + ',';
      if (standard) csv += format_scalar((*standard)[n]);
      csv += ',';
      if (yg) csv += format_scalar((*yg)[n]);
      csv += ',';
      if (corrected) csv += format_scalar((*corrected)[n]);
      csv += ',';
      if (corrected) {
        const Scalar t = Scalar(n) / (*corrected)[n];
        csv += format_scalar(t);
      }
      csv += '\n';
    }
    return csv;
  }

  int execute(std::ostream& out, std::ostream&) {
    if (n_max < 0) throw ValidationError("--nmax must be >= 0");
    if (rational && n_max > kRationalLimit) {
      throw ValidationError("--rational supports --nmax up to " + std::to_string(kRationalLimit));
    }
    const SplitPolicy pol = policy.build();
    const std::string replay = "sicta exact --nmax " + std::to_string(n_max) + " " +
                               policy.replay() + " --variant " + variant +
                               (rational ? " --rational" : "");
    const std::string body = rational ? table_csv<Rational>(pol) : table_csv<double>(pol);
    emit(out_path, provenance_header(replay) + body, out);
    return kExitOk;
  }
};

// --- sweep ------------------------------------------------------------------

struct SweepCmd {
  std::vector<int> d_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::string> policies = {"fair", "biased"};
  int n = 1000;
  int runs = 10'000;
  std::uint64_t seed = 42;
  int max_depth = kDefaultMaxDepth;
  int threads = default_threads();
  std::string out_path, json_path;
  bool selected = false;

  void add_to(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("sweep", "simulated throughput against d");
    sub->add_option("--d-values", d_values, "splitting factors")->delimiter(',')->capture_default_str();
    sub->add_option("--policies", policies, "fair,biased")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::IsMember({"fair", "biased"}));
    sub->add_option("--n", n, "initial number of contenders")->capture_default_str();
    sub->add_option("--runs", runs, "trees per (d, policy)")->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--max-depth", max_depth, "tree depth bound")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads (output does not depend on it)");
    sub->add_option("--out", out_path, "CSV path (default: stdout)");
    sub->add_option("--json", json_path, "JSON summary path");
    sub->callback([this] { selected = true; });
  }

  int execute(std::ostream& out, std::ostream&) {
    for (int d : d_values) {
      if (d < 2) throw ValidationError("splitting factor d must satisfy d >= 2 (got " +
                                       std::to_string(d) + ")");
    }
    std::vector<PolicyKind> kinds;
    for (const auto& p : policies) kinds.push_back(p == "fair" ? PolicyKind::kFair : PolicyKind::kBiased);

    ExperimentConfig base;
    base.n = n;
    base.runs = runs;
    base.master_seed = seed;
    base.variants = {Estimator::kCorrected};
    base.max_depth = max_depth;
    base.threads = threads;

    const std::string replay = "sicta sweep --d-values " + join(d_values) + " --policies " +
                               join(policies) + " --n " + std::to_string(n) + " --runs " +
                               std::to_string(runs) + " --seed " + std::to_string(seed) +
                               " --max-depth " + std::to_string(max_depth);
    const auto start = std::chrono::steady_clock::now();
    const auto rows = sweep(d_values, kinds, base);
    const double wall = seconds_since(start);

    std::string csv = provenance_header(replay) + kSummaryColumns;
    json j;
    j["metadata"] = metadata(replay, wall);
    j["rows"] = json::array();
    for (const auto& row : rows) {
      const auto& v = row.summary.at(Estimator::kCorrected);
      csv += summary_row(row.summary.config.policy, row.summary.config, v);
      j["rows"].push_back(summary_json(row.summary.config.policy, row.summary.config, v));
    }
    emit(out_path, csv, out);
    if (!json_path.empty()) write_atomic(json_path, j.dump(2) + "\n");
    return kExitOk;
  }
};

// --- verify -----------------------------------------------------------------

struct VerifyCmd {
  int trees = VerifyOptions{}.trees;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::string json_path;
  bool selected = false;

  void add_to(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("verify", "run the evaluator and exact-table invariant suites");
    sub->add_option("--trees", trees, "random trees checked")->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--json", json_path, "JSON report path");
    sub->callback([this] { selected = true; });
  }

  int execute(std::ostream& out, std::ostream& err) {
    if (trees < 1) throw ValidationError("--trees must be >= 1");
    VerifyOptions options;
    options.trees = trees;
    options.seed = seed;
    const VerifyReport report = run_verify(options);
    report.print(out);
    out << "replay: sicta verify --trees " << trees << " --seed " << seed << '\n';
    if (!json_path.empty()) {
      json j = report.to_json();
      j["replay"] = "sicta verify --trees " + std::to_string(trees) + " --seed " + std::to_string(seed);
      write_atomic(json_path, j.dump(2) + "\n");
    }
    if (!report.passed()) {
      err << "verify: invariant violation\n";
      return kExitFailure;
    }
    return kExitOk;
  }
};

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ValidationError("cannot read config file '" + config_path + "'");
  std::vector<std::string> merged = args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(config_path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (value == "true") {
      merged.push_back(flag);
    } else if (value != "false") {
      merged.push_back(flag);
      merged.push_back(value);
    }
  }
  return merged;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree random access with successive interference cancellation"};
  app.name("sicta");
  app.require_subcommand(1, 1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; command-line flags win");

  SimulateCmd simulate;
  ExactCmd exact;
  SweepCmd sweep_cmd;
  VerifyCmd verify;
  simulate.add_to(app);
  exact.add_to(app);
  sweep_cmd.add_to(app);
  verify.add_to(app);

  try {
    // --config may appear anywhere; pull it out before the real parse.
    for (auto it = args.begin(); it != args.end(); ++it) {
      if (*it == "--config" && std::next(it) != args.end()) {
        const std::string path = *std::next(it);
        args.erase(it, it + 2);
        args = merge_config(args, path);
        break;
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sicta: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "sicta: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (simulate.selected) return simulate.execute(out, err);
    if (exact.selected) return exact.execute(out, err);
    if (sweep_cmd.selected) return sweep_cmd.execute(out, err);
    if (verify.selected) return verify.execute(out, err);
    err << "sicta: no subcommand\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "sicta: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "sicta: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace sicta::cli
