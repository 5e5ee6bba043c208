#include "sicta/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sicta/analytic.hpp"

namespace sicta {

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::kCorrected:
      return "corrected";
    case Estimator::kYg:
      return "yg";
    case Estimator::kStandard:
      return "standard";
    case Estimator::kSlotLevel:
      break;
  }
  return "slot_level";
}

Estimator parse_estimator(std::string_view name) {
  for (Estimator e : kAllEstimators) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected corrected, yg, standard or slot_level)");
}

double VariantSummary::standard_error() const {
  return runs > 0 ? stddev / std::sqrt(static_cast<double>(runs)) : 0.0;
}

const VariantSummary& RunSummary::at(Estimator e) const {
  for (const auto& v : variants) {
    if (v.variant == e) return v;
  }
  throw ContractViolation("variant '" + std::string(to_string(e)) + "' was not simulated");
}

namespace {

constexpr double kZ95 = 1.959963984540054;

int length_of(const RunRecord& r, Estimator e) {
  switch (e) {
    case Estimator::kCorrected:
      return r.corrected;
    case Estimator::kYg:
      return r.yg;
    case Estimator::kStandard:
      return r.standard;
    case Estimator::kSlotLevel:
      break;
  }
  return r.slots.total_slots;
}

VariantSummary summarize(Estimator e, int n, const std::vector<RunRecord>& records) {
  VariantSummary s;
  s.variant = e;
  s.runs = static_cast<int>(records.size());
  double sum = 0;
  double ratio_sum = 0;
  for (const auto& r : records) {
    const double l = length_of(r, e);
    sum += l;
    ratio_sum += n / l;
  }
  s.mean = sum / s.runs;
  double sq = 0;
  for (const auto& r : records) {
    const double dev = length_of(r, e) - s.mean;
    sq += dev * dev;
  }
  s.stddev = s.runs > 1 ? std::sqrt(sq / (s.runs - 1)) : 0.0;
  s.ci95 = kZ95 * s.standard_error();
  s.throughput_rom = n / s.mean;
  s.throughput_mor = ratio_sum / s.runs;
  s.throughput_ci95 = n * s.ci95 / (s.mean * s.mean);
  return s;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, bool dump_trees) {
  if (config.runs < 1) throw ValidationError("runs must be >= 1");
  if (config.n < 0) throw ValidationError("n must be >= 0");
  if (config.max_depth < 1) throw ValidationError("max_depth must be >= 1");
  if (config.variants.empty()) throw ValidationError("at least one variant is required");

  const auto wants = [&](Estimator e) {
    return std::find(config.variants.begin(), config.variants.end(), e) != config.variants.end();
  };
  const bool need_corrected = wants(Estimator::kCorrected);
  const bool need_yg = wants(Estimator::kYg);
  const bool need_standard = wants(Estimator::kStandard);
  const bool need_slots = wants(Estimator::kSlotLevel) || config.keep_per_run;

  std::vector<RunRecord> records(config.runs);
  std::vector<int> failed_depth(config.runs, 0);
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next.fetch_add(1); i < config.runs; i = next.fetch_add(1)) {
      Engine rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(i)));
      try {
        const SplitTree tree = generate(config.n, config.policy, rng, config.max_depth);
        RunRecord& r = records[i];
        if (need_corrected || config.keep_per_run) r.corrected = corrected_length(tree);
        if (need_yg || config.keep_per_run) r.yg = yg_length(tree);
        if (need_standard || config.keep_per_run) r.standard = standard_ta_length(tree);
        if (need_slots) r.slots = slot_level_cri(tree);
        if (dump_trees) r.tree_text = tree.to_string();
      } catch (const DepthExceeded& e) {
        failed_depth[i] = e.depth();
      }
    }
  };

  const int threads = std::clamp(config.threads, 1, config.runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  RunSummary summary;
  summary.config = config;
  summary.depth_errors = static_cast<int>(
      std::count_if(failed_depth.begin(), failed_depth.end(), [](int d) { return d != 0; }));
  if (summary.depth_errors > 0) {
    const auto first = std::find_if(failed_depth.begin(), failed_depth.end(),
                                    [](int d) { return d != 0; });
    throw ExperimentError(std::to_string(summary.depth_errors) + " of " +
                              std::to_string(config.runs) +
                              " runs exceeded max_depth " + std::to_string(config.max_depth) +
                              "; first failure at run " +
                              std::to_string(first - failed_depth.begin()),
                          summary.depth_errors);
  }
  for (Estimator e : config.variants) summary.variants.push_back(summarize(e, config.n, records));
  if (config.keep_per_run || dump_trees) summary.per_run = std::move(records);
  return summary;
}

std::vector<SweepRow> sweep(const std::vector<int>& d_values,
                            const std::vector<PolicyKind>& policies,
                            const ExperimentConfig& base) {
  std::vector<SweepRow> rows;
  for (int d : d_values) {
    for (PolicyKind kind : policies) {
      ExperimentConfig config = base;
      switch (kind) {
        case PolicyKind::kFair:
          config.policy = fair(d);
          break;
        case PolicyKind::kBiased:
          config.policy = biased(d);
          break;
        case PolicyKind::kCustom:
          throw ValidationError("sweep takes fair and biased policies only");
      }
      rows.push_back({d, kind, run_experiment(config), yg_closed_form_mst(d)});
    }
  }
  return rows;
}

}  // namespace sicta
