#pragma once

#include "amrc/datagen.hpp"
#include "amrc/learner.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace amrc {

enum class RuleKind { randomized, deterministic, both };

struct RunConfig {
    std::string dataset = "synthetic";  // CSV path or "synthetic"
    InstanceMapKind map = InstanceMapKind::rff;
    Index rff_dim = 200;
    std::optional<double> rff_scale;  // default: median heuristic
    int order = 1;
    int window = 200;
    Index cache = 100;
    int iterations = 2000;
    double delta = 0.05;
    TrackingMode mode = TrackingMode::multidimensional;
    RuleKind rule = RuleKind::both;
    std::uint64_t seed = 0;

    // Synthetic stream parameters (dataset == "synthetic").
    double omega = 0.1;
    std::int64_t synthetic_steps = 10000;
    double noise_std = 1.4142135623730951;

    // CSV ingestion.
    std::string label_column;  // name or 0-based index; empty = last column
    bool standardize = true;

    bool record_timing = false;
    int max_subset_size = 0;
};

/// Per-step telemetry. Labels are 1-based; rates and bounds are cumulative
/// up to and including step t.
struct StepRecord {
    std::int64_t t = 0;
    Label y_true = 0;
    Label y_rand = 0;
    Label y_det = 0;
    int mistake_rand = 0;
    int mistake_det = 0;
    double minimax_risk = 0.0;
    double cum_rate_rand = 0.0;
    double cum_rate_det = 0.0;
    double cum_bound = 0.0;
    double wall_time_us = 0.0;

    bool operator==(const StepRecord&) const = default;
};

struct LabeledStream {
    std::vector<Vector> x;
    std::vector<Label> y;
    int n_classes = 0;
    std::vector<std::string> label_names;  // label_names[j-1] is label j
    std::vector<std::string> feature_names;

    std::size_t size() const noexcept { return y.size(); }
    Index dim() const noexcept { return x.empty() ? 0 : x.front().size(); }
};

/// Reads a headed CSV in file (time) order. Labels are mapped to 1..|Y| by
/// first appearance. With `standardize`, each row is z-scored using the mean
/// and standard deviation of strictly earlier rows; components without past
/// spread (including the whole first row) become 0.
LabeledStream ingest_csv(const std::filesystem::path& path, const std::string& label_column = {},
                         bool standardize = true);

/// Synthetic stream of `steps` samples (no standardization).
LabeledStream synthetic_stream(const SyntheticConfig& config);

/// CSV or synthetic stream as selected by the config.
LabeledStream load_stream(const RunConfig& config);

FeatureMap build_feature_map(const RunConfig& config, const LabeledStream& stream);
LearnerConfig build_learner_config(const RunConfig& config);

struct RunHooks {
    /// Called after both predictions for step t are made and before y_t is
    /// revealed to the learner.
    std::function<void(std::int64_t t, const Vector& x, const Learner& learner)> before_learn;
    Learner::UncertaintyAdjuster adjust_uncertainty;
};

/// Prequential loop: predict x_t with the current rule(s), reveal y_t, then
/// track and optimize. The first prediction uses mu = 0.
std::vector<StepRecord> run_online(const RunConfig& config, const LabeledStream& stream,
                                   const RunHooks& hooks = {});

struct RunSummary {
    std::int64_t steps = 0;
    std::int64_t mistakes_rand = 0;
    std::int64_t mistakes_det = 0;
    double error_percent_rand = 0.0;
    double error_percent_det = 0.0;
    double mean_minimax_risk = 0.0;
    double bound_first = 0.0;
    double bound_final = 0.0;
    double mean_step_ms = 0.0;
};

RunSummary summarize(const std::vector<StepRecord>& records);

const std::vector<std::string>& step_record_columns(bool with_timing);

void write_results_csv(const std::vector<StepRecord>& records, const std::filesystem::path& path,
                       bool with_timing = false);
std::vector<StepRecord> read_results_csv(const std::filesystem::path& path);

/// Writes `<out>` (CSV) and `<out>.json` (summary with config echo).
void emit_results(const std::vector<StepRecord>& records, const RunConfig& config,
                  const std::filesystem::path& out);

/// Writes a stream as CSV with columns x1..xd,label.
void write_stream_csv(const LabeledStream& stream, const std::filesystem::path& path);

std::string to_string(InstanceMapKind kind);
std::string to_string(TrackingMode mode);
std::string to_string(RuleKind rule);

}  // namespace amrc
