#include "amrc/harness.hpp"

#include "amrc/guarantees.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace amrc {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            cell.push_back(c);
        } else if (c == ',' && !quoted) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t row, const char* column) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IngestionError(row, std::string("bad integer in column ") + column + ": '" + s + "'");
    return value;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::mt19937_64 sampling_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
}

}  // namespace

std::string to_string(InstanceMapKind kind) {
    return kind == InstanceMapKind::linear ? "linear" : "rff";
}

std::string to_string(TrackingMode mode) {
    return mode == TrackingMode::multidimensional ? "multidim" : "unidim";
}

std::string to_string(RuleKind rule) {
    switch (rule) {
        case RuleKind::randomized: return "randomized";
        case RuleKind::deterministic: return "deterministic";
        case RuleKind::both: return "both";
    }
    return "both";
}

LabeledStream ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                         bool standardize) {
    std::ifstream in(path);
    if (!in) throw IngestionError(0, "cannot open " + path.string());

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.size() < 2) throw IngestionError(0, "header needs at least one feature and a label column");

    std::size_t label_idx = header.size() - 1;
    if (!label_column.empty()) {
        const auto it = std::find(header.begin(), header.end(), label_column);
        if (it != header.end()) {
            label_idx = static_cast<std::size_t>(it - header.begin());
        } else {
            std::size_t idx = 0;
            const auto [ptr, ec] =
                std::from_chars(label_column.data(), label_column.data() + label_column.size(), idx);
            if (ec != std::errc() || ptr != label_column.data() + label_column.size() || idx >= header.size())
                throw IngestionError(0, "unknown label column '" + label_column + "'");
            label_idx = idx;
        }
    }

    LabeledStream stream;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx) stream.feature_names.push_back(header[c]);
    const Index dim = static_cast<Index>(header.size() - 1);

    std::map<std::string, Label> label_ids;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw IngestionError(row, "expected " + std::to_string(header.size()) + " cells, got " +
                                          std::to_string(cells.size()));
        Vector x(dim);
        Index k = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) continue;
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw IngestionError(row, "non-numeric value '" + cells[c] + "' in column '" + header[c] + "'");
            x(k++) = v;
        }
        const std::string& name = cells[label_idx];
        if (name.empty()) throw IngestionError(row, "empty label");
        auto [it, inserted] = label_ids.try_emplace(name, static_cast<Label>(label_ids.size() + 1));
        if (inserted) stream.label_names.push_back(name);
        stream.x.push_back(std::move(x));
        stream.y.push_back(it->second);
    }
    stream.n_classes = static_cast<int>(label_ids.size());

    if (standardize && !stream.x.empty()) {
        // Welford accumulators over rows strictly before the current one.
        Vector mean = Vector::Zero(dim);
        Vector m2 = Vector::Zero(dim);
        double count = 0.0;
        for (Vector& x : stream.x) {
            const Vector raw = x;
            Vector z = Vector::Zero(dim);
            if (count > 0.0) {
                for (Index i = 0; i < dim; ++i) {
                    const double sd = std::sqrt(m2(i) / count);
                    z(i) = sd > 1e-12 ? (raw(i) - mean(i)) / sd : 0.0;
                }
            }
            x = z;
            count += 1.0;
            const Vector diff = raw - mean;
            mean += diff / count;
            m2 += diff.cwiseProduct(raw - mean);
        }
    }
    return stream;
}

LabeledStream synthetic_stream(const SyntheticConfig& config) {
    LabeledStream stream;
    stream.n_classes = kSyntheticClasses;
    stream.label_names = {"1", "2"};
    stream.feature_names = {"x1", "x2"};
    stream.x.reserve(static_cast<std::size_t>(config.steps));
    stream.y.reserve(static_cast<std::size_t>(config.steps));
    for (std::int64_t t = 1; t <= config.steps; ++t) {
        Sample s = synth_step(config, t);
        stream.x.push_back(std::move(s.x));
        stream.y.push_back(s.y);
    }
    return stream;
}

LabeledStream load_stream(const RunConfig& config) {
    if (config.dataset == "synthetic") {
        SyntheticConfig sc;
        sc.omega = config.omega;
        sc.noise_std = config.noise_std;
        sc.steps = config.synthetic_steps;
        sc.seed = config.seed;
        return synthetic_stream(sc);
    }
    return ingest_csv(config.dataset, config.label_column, config.standardize);
}

FeatureMap build_feature_map(const RunConfig& config, const LabeledStream& stream) {
    if (stream.n_classes < 2) throw InputError("stream needs at least two distinct labels");
    const Index dim = stream.dim();
    if (config.map == InstanceMapKind::linear) return FeatureMap(InstanceMap::linear(dim), stream.n_classes);
    const double scale = config.rff_scale ? *config.rff_scale : median_heuristic_scale(stream.x, 50);
    return FeatureMap(InstanceMap::rff(dim, config.rff_dim, scale, config.seed), stream.n_classes);
}

LearnerConfig build_learner_config(const RunConfig& config) {
    LearnerConfig lc;
    lc.tracker.model.order = config.order;
    lc.tracker.window = config.window;
    lc.optimizer.iterations = config.iterations;
    lc.optimizer.cache_capacity = config.cache;
    lc.optimizer.max_subset_size = config.max_subset_size;
    lc.mode = config.mode;
    return lc;
}

std::vector<StepRecord> run_online(const RunConfig& config, const LabeledStream& stream,
                                   const RunHooks& hooks) {
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw InputError("delta must lie in (0, 1)");
    std::vector<StepRecord> records;
    if (stream.size() == 0) return records;

    Learner learner(build_feature_map(config, stream), build_learner_config(config));
    auto rng = sampling_rng(config.seed);

    records.reserve(stream.size());
    double risk_sum = 0.0;
    std::int64_t miss_rand = 0;
    std::int64_t miss_det = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::int64_t t = static_cast<std::int64_t>(i) + 1;
        const Vector& x = stream.x[i];
        const Label y = stream.y[i];
        const auto start = std::chrono::steady_clock::now();

        StepRecord rec;
        rec.t = t;
        rec.y_true = y;
        rec.minimax_risk = learner.minimax_risk();
        rec.y_rand = learner.sample(x, rng);
        rec.y_det = learner.predict(x);
        if (hooks.before_learn) hooks.before_learn(t, x, learner);

        try {
            learner.learn(x, y, hooks.adjust_uncertainty);
        } catch (const std::exception& e) {
            throw std::runtime_error("step " + std::to_string(t) + ": " + e.what());
        }
        const auto stop = std::chrono::steady_clock::now();

        rec.mistake_rand = rec.y_rand != y;
        rec.mistake_det = rec.y_det != y;
        miss_rand += rec.mistake_rand;
        miss_det += rec.mistake_det;
        risk_sum += rec.minimax_risk;
        rec.cum_rate_rand = static_cast<double>(miss_rand) / t;
        rec.cum_rate_det = static_cast<double>(miss_det) / t;
        rec.cum_bound = (risk_sum + azuma_slack(static_cast<std::size_t>(t), config.delta)) / t;
        rec.wall_time_us = std::chrono::duration<double, std::micro>(stop - start).count();
        records.push_back(rec);
    }
    return records;
}

RunSummary summarize(const std::vector<StepRecord>& records) {
    RunSummary s;
    s.steps = static_cast<std::int64_t>(records.size());
    if (records.empty()) return s;
    double risk = 0.0;
    double time = 0.0;
    for (const StepRecord& r : records) {
        s.mistakes_rand += r.mistake_rand;
        s.mistakes_det += r.mistake_det;
        risk += r.minimax_risk;
        time += r.wall_time_us;
    }
    const double T = static_cast<double>(s.steps);
    s.error_percent_rand = 100.0 * static_cast<double>(s.mistakes_rand) / T;
    s.error_percent_det = 100.0 * static_cast<double>(s.mistakes_det) / T;
    s.mean_minimax_risk = risk / T;
    s.bound_first = records.front().cum_bound;
    s.bound_final = records.back().cum_bound;
    s.mean_step_ms = time / T / 1000.0;
    return s;
}

const std::vector<std::string>& step_record_columns(bool with_timing) {
    static const std::vector<std::string> base = {
        "t",           "y_true",        "y_rand",       "y_det",    "mistake_rand", "mistake_det",
        "minimax_risk", "cum_rate_rand", "cum_rate_det", "cum_bound"};
    static const std::vector<std::string> timed = [] {
        auto cols = base;
        cols.push_back("wall_time_us");
        return cols;
    }();
    return with_timing ? timed : base;
}

void write_results_csv(const std::vector<StepRecord>& records, const std::filesystem::path& path,
                       bool with_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto& cols = step_record_columns(with_timing);
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << '\n';
    for (const StepRecord& r : records) {
        out << r.t << ',' << r.y_true << ',' << r.y_rand << ',' << r.y_det << ',' << r.mistake_rand
            << ',' << r.mistake_det << ',' << format_double(r.minimax_risk) << ','
            << format_double(r.cum_rate_rand) << ',' << format_double(r.cum_rate_det) << ','
            << format_double(r.cum_bound);
        if (with_timing) out << ',' << format_double(r.wall_time_us);
        out << '\n';
    }
    if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<StepRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError(0, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IngestionError(0, "missing header");
    const auto header = split_csv_line(line);
    const bool timed = header == step_record_columns(true);
    if (!timed && header != step_record_columns(false)) throw IngestionError(0, "unexpected header");

    std::vector<StepRecord> records;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto c = split_csv_line(line);
        if (c.size() != header.size()) throw IngestionError(row, "wrong cell count");
        StepRecord r;
        r.t = parse_int<std::int64_t>(c[0], row, "t");
        r.y_true = parse_int<int>(c[1], row, "y_true");
        r.y_rand = parse_int<int>(c[2], row, "y_rand");
        r.y_det = parse_int<int>(c[3], row, "y_det");
        r.mistake_rand = parse_int<int>(c[4], row, "mistake_rand");
        r.mistake_det = parse_int<int>(c[5], row, "mistake_det");
        double* doubles[] = {&r.minimax_risk, &r.cum_rate_rand, &r.cum_rate_det, &r.cum_bound};
        for (std::size_t k = 0; k < 4; ++k)
            if (!parse_double(c[6 + k], *doubles[k])) throw IngestionError(row, "bad number '" + c[6 + k] + "'");
        if (timed && !parse_double(c[10], r.wall_time_us)) throw IngestionError(row, "bad wall time");
        records.push_back(r);
    }
    return records;
}

void emit_results(const std::vector<StepRecord>& records, const RunConfig& config,
                  const std::filesystem::path& out) {
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    write_results_csv(records, out, config.record_timing);

    const RunSummary s = summarize(records);
    nlohmann::ordered_json j;
    j["steps"] = s.steps;
    j["seed"] = config.seed;
    j["mistakes_randomized"] = s.mistakes_rand;
    j["mistakes_deterministic"] = s.mistakes_det;
    j["error_percent_randomized"] = s.error_percent_rand;
    j["error_percent_deterministic"] = s.error_percent_det;
    j["mean_minimax_risk"] = s.mean_minimax_risk;
    j["bound_first"] = s.bound_first;
    j["bound_final"] = s.bound_final;
    if (config.record_timing) j["mean_step_ms"] = s.mean_step_ms;

    nlohmann::ordered_json cfg;
    cfg["dataset"] = config.dataset;
    cfg["map"] = to_string(config.map);
    cfg["rff_dim"] = config.rff_dim;
    if (config.rff_scale) cfg["rff_scale"] = *config.rff_scale;
    else cfg["rff_scale"] = nullptr;
    cfg["order"] = config.order;
    cfg["window"] = config.window;
    cfg["cache"] = config.cache;
    cfg["iters"] = config.iterations;
    cfg["delta"] = config.delta;
    cfg["mode"] = to_string(config.mode);
    cfg["rule"] = to_string(config.rule);
    if (config.dataset == "synthetic") {
        cfg["omega"] = config.omega;
        cfg["steps"] = config.synthetic_steps;
        cfg["noise_std"] = config.noise_std;
    } else {
        cfg["label_column"] = config.label_column;
        cfg["standardize"] = config.standardize;
    }
    j["config"] = cfg;

    std::filesystem::path json_path = out;
    json_path += ".json";
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw std::runtime_error("cannot write " + json_path.string());
    js << j.dump(2) << '\n';
    if (!js) throw std::runtime_error("error writing " + json_path.string());
}

void write_stream_csv(const LabeledStream& stream, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const Index d = stream.dim();
    for (Index i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
    out << "label\n";
    for (std::size_t r = 0; r < stream.size(); ++r) {
        for (Index i = 0; i < d; ++i) out << format_double(stream.x[r](i)) << ',';
        out << stream.y[r] << '\n';
    }
    if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace amrc
