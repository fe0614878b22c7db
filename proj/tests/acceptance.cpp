// Acceptance checks. Prints one PASS/FAIL/BLOCKED line per criterion.
//
//   amrc_acceptance --group synthetic
//   amrc_acceptance --group benchmarks --data-dir data
//
// Exit status: 0 all pass, 1 any failure, 77 nothing failed but some
// criterion could not run (missing benchmark data). Criteria listed in
// --known-failures still print FAIL but do not affect the exit status.

#include "amrc/guarantees.hpp"
#include "amrc/harness.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace amrc;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, blocked };

struct Outcome {
    Status status;
    std::string detail;
};

int failures = 0;
int blocked = 0;
std::vector<int> known_failures;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
    const char* tag = o.status == Status::pass ? "PASS" : (o.status == Status::fail ? "FAIL" : "BLOCKED");
    const bool known = std::find(known_failures.begin(), known_failures.end(), id) != known_failures.end();
    if (o.status == Status::fail && !known) ++failures;
    if (o.status == Status::blocked) ++blocked;
    std::string note;
    if (known && o.status == Status::fail) note = " [known failure]";
    if (known && o.status == Status::pass) note = " [listed as known failure]";
    std::printf("%s [%d] %s: %s (%.1fs)%s\n", tag, id, name.c_str(), o.detail.c_str(), seconds, note.c_str());
    std::fflush(stdout);
}

template <class F>
void run_criterion(int id, const std::string& name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, o, secs);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunConfig synthetic_run(std::uint64_t seed, std::int64_t steps = 10000) {
    RunConfig cfg;
    cfg.dataset = "synthetic";
    cfg.map = InstanceMapKind::linear;
    cfg.order = 1;
    cfg.synthetic_steps = steps;
    cfg.seed = seed;
    return cfg;
}

// 1 ------------------------------------------------------------------------

Outcome kalman_equivalence() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> order(0, 2);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.05, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = order(rng);
        const Index n = k + 1;
        const Matrix H = transition_matrix({k, 1.0});
        ComponentTracker tr;
        tr.eta = Vector(n);
        for (Index i = 0; i < n; ++i) tr.eta(i) = 2.0 * normal(rng);
        tr.sigma = oracle::random_psd(n, rng);
        tr.q = 0.1 * oracle::random_psd(n, rng);
        tr.r2 = unit(rng);
        const double z = 2.0 * normal(rng);
        const auto expected = oracle::kalman_update_then_predict({tr.eta, tr.sigma}, H, tr.q, tr.r2, z);
        update_component(tr, H, z);
        worst = std::max({worst, (tr.eta - expected.x).lpNorm<Eigen::Infinity>(),
                          (tr.sigma - expected.P).lpNorm<Eigen::Infinity>()});
    }
    return {worst <= 1e-9 ? Status::pass : Status::fail, fmt("max abs deviation %.3g over 1000 cases", worst)};
}

// 2 ------------------------------------------------------------------------

Outcome asm_correctness() {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> dims(1, 2);
    std::uniform_int_distribution<int> cache_rows(0, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index d = dims(rng);
        const FeatureMap fm(InstanceMap::linear(d), 2);
        auto draw = [&] {
            Vector x(d);
            for (Index i = 0; i < d; ++i) x(i) = normal(rng);
            return x;
        };

        // Cache: random subset rows of earlier instances.
        SubgradientCache cache;
        cache.F = Matrix(0, fm.m());
        const int rows = cache_rows(rng);
        while (cache.rows() < rows) {
            Matrix F(0, fm.m());
            Vector h(0);
            fm.append_subset_rows(draw(), F, h);
            const Index pick = static_cast<Index>(unit(rng) * 3.0) % 3;
            cache.F.conservativeResize(cache.rows() + 1, Eigen::NoChange);
            cache.h.conservativeResize(cache.h.size() + 1);
            cache.F.row(cache.rows() - 1) = F.row(pick);
            cache.h(cache.h.size() - 1) = h(pick);
        }

        // Uncertainty set around the mean of a distribution over x_prev.
        const Vector x_prev = draw();
        const double p = unit(rng);
        UncertaintyModel u;
        u.tau = p * fm.phi(x_prev, 1) + (1.0 - p) * fm.phi(x_prev, 2);
        u.lambda = Vector(fm.m());
        for (Index i = 0; i < fm.m(); ++i) {
            u.lambda(i) = 0.3 * unit(rng);
            u.tau(i) += (2.0 * unit(rng) - 1.0) * u.lambda(i);
        }
        Vector mu_prev(fm.m());
        for (Index i = 0; i < fm.m(); ++i) mu_prev(i) = 0.5 * normal(rng);

        const ClassifierState s = optimize(mu_prev, u, fm, x_prev, cache, OptimizerConfig{});
        Matrix F = cache.F;
        Vector h = cache.h;
        fm.append_subset_rows(x_prev, F, h);
        const double exact = oracle::exact_minimum(u.tau, u.lambda, F, h);
        worst = std::max(worst, s.minimax_risk - exact);
    }
    return {worst <= 1e-2 ? Status::pass : Status::fail,
            fmt("max objective gap to vertex-enumeration oracle %.3g over 50 instances", worst)};
}

// 3 ------------------------------------------------------------------------

Outcome instantaneous_bounds() {
    const std::int64_t T = 10000;
    RunConfig cfg = synthetic_run(3, T);
    SyntheticConfig sc;
    sc.omega = cfg.omega;
    sc.seed = cfg.seed;
    const FeatureMap fm(InstanceMap::linear(kSyntheticDim), kSyntheticClasses);

    RunHooks hooks;
    // mu learned from the first s samples predicts sample s + 1.
    hooks.adjust_uncertainty = [&](std::int64_t seen, UncertaintyModel& u) {
        const Vector truth = true_tau(sc, seen + 1, fm);
        u.lambda = u.lambda.cwiseMax((truth - u.tau).cwiseAbs());
    };
    std::vector<std::int64_t> checkpoints;
    for (int c = 1; c <= 20; ++c) checkpoints.push_back(c * T / 20);
    std::mt19937_64 mc(33);
    int covered = 0;
    double slack = 0.0;
    hooks.before_learn = [&](std::int64_t t, const Vector&, const Learner& learner) {
        if (std::find(checkpoints.begin(), checkpoints.end(), t) == checkpoints.end()) return;
        const ProbabilisticRule rule = [&](const Vector& x) { return learner.predict_probs(x).probs; };
        const double err = true_error(sc, t, rule, 1000, mc);
        const double risk = learner.minimax_risk();
        covered += err <= risk;
        slack += risk - err;
    };
    run_online(cfg, load_stream(cfg), hooks);
    slack /= 20.0;
    const bool ok = covered >= 18 && slack <= 0.25;
    return {ok ? Status::pass : Status::fail,
            fmt("error <= R(U_t) at %d/20 checkpoints, mean slack %.3f", covered, slack)};
}

// 4 ------------------------------------------------------------------------

// Fraction of seeds whose cumulative randomized mistake rate stays under the
// per-step bound over the final 80% of steps.
int bound_holds(const RunConfig& base, const LabeledStream* fixed, int seeds) {
    std::vector<std::future<bool>> jobs;
    for (int s = 0; s < seeds; ++s) {
        jobs.push_back(std::async(std::launch::async, [&, s] {
            RunConfig cfg = base;
            cfg.seed = static_cast<std::uint64_t>(100 + s);
            const auto records = fixed ? run_online(cfg, *fixed) : run_online(cfg, load_stream(cfg));
            const std::size_t from = records.size() / 5;
            for (std::size_t i = from; i < records.size(); ++i)
                if (records[i].cum_rate_rand > records[i].cum_bound) return false;
            return true;
        }));
    }
    int ok = 0;
    for (auto& j : jobs) ok += j.get();
    return ok;
}

Outcome accumulated_bound_synthetic() {
    const int ok = bound_holds(synthetic_run(0), nullptr, 20);
    return {ok >= 19 ? Status::pass : Status::fail, fmt("synthetic: bound held in %d/20 seeds", ok)};
}

std::optional<fs::path> dataset(const fs::path& dir, const char* name) {
    const fs::path p = dir / name;
    if (fs::exists(p)) return p;
    return std::nullopt;
}

Outcome missing(const fs::path& dir, const std::string& names) {
    return {Status::blocked, "benchmark data not found (" + names + " in " + dir.string() + ")"};
}

Outcome accumulated_bound_german(const fs::path& dir) {
    const auto path = dataset(dir, "german.csv");
    if (!path) return missing(dir, "german.csv");
    RunConfig cfg;
    cfg.dataset = path->string();
    const LabeledStream stream = load_stream(cfg);
    const int ok = bound_holds(cfg, &stream, 20);
    return {ok >= 19 ? Status::pass : Status::fail,
            fmt("German (%zu steps): bound held in %d/20 seeds", stream.size(), ok)};
}

// 5 ------------------------------------------------------------------------

Outcome synthetic_rate_band() {
    const RunConfig cfg = synthetic_run(0);
    const RunSummary s = summarize(run_online(cfg, load_stream(cfg)));
    const double rate = s.error_percent_rand / 100.0;
    const bool ok = rate >= 0.20 && rate <= 0.42;
    return {ok ? Status::pass : Status::fail,
            fmt("randomized rate %.4f (deterministic %.4f), band [0.20, 0.42]", rate,
                s.error_percent_det / 100.0)};
}

// 6, 7 ---------------------------------------------------------------------

double median_det_error(const fs::path& path, TrackingMode mode) {
    RunConfig base;
    base.dataset = path.string();
    base.mode = mode;
    const LabeledStream stream = load_stream(base);
    std::vector<std::future<double>> jobs;
    for (int s = 0; s < 5; ++s) {
        jobs.push_back(std::async(std::launch::async, [&, s] {
            RunConfig cfg = base;
            cfg.seed = static_cast<std::uint64_t>(s);
            return summarize(run_online(cfg, stream)).error_percent_det;
        }));
    }
    std::vector<double> errors;
    for (auto& j : jobs) errors.push_back(j.get());
    return median(errors);
}

Outcome benchmark_errors(const fs::path& dir) {
    struct Target {
        const char* file;
        double paper;
        double tol;
    };
    const Target targets[] = {{"elec2.csv", 33.9, 5.0}, {"german.csv", 30.0, 5.0}, {"usenet1.csv", 32.0, 7.0}};
    std::string detail, absent;
    bool ok = true;
    for (const Target& t : targets) {
        const auto path = dataset(dir, t.file);
        if (!path) {
            absent += (absent.empty() ? "" : ", ") + std::string(t.file);
            continue;
        }
        const double err = median_det_error(*path, TrackingMode::multidimensional);
        ok = ok && std::abs(err - t.paper) <= t.tol;
        detail += fmt("%s %.1f%% (target %.1f +- %.0f) ", t.file, err, t.paper, t.tol);
    }
    if (!absent.empty()) return missing(dir, absent);
    return {ok ? Status::pass : Status::fail, detail};
}

Outcome unidim_ablation(const fs::path& dir) {
    const auto path = dataset(dir, "german.csv");
    if (!path) return missing(dir, "german.csv");
    const double multi = median_det_error(*path, TrackingMode::multidimensional);
    const double uni = median_det_error(*path, TrackingMode::unidimensional);
    return {multi <= uni ? Status::pass : Status::fail,
            fmt("German multidim %.1f%% vs unidim %.1f%%", multi, uni)};
}

// 8 ------------------------------------------------------------------------

Outcome constant_step_cost() {
    RunConfig cfg = synthetic_run(8);
    cfg.record_timing = true;
    const Index limit = cfg.cache + 3;
    Index widest = 0;
    RunHooks hooks;
    hooks.before_learn = [&](std::int64_t, const Vector&, const Learner& learner) {
        widest = std::max(widest, learner.working_rows());
    };
    const auto records = run_online(cfg, load_stream(cfg), hooks);
    const std::size_t dec = records.size() / 10;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < dec; ++i) {
        first += records[i].wall_time_us;
        last += records[records.size() - dec + i].wall_time_us;
    }
    first /= static_cast<double>(dec);
    last /= static_cast<double>(dec);
    const bool ok = last <= 2.0 * first && widest <= limit;
    return {ok ? Status::pass : Status::fail,
            fmt("first decile %.1fus, last decile %.1fus, widest working set %ld rows (limit %ld)", first, last,
                static_cast<long>(widest), static_cast<long>(limit))};
}

// 9 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome property_suite() {
    std::vector<std::string> broken;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;

    // Normalization and argmax consistency.
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + trial % 4;
        const FeatureMap fm(InstanceMap::linear(2), n);
        Vector mu(fm.m()), x(2);
        for (Index i = 0; i < fm.m(); ++i) mu(i) = 2.0 * normal(rng);
        x << normal(rng), normal(rng);
        const PredictionDistribution d = predict_probs(fm, mu, {}, x);
        if (std::abs(d.probs.sum() - 1.0) > 1e-12 || (d.probs.array() < 0.0).any()) {
            broken.push_back("normalization");
            break;
        }
        Index best = 0;
        for (Index j = 1; j < d.probs.size(); ++j)
            if (d.probs(j) > d.probs(best)) best = j;
        if (d.normalizer > 0.0 && best + 1 != predict_deterministic(fm, mu, x)) {
            broken.push_back("argmax consistency");
            break;
        }
    }

    // lambda >= 0 and the local phi lower bound over every observed instance.
    {
        const RunConfig cfg = synthetic_run(9, 300);
        const LabeledStream stream = load_stream(cfg);
        const FeatureMap fm = build_feature_map(cfg, stream);
        Learner learner(fm, build_learner_config(cfg));
        Matrix all(0, fm.m());
        Vector all_h(0);
        bool lambda_ok = true, lower_ok = true;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            learner.learn(stream.x[i], stream.y[i]);
            fm.append_subset_rows(fm.psi(stream.x[i]), all, all_h);
            lambda_ok = lambda_ok && (learner.uncertainty().lambda.array() >= 0.0).all();
            if (learner.cache().rows() > 0)
                lower_ok = lower_ok && varphi_local(learner.cache().F, learner.cache().h, learner.mu()).value <=
                                           varphi_local(all, all_h, learner.mu()).value + 1e-12;
        }
        if (!lambda_ok) broken.push_back("lambda >= 0");
        if (!lower_ok) broken.push_back("local phi lower bound");
    }

    // Mistake bound example.
    const std::vector<double> risks(100, 0.2);
    const double expected = 0.2 + std::sqrt(2.0 * std::log(20.0) / 100.0);
    if (std::abs(mistake_bound_per_step(risks, 0.05) - expected) > 1e-12) broken.push_back("mistake bound");

    // Byte-identical results for a fixed seed.
    {
        const fs::path dir = AMRC_TEST_TMPDIR;
        fs::create_directories(dir);
        RunConfig cfg = synthetic_run(5, 500);
        cfg.map = InstanceMapKind::rff;
        cfg.rff_dim = 20;
        emit_results(run_online(cfg, load_stream(cfg)), cfg, dir / "accept_a.csv");
        emit_results(run_online(cfg, load_stream(cfg)), cfg, dir / "accept_b.csv");
        if (slurp(dir / "accept_a.csv") != slurp(dir / "accept_b.csv")) broken.push_back("reproducibility");
    }

    if (broken.empty()) return {Status::pass, "all properties hold"};
    std::string what;
    for (const auto& b : broken) what += (what.empty() ? "" : ", ") + b;
    return {Status::fail, "violated: " + what};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMRC acceptance checks"};
    std::string group = "all";
    std::string data_dir;
    app.add_option("--group", group, "synthetic, benchmarks or all")
        ->check(CLI::IsMember({"synthetic", "benchmarks", "all"}));
    app.add_option("--data-dir", data_dir, "Directory holding elec2.csv, german.csv, usenet1.csv");
    app.add_option("--known-failures", known_failures, "Criteria whose failure does not fail the run")
        ->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("AMRC_DATA_DIR"); env && *env) data_dir = env;
    if (data_dir.empty()) data_dir = "data";
    const fs::path dir = data_dir;

    const bool synthetic = group != "benchmarks";
    const bool benchmarks = group != "synthetic";

    if (synthetic) {
        run_criterion(1, "Kalman oracle equivalence", kalman_equivalence);
        run_criterion(2, "ASM correctness at desk scale", asm_correctness);
        run_criterion(3, "instantaneous bound validity", instantaneous_bounds);
        run_criterion(4, "accumulated-mistake bound validity (synthetic)", accumulated_bound_synthetic);
        run_criterion(5, "synthetic mistake-rate band", synthetic_rate_band);
        run_criterion(8, "constant per-step cost", constant_step_cost);
        run_criterion(9, "property suite", property_suite);
    }
    if (benchmarks) {
        run_criterion(4, "accumulated-mistake bound validity (German)", [&] { return accumulated_bound_german(dir); });
        run_criterion(6, "benchmark error reproduction", [&] { return benchmark_errors(dir); });
        run_criterion(7, "multidimensional vs unidimensional ablation", [&] { return unidim_ablation(dir); });
    }

    if (failures > 0) return 1;
    if (blocked > 0) return 77;
    return 0;
}
