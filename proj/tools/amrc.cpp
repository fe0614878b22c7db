// amrc: run adaptive minimax risk classifiers on a stream, or emit the
// synthetic rotating-Gaussian stream.
//
//   amrc run --dataset data/german.csv --map rff --seed 3 --out results/german.csv
//   amrc synth --omega 0.1 --steps 10000 --seed 0 --out synth.csv

#include "amrc/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Adaptive minimax risk classifiers for streams under concept drift"};
    app.require_subcommand(1);

    amrc::RunConfig run;
    std::string out_path = "amrc_results.csv";
    double rff_scale = 0.0;

    const std::map<std::string, amrc::InstanceMapKind> maps{{"linear", amrc::InstanceMapKind::linear},
                                                            {"rff", amrc::InstanceMapKind::rff}};
    const std::map<std::string, amrc::TrackingMode> modes{{"multidim", amrc::TrackingMode::multidimensional},
                                                          {"unidim", amrc::TrackingMode::unidimensional}};
    const std::map<std::string, amrc::RuleKind> rules{{"randomized", amrc::RuleKind::randomized},
                                                      {"deterministic", amrc::RuleKind::deterministic},
                                                      {"both", amrc::RuleKind::both}};

    auto* run_cmd = app.add_subcommand("run", "Prequential run over a CSV file or the synthetic stream");
    run_cmd->add_option("--dataset", run.dataset, "CSV path or 'synthetic'")->capture_default_str();
    run_cmd->add_option("--map", run.map, "Instance map")
        ->transform(CLI::CheckedTransformer(maps, CLI::ignore_case))
        ->default_str("rff");
    run_cmd->add_option("--rff-dim", run.rff_dim, "Number of random Fourier directions D")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run_cmd->add_option("--rff-scale", rff_scale, "Gaussian scale (default: median heuristic)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--order", run.order, "Kinematic model order k")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    run_cmd->add_option("--window", run.window, "Label window W")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--cache", run.cache, "Subgradient cache N")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--iters", run.iterations, "Subgradient iterations K")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run_cmd->add_option("--delta", run.delta, "Confidence level of the mistake bound")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    run_cmd->add_option("--mode", run.mode, "Tracking mode")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("multidim");
    run_cmd->add_option("--rule", run.rule, "Prediction rule(s) to report")
        ->transform(CLI::CheckedTransformer(rules, CLI::ignore_case))
        ->default_str("both");
    run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
    run_cmd->add_option("--out", out_path, "Results CSV (summary goes to <out>.json)")->capture_default_str();
    run_cmd->add_option("--label-column", run.label_column, "Label column name or 0-based index (default: last)");
    run_cmd->add_flag("!--no-standardize", run.standardize, "Disable past-only online standardization");
    run_cmd->add_option("--steps", run.synthetic_steps, "Synthetic stream length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run_cmd->add_option("--omega", run.omega, "Synthetic angular rate")->capture_default_str();
    run_cmd->add_option("--max-subset", run.max_subset_size, "Cap on label subset size (0: none)")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--timing", run.record_timing, "Add per-step wall time to the results");

    amrc::SyntheticConfig synth;
    std::string synth_out = "synthetic.csv";
    auto* synth_cmd = app.add_subcommand("synth", "Emit the synthetic drifting stream as CSV");
    synth_cmd->add_option("--omega", synth.omega, "Angular rate")->capture_default_str();
    synth_cmd->add_option("--steps", synth.steps, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
    synth_cmd->add_option("--noise-std", synth.noise_std, "Noise standard deviation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output CSV")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            if (rff_scale > 0.0) run.rff_scale = rff_scale;
            const amrc::LabeledStream stream = amrc::load_stream(run);
            const auto records = amrc::run_online(run, stream);
            amrc::emit_results(records, run, out_path);
            const amrc::RunSummary s = amrc::summarize(records);
            std::printf("steps=%lld error_rand=%.2f%% error_det=%.2f%% bound_final=%.4f\n",
                        static_cast<long long>(s.steps), s.error_percent_rand, s.error_percent_det,
                        s.bound_final);
        } else if (*synth_cmd) {
            amrc::write_stream_csv(amrc::synthetic_stream(synth), synth_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "amrc: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
