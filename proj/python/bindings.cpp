#include "amrc/guarantees.hpp"
#include "amrc/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

namespace py = pybind11;
using namespace amrc;

namespace {

InstanceMapKind parse_map(const std::string& s) {
    if (s == "linear") return InstanceMapKind::linear;
    if (s == "rff") return InstanceMapKind::rff;
    throw InputError("map must be 'linear' or 'rff'");
}

TrackingMode parse_mode(const std::string& s) {
    if (s == "multidim") return TrackingMode::multidimensional;
    if (s == "unidim") return TrackingMode::unidimensional;
    throw InputError("mode must be 'multidim' or 'unidim'");
}

RuleKind parse_rule(const std::string& s) {
    if (s == "randomized") return RuleKind::randomized;
    if (s == "deterministic") return RuleKind::deterministic;
    if (s == "both") return RuleKind::both;
    throw InputError("rule must be 'randomized', 'deterministic' or 'both'");
}

// Column-oriented view of the step records.
py::dict records_to_dict(const std::vector<StepRecord>& records) {
    const auto n = static_cast<py::ssize_t>(records.size());
    py::array_t<std::int64_t> t(n), y(n), yr(n), yd(n), mr(n), md(n);
    py::array_t<double> risk(n), rr(n), rd(n), bound(n), wall(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const StepRecord& r = records[static_cast<std::size_t>(i)];
        t.mutable_at(i) = r.t;
        y.mutable_at(i) = r.y_true;
        yr.mutable_at(i) = r.y_rand;
        yd.mutable_at(i) = r.y_det;
        mr.mutable_at(i) = r.mistake_rand;
        md.mutable_at(i) = r.mistake_det;
        risk.mutable_at(i) = r.minimax_risk;
        rr.mutable_at(i) = r.cum_rate_rand;
        rd.mutable_at(i) = r.cum_rate_det;
        bound.mutable_at(i) = r.cum_bound;
        wall.mutable_at(i) = r.wall_time_us;
    }
    py::dict d;
    d["t"] = t;
    d["y_true"] = y;
    d["y_rand"] = yr;
    d["y_det"] = yd;
    d["mistake_rand"] = mr;
    d["mistake_det"] = md;
    d["minimax_risk"] = risk;
    d["cum_rate_rand"] = rr;
    d["cum_rate_det"] = rd;
    d["cum_bound"] = bound;
    d["wall_time_us"] = wall;
    return d;
}

}  // namespace

PYBIND11_MODULE(_amrc, m) {
    m.doc() = "Adaptive minimax risk classifiers";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<IngestionError>(m, "IngestionError", PyExc_ValueError);
    py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](const std::string& dataset, const std::string& map, Index rff_dim,
                         std::optional<double> rff_scale, int order, int window, Index cache, int iters,
                         double delta, const std::string& mode, const std::string& rule, std::uint64_t seed,
                         double omega, std::int64_t steps, bool standardize, const std::string& label_column) {
                 RunConfig c;
                 c.dataset = dataset;
                 c.map = parse_map(map);
                 c.rff_dim = rff_dim;
                 c.rff_scale = rff_scale;
                 c.order = order;
                 c.window = window;
                 c.cache = cache;
                 c.iterations = iters;
                 c.delta = delta;
                 c.mode = parse_mode(mode);
                 c.rule = parse_rule(rule);
                 c.seed = seed;
                 c.omega = omega;
                 c.synthetic_steps = steps;
                 c.standardize = standardize;
                 c.label_column = label_column;
                 return c;
             }),
             py::kw_only(), py::arg("dataset") = "synthetic", py::arg("map") = "rff", py::arg("rff_dim") = 200,
             py::arg("rff_scale") = py::none(), py::arg("order") = 1, py::arg("window") = 200,
             py::arg("cache") = 100, py::arg("iters") = 2000, py::arg("delta") = 0.05,
             py::arg("mode") = "multidim", py::arg("rule") = "both", py::arg("seed") = 0,
             py::arg("omega") = 0.1, py::arg("steps") = 10000, py::arg("standardize") = true,
             py::arg("label_column") = "")
        .def_readwrite("dataset", &RunConfig::dataset)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("iterations", &RunConfig::iterations)
        .def_readwrite("synthetic_steps", &RunConfig::synthetic_steps)
        .def_property_readonly("map", [](const RunConfig& c) { return to_string(c.map); })
        .def_property_readonly("mode", [](const RunConfig& c) { return to_string(c.mode); });

    m.def(
        "run",
        [](const RunConfig& config, std::optional<std::filesystem::path> out) {
            const LabeledStream stream = load_stream(config);
            std::vector<StepRecord> records;
            {
                py::gil_scoped_release release;
                records = run_online(config, stream);
            }
            if (out) emit_results(records, config, *out);
            return records_to_dict(records);
        },
        py::arg("config"), py::arg("out") = py::none(),
        "Prequential run; returns per-step columns as numpy arrays and optionally writes the CSV and JSON summary.");

    m.def(
        "synthetic_stream",
        [](std::int64_t steps, double omega, std::uint64_t seed) {
            SyntheticConfig c;
            c.steps = steps;
            c.omega = omega;
            c.seed = seed;
            const LabeledStream s = synthetic_stream(c);
            Matrix X(static_cast<Index>(s.size()), kSyntheticDim);
            py::array_t<int> y(static_cast<py::ssize_t>(s.size()));
            for (std::size_t i = 0; i < s.size(); ++i) {
                X.row(static_cast<Index>(i)) = s.x[i].transpose();
                y.mutable_at(static_cast<py::ssize_t>(i)) = s.y[i];
            }
            return py::make_tuple(X, y);
        },
        py::arg("steps"), py::arg("omega") = 0.1, py::arg("seed") = 0, "Synthetic drifting stream as (X, y).");

    m.def(
        "mistake_bound",
        [](const std::vector<double>& risks, double delta) { return mistake_bound(risks, delta); },
        py::arg("risks"), py::arg("delta"));

    m.def(
        "transition_matrix", [](int order, double dt) { return transition_matrix({order, dt}); },
        py::arg("order"), py::arg("dt") = 1.0);

    py::class_<Learner>(m, "Learner")
        .def(py::init([](Index input_dim, int n_classes, const std::string& map, Index rff_dim, double rff_scale,
                         std::uint64_t seed, int order, int window, Index cache, int iters, const std::string& mode) {
                 const InstanceMap im = parse_map(map) == InstanceMapKind::linear
                                            ? InstanceMap::linear(input_dim)
                                            : InstanceMap::rff(input_dim, rff_dim, rff_scale, seed);
                 LearnerConfig lc;
                 lc.tracker.model.order = order;
                 lc.tracker.window = window;
                 lc.optimizer.cache_capacity = cache;
                 lc.optimizer.iterations = iters;
                 lc.mode = parse_mode(mode);
                 return Learner(FeatureMap(im, n_classes), lc);
             }),
             py::arg("input_dim"), py::arg("n_classes"), py::kw_only(), py::arg("map") = "linear",
             py::arg("rff_dim") = 200, py::arg("rff_scale") = 1.0, py::arg("seed") = 0, py::arg("order") = 1,
             py::arg("window") = 200, py::arg("cache") = 100, py::arg("iters") = 2000,
             py::arg("mode") = "multidim")
        .def("predict", &Learner::predict, py::arg("x"), "Deterministic label (1-based).")
        .def(
            "predict_proba", [](const Learner& l, const Vector& x) { return l.predict_probs(x).probs; },
            py::arg("x"))
        .def(
            "learn", [](Learner& l, const Vector& x, Label y) { l.learn(x, y); }, py::arg("x"), py::arg("y"))
        .def_property_readonly("mu", &Learner::mu)
        .def_property_readonly("minimax_risk", &Learner::minimax_risk)
        .def_property_readonly("samples_seen", &Learner::samples_seen)
        .def_property_readonly("tau", [](const Learner& l) { return l.uncertainty().tau; })
        .def_property_readonly("lambda_", [](const Learner& l) { return l.uncertainty().lambda; });
}
