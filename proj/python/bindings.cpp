#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hurstnn/app.hpp"

namespace py = pybind11;
using namespace hurstnn;

namespace {

std::vector<Date> ordinal_dates(std::size_t n) {
    return business_days(Date{std::chrono::year{2000}, std::chrono::month{1}, std::chrono::day{3}}, n);
}

py::dict summary_dict(const app::IndexOutcome& idx) {
    py::dict d;
    d["index_id"] = idx.index_id;
    d["region"] = idx.region;
    d["status"] = idx.error_code;
    d["H_mean"] = idx.summary ? py::cast(idx.summary->mean_hurst) : py::none();
    d["hit_mean"] = idx.summary ? py::cast(idx.summary->mean_hit) : py::none();
    d["n_windows"] = idx.summary ? idx.summary->window_count : 0;
    return d;
}

py::object report_dict(const std::optional<CrossSectionReport>& r) {
    if (!r) return py::none();
    py::dict d;
    d["pearson"] = r->pearson;
    d["n_indexes"] = r->n_indexes;
    d["hurst_median"] = r->hurst_median;
    d["hit_median"] = r->hit_median;
    py::dict labels;
    for (const auto& q : r->quadrants) labels[py::str(q.index_id)] = std::string(to_string(q.label));
    d["quadrants"] = labels;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DFA Hurst exponents and nearest-neighbour direction forecasts";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
    py::register_exception<InputError>(m, "InputError", error.ptr());
    py::register_exception<InsufficientHistory>(m, "InsufficientHistory", error.ptr());
    py::register_exception<FitError>(m, "FitError", error.ptr());
    py::register_exception<app::ConfigError>(m, "ConfigError", error.ptr());

    m.def(
        "log_returns",
        [](const std::vector<double>& prices) {
            return log_returns(PriceSeries("python", ordinal_dates(prices.size()), prices)).returns();
        },
        py::arg("prices"));

    py::class_<dfa::HurstFit>(m, "HurstFit")
        .def_readonly("hurst", &dfa::HurstFit::hurst)
        .def_readonly("log_constant", &dfa::HurstFit::log_constant)
        .def_readonly("r_squared", &dfa::HurstFit::r_squared)
        .def_readonly("dropped_points", &dfa::HurstFit::dropped_points)
        .def_property_readonly("points",
                               [](const dfa::HurstFit& f) {
                                   std::vector<std::pair<std::size_t, double>> pts;
                                   for (const auto& p : f.points) pts.emplace_back(p.scale, p.fluctuation);
                                   return pts;
                               })
        .def("__repr__", [](const dfa::HurstFit& f) {
            return "HurstFit(hurst=" + std::to_string(f.hurst) + ", r_squared=" + std::to_string(f.r_squared) + ")";
        });

    m.def(
        "estimate_hurst",
        [](const std::vector<double>& series, std::size_t min_scale, std::size_t max_scale, std::size_t scale_count) {
            return dfa::estimate_hurst(series, {min_scale, max_scale, scale_count});
        },
        py::arg("series"), py::arg("min_scale") = 4, py::arg("max_scale") = 0, py::arg("scale_count") = 20);

    m.def(
        "fluctuation",
        [](const std::vector<double>& series, std::size_t scale) {
            return dfa::fluctuation(dfa::profile(series), scale).fluctuation;
        },
        py::arg("series"), py::arg("scale"));

    m.def(
        "predict_window",
        [](const std::vector<double>& estimation, const std::vector<double>& prediction, std::size_t embedding_dim,
           std::size_t time_delay, std::size_t neighbor_count, double keep_fraction,
           std::optional<std::size_t> exclusion_window) {
            nn::EmbeddingConfig cfg{embedding_dim, time_delay, neighbor_count, keep_fraction, exclusion_window};
            nn::validate(cfg);
            const auto p = nn::predict_window(estimation, prediction, cfg);
            std::vector<int> directions;
            for (const auto& f : p.forecasts) directions.push_back(f.direction == nn::Direction::up ? 1 : -1);
            py::dict d;
            d["directions"] = directions;
            d["trading_days"] = p.record.trading_days;
            d["scored_days"] = p.record.scored_days;
            d["hits"] = p.record.hits;
            d["hit_rate"] = p.record.hit_rate;
            d["neighbor_count"] = p.neighbor_count;
            return d;
        },
        py::arg("estimation"), py::arg("prediction"), py::arg("embedding_dim") = 4, py::arg("time_delay") = 1,
        py::arg("neighbor_count") = 0, py::arg("keep_fraction") = 0.5, py::arg("exclusion_window") = py::none());

    m.def(
        "fgn",
        [](double hurst, std::size_t length, std::uint64_t seed, double mean, double std) {
            synth::GeneratorSpec s;
            s.kind = synth::Kind::fgn;
            s.hurst = hurst;
            s.length = length;
            s.seed = seed;
            s.mean = mean;
            s.std = std;
            return synth::fractional_gaussian_noise(s).returns();
        },
        py::arg("hurst"), py::arg("length"), py::arg("seed"), py::arg("mean") = 0.0, py::arg("std") = 1.0);

    m.def(
        "random_walk",
        [](std::size_t length, std::uint64_t seed, double mean, double std) {
            synth::GeneratorSpec s;
            s.length = length;
            s.seed = seed;
            s.mean = mean;
            s.std = std;
            return synth::gaussian_random_walk(s).returns();
        },
        py::arg("length"), py::arg("seed"), py::arg("mean") = 0.0, py::arg("std") = 1.0);

    m.def(
        "pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); }, py::arg("x"),
        py::arg("y"));
    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); }, py::arg("x"),
        py::arg("y"));

    m.def(
        "analyze",
        [](const std::string& config_text, const std::filesystem::path& base_dir,
           std::optional<std::filesystem::path> out_dir) {
            const auto cfg = app::parse_config(config_text, base_dir);
            app::AnalysisArtifacts a;
            {
                py::gil_scoped_release release;
                a = app::run_analyze(cfg);
                if (out_dir) app::write_artifacts(a, *out_dir);
            }
            py::list rows;
            for (const auto& idx : a.indexes) rows.append(summary_dict(idx));
            py::dict d;
            d["summary"] = rows;
            d["report"] = report_dict(a.report);
            d["report_error"] = a.report_error;
            d["exit_code"] = a.exit_code();
            return d;
        },
        py::arg("config"), py::arg("base_dir") = std::filesystem::path{}, py::arg("out_dir") = py::none(),
        "Run the rolling pipeline for a configuration given as text.");

}
