// Python bindings over the core library: models and fitting, the protocol
// DSL, estimation/comparison, corpus generation, backends and validation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "protoperf/bench.hpp"
#include "protoperf/estimator.hpp"
#include "protoperf/generator.hpp"
#include "protoperf/openssl_backend.hpp"
#include "protoperf/synthetic_backend.hpp"
#include "protoperf/validator.hpp"

namespace py = pybind11;
using namespace protoperf;

PYBIND11_MODULE(protoperf, m) {
    m.doc() = "class-level crypto cost models and comparative protocol estimation";

    py::register_exception<ParseError>(m, "ProtocolParseError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "RegistryFormatError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_ValueError);
    py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);

    py::enum_<Category>(m, "Category")
        .value("SYMMETRIC_ENCRYPT", Category::symmetric_encrypt)
        .value("SYMMETRIC_DECRYPT", Category::symmetric_decrypt)
        .value("HASH", Category::hash)
        .value("ASYMMETRIC_ENCRYPT", Category::asymmetric_encrypt)
        .value("ASYMMETRIC_DECRYPT", Category::asymmetric_decrypt);

    py::enum_<BlockMode>(m, "BlockMode")
        .value("ECB", BlockMode::ecb)
        .value("CBC", BlockMode::cbc)
        .value("CFB", BlockMode::cfb)
        .value("OFB", BlockMode::ofb)
        .value("CTR", BlockMode::ctr);

    py::enum_<TimeUnit>(m, "TimeUnit")
        .value("NS", TimeUnit::ns)
        .value("US", TimeUnit::us)
        .value("MS", TimeUnit::ms)
        .value("PAPER_UNITS", TimeUnit::paper_units);

    py::enum_<Faster>(m, "Faster")
        .value("P", Faster::p)
        .value("Q", Faster::q)
        .value("TIE", Faster::tie);

    py::class_<PolynomialModel>(m, "PolynomialModel")
        .def(py::init<>())
        .def_readwrite("alpha1", &PolynomialModel::alpha1)
        .def_readwrite("alpha2", &PolynomialModel::alpha2)
        .def_readwrite("alpha3", &PolynomialModel::alpha3)
        .def_readwrite("alpha4", &PolynomialModel::alpha4)
        .def_readwrite("unit", &PolynomialModel::unit)
        .def("__repr__", [](const PolynomialModel& p) {
            return "PolynomialModel(alpha1=" + format_double(p.alpha1) +
                   ", alpha2=" + format_double(p.alpha2) + ", alpha3=" + format_double(p.alpha3) +
                   ", alpha4=" + format_double(p.alpha4) + ")";
        });

    py::class_<FitStats>(m, "FitStats")
        .def_readonly("rmse", &FitStats::rmse)
        .def_readonly("max_abs_residual", &FitStats::max_abs_residual)
        .def_readonly("percent_of_max", &FitStats::percent_of_max)
        .def_readonly("residual_sum", &FitStats::residual_sum);

    py::class_<MeasurementDataset>(m, "MeasurementDataset")
        .def(py::init([](const std::vector<std::pair<double, double>>& samples, TimeUnit unit) {
                 MeasurementDataset d;
                 for (const auto& [x, y] : samples) d.samples.push_back({x, y});
                 d.unit = unit;
                 return d;
             }),
             py::arg("samples"), py::arg("unit") = TimeUnit::ns)
        .def_property_readonly("samples",
                               [](const MeasurementDataset& d) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Sample& s : d.samples) out.emplace_back(s.x, s.y);
                                   return out;
                               })
        .def_readonly("unit", &MeasurementDataset::unit);

    m.def("eval_model", &eval_model, py::arg("model"), py::arg("x"));
    m.def(
        "fit_cubic",
        [](const MeasurementDataset& data) {
            const FitResult r = fit_cubic(data);
            return py::make_tuple(r.model, r.stats);
        },
        py::arg("data"));
    m.def("fit_error", &fit_error, py::arg("model"), py::arg("data"));

    py::class_<ModelRegistry>(m, "ModelRegistry")
        .def_static("reference_preset", &ModelRegistry::reference_preset)
        .def("model", &ModelRegistry::model, py::arg("category"))
        .def_property_readonly("unit", &ModelRegistry::unit);
    m.def("registry_load", &registry_load, py::arg("path"));
    m.def("registry_save", &registry_save, py::arg("registry"), py::arg("path"));

    py::class_<CryptoOp>(m, "CryptoOp")
        .def_readonly("kind", &CryptoOp::kind)
        .def_readonly("payload_bytes", &CryptoOp::payload_bytes)
        .def_readonly("algorithm", &CryptoOp::algorithm)
        .def_readonly("mode", &CryptoOp::mode)
        .def_readonly("key_bits", &CryptoOp::key_bits);
    m.def("make_op", &make_op, py::arg("kind"), py::arg("payload_bytes"),
          py::arg("algorithm") = std::nullopt, py::arg("mode") = std::nullopt,
          py::arg("key_bits") = std::nullopt);

    py::class_<ProtocolStep>(m, "ProtocolStep")
        .def_readonly("sender", &ProtocolStep::sender)
        .def_readonly("receiver", &ProtocolStep::receiver)
        .def_readonly("ops", &ProtocolStep::ops);

    py::class_<Protocol>(m, "Protocol")
        .def_readonly("id", &Protocol::id)
        .def_readonly("steps", &Protocol::steps)
        .def("op_count", &Protocol::op_count)
        .def("__eq__", [](const Protocol& a, const Protocol& b) { return a == b; })
        .def("__repr__", [](const Protocol& p) { return "Protocol(" + p.id + ")"; });

    m.def("parse_protocol", [](const std::string& text) { return parse_protocol(text); },
          py::arg("text"));
    m.def("parse_corpus", [](const std::string& text) { return parse_corpus(text); },
          py::arg("text"));
    m.def("serialize_protocol", &serialize_protocol, py::arg("protocol"));
    m.def("serialize_corpus", &serialize_corpus, py::arg("corpus"));

    py::class_<GenConfig>(m, "GenConfig")
        .def(py::init<>())
        .def_readwrite("steps_range", &GenConfig::steps_range)
        .def_readwrite("ops_per_step_range", &GenConfig::ops_per_step_range)
        .def_readwrite("payload_choices", &GenConfig::payload_choices)
        .def_readwrite("symmetric_keys", &GenConfig::symmetric_keys)
        .def_readwrite("asymmetric_keys", &GenConfig::asymmetric_keys)
        .def_readwrite("kind_weights", &GenConfig::kind_weights)
        .def_readwrite("principals", &GenConfig::principals);

    m.def("generate_corpus", &generate_corpus, py::arg("seed"), py::arg("n"),
          py::arg("config") = GenConfig{});
    m.def("all_ordered_pairs", py::overload_cast<std::size_t>(&all_ordered_pairs),
          py::arg("corpus_size"));
    m.def("all_ordered_pairs",
          py::overload_cast<const std::vector<Protocol>&>(&all_ordered_pairs),
          py::arg("corpus"));
    m.def("write_corpus_with_sidecar", &write_corpus_with_sidecar, py::arg("path"),
          py::arg("corpus"), py::arg("seed"), py::arg("config") = GenConfig{});
    m.attr("GENERATOR_ALGORITHM_ID") = std::string(kGeneratorAlgorithmId);

    py::class_<ComparisonVerdict>(m, "ComparisonVerdict")
        .def_readonly("p_id", &ComparisonVerdict::p_id)
        .def_readonly("q_id", &ComparisonVerdict::q_id)
        .def_readonly("est_p", &ComparisonVerdict::est_p)
        .def_readonly("est_q", &ComparisonVerdict::est_q)
        .def_readonly("est_ratio", &ComparisonVerdict::est_ratio)
        .def_readonly("predicted_faster", &ComparisonVerdict::predicted_faster)
        .def_readonly("meas_p_ns", &ComparisonVerdict::meas_p_ns)
        .def_readonly("meas_q_ns", &ComparisonVerdict::meas_q_ns)
        .def_readonly("meas_ratio", &ComparisonVerdict::meas_ratio)
        .def_readonly("agree", &ComparisonVerdict::agree);

    m.def("estimate_op", &estimate_op, py::arg("op"), py::arg("registry"));
    m.def("estimate_protocol", &estimate_protocol, py::arg("protocol"), py::arg("registry"));
    m.def("compare_protocols", &compare_protocols, py::arg("p"), py::arg("q"),
          py::arg("registry"), py::arg("tie_epsilon") = kDefaultTieEpsilon);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("sizes", &SweepConfig::sizes)
        .def_readwrite("repetitions", &SweepConfig::repetitions)
        .def_readwrite("warmup", &SweepConfig::warmup)
        .def_readwrite("batching", &SweepConfig::batching)
        .def_readwrite("batch_threshold_ticks", &SweepConfig::batch_threshold_ticks);

    py::class_<PrimitiveSpec>(m, "PrimitiveSpec")
        .def(py::init([](Category category, const std::string& algorithm,
                         std::optional<BlockMode> mode, unsigned key_bits) {
                 PrimitiveSpec spec{category, algorithm, mode, key_bits};
                 validate_spec_shape(spec);
                 return spec;
             }),
             py::arg("category"), py::arg("algorithm"), py::arg("mode") = std::nullopt,
             py::arg("key_bits") = 0)
        .def_readonly("category", &PrimitiveSpec::category)
        .def_readonly("algorithm", &PrimitiveSpec::algorithm)
        .def_readonly("mode", &PrimitiveSpec::mode)
        .def_readonly("key_bits", &PrimitiveSpec::key_bits);

    py::class_<CryptoBackend>(m, "CryptoBackend")
        .def_property_readonly("id", &CryptoBackend::id)
        .def("self_test", &CryptoBackend::self_test);
    m.def("make_backend", &make_backend, py::arg("backend_id"));

    py::class_<TimingResult>(m, "TimingResult")
        .def_readonly("elapsed_ns", &TimingResult::elapsed_ns)
        .def_readonly("dispersion_ns", &TimingResult::dispersion_ns)
        .def_readonly("batch", &TimingResult::batch)
        .def_readonly("per_rep", &TimingResult::per_rep);

    m.def("clock_resolution_ns", &clock_resolution_ns);
    m.def("time_primitive", &time_primitive, py::arg("backend"), py::arg("spec"),
          py::arg("size"), py::arg("config") = SweepConfig{});
    m.def("sweep", &sweep, py::arg("backend"), py::arg("spec"),
          py::arg("config") = SweepConfig{});
    m.def("measure_protocol_ns", &measure_protocol_ns, py::arg("protocol"), py::arg("backend"),
          py::arg("config") = SweepConfig{});

    py::class_<ValidationSummary>(m, "ValidationSummary")
        .def_readonly("agreement_rate", &ValidationSummary::agreement_rate)
        .def_readonly("mean_abs_ratio_deviation_pct",
                      &ValidationSummary::mean_abs_ratio_deviation_pct)
        .def_readonly("pairs_total", &ValidationSummary::pairs_total)
        .def_readonly("pairs_retained", &ValidationSummary::pairs_retained)
        .def_readonly("min_sep_pct", &ValidationSummary::min_sep_pct)
        .def_readonly("environment", &ValidationSummary::environment);

    py::class_<PairRecord>(m, "PairRecord")
        .def_readonly("verdict", &PairRecord::verdict)
        .def_readonly("measured_separation_pct", &PairRecord::measured_separation_pct)
        .def_readonly("retained", &PairRecord::retained);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("pair_records", &ValidationReport::pair_records)
        .def_readonly("summary", &ValidationReport::summary);

    m.def("run_validation", &run_validation, py::arg("corpus"), py::arg("registry"),
          py::arg("backend"), py::arg("config"), py::arg("min_sep_pct"));
    m.def("size_sweep_error", &size_sweep_error, py::arg("payload_sizes"), py::arg("seed"),
          py::arg("n"), py::arg("template_config"), py::arg("registry"), py::arg("backend"),
          py::arg("config"), py::arg("min_sep_pct"));
}
