#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sisa/analytics.hpp"
#include "sisa/dataset.hpp"
#include "sisa/errors.hpp"
#include "sisa/montecarlo.hpp"
#include "sisa/orchestrator.hpp"
#include "sisa/partition.hpp"

namespace py = pybind11;

namespace {

sisa::ArchSpec make_arch(const std::string& name, int hidden) {
    sisa::ArchSpec arch;
    if (name == "logistic") {
        arch.arch = sisa::Arch::Logistic;
        arch.hidden_width = 0;
    } else if (name == "mlp") {
        arch.arch = sisa::Arch::Mlp;
        arch.hidden_width = hidden;
    } else {
        throw sisa::ArgumentError("unknown arch '" + name + "' (expected logistic or mlp)");
    }
    return arch;
}

py::dict report_dict(const sisa::CostReport& r) {
    py::dict d;
    d["expected_cost"] = r.expected_cost;
    d["baseline_cost"] = r.baseline_cost;
    d["speedup"] = r.speedup;
    d["regime_small_k"] = r.regime_small_k;
    return d;
}

py::dict summary_dict(const sisa::SimSummary& s) {
    py::dict d;
    d["trials"] = s.trials;
    d["mean_cost"] = s.mean_cost;
    d["variance"] = s.variance;
    py::list curve;
    for (const sisa::CurvePoint& p : s.curve) {
        py::dict row;
        row["K"] = p.K;
        row["mean_cost"] = p.mean_cost;
        row["variance"] = p.variance;
        row["speedup"] = p.speedup;
        row["trials"] = p.trials;
        curve.append(row);
    }
    d["curve"] = curve;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "sharded training with exact unlearning";

    py::register_exception<sisa::Error>(m, "SisaError", PyExc_RuntimeError);

    py::class_<sisa::DataPoint>(m, "DataPoint")
        .def_readonly("id", &sisa::DataPoint::id)
        .def_readonly("features", &sisa::DataPoint::features)
        .def_readonly("label", &sisa::DataPoint::label)
        .def_readonly("erase_prob", &sisa::DataPoint::erase_prob);

    py::class_<sisa::Dataset>(m, "Dataset")
        .def(py::init<std::vector<sisa::DataPoint>, int, int>(), py::arg("points"),
             py::arg("feature_dim"), py::arg("num_classes"))
        .def("__len__", &sisa::Dataset::size)
        .def_property_readonly("feature_dim", &sisa::Dataset::feature_dim)
        .def_property_readonly("num_classes", &sisa::Dataset::num_classes)
        .def("point", &sisa::Dataset::at, py::arg("index"),
             py::return_value_policy::reference_internal)
        .def("by_id", &sisa::Dataset::by_id, py::arg("id"),
             py::return_value_policy::reference_internal)
        .def("contains", &sisa::Dataset::contains, py::arg("id"));

    m.def("gen_synthetic", &sisa::gen_synthetic, py::arg("num_points"), py::arg("feature_dim"),
          py::arg("num_classes"), py::arg("seed"));
    m.def("load_csv", &sisa::load_csv, py::arg("path"));
    m.def("save_csv", &sisa::save_csv, py::arg("dataset"), py::arg("path"));
    m.def(
        "assign_probs",
        [](const sisa::Dataset& data, const std::vector<std::pair<double, double>>& groups,
           std::uint64_t seed) {
            sisa::ScenarioConfig scenario;
            scenario.seed = seed;
            for (auto [fraction, prob] : groups) scenario.groups.push_back({fraction, prob});
            return sisa::assign_probs(data, scenario);
        },
        py::arg("dataset"), py::arg("groups"), py::arg("seed"),
        "Stamp erasure probabilities; groups is a list of (fraction, probability) pairs.");
    m.def("split_train_test", &sisa::split_train_test, py::arg("dataset"),
          py::arg("test_fraction"), py::arg("seed"));

    py::class_<sisa::PartitionPlan>(m, "PartitionPlan")
        .def_property_readonly("num_shards", &sisa::PartitionPlan::num_shards)
        .def_property_readonly("num_slices", &sisa::PartitionPlan::num_slices)
        .def_property_readonly("num_points", &sisa::PartitionPlan::num_points)
        .def("shard_sizes", &sisa::PartitionPlan::shard_sizes)
        .def("slice_sizes", &sisa::PartitionPlan::slice_sizes, py::arg("shard"))
        .def("locate", &sisa::PartitionPlan::locate, py::arg("id"))
        .def("contains", &sisa::PartitionPlan::contains, py::arg("id"))
        .def("to_json", &sisa::PartitionPlan::to_json)
        .def_static("from_json", &sisa::PartitionPlan::from_json, py::arg("text"));

    m.def("uniform_partition", &sisa::uniform_partition, py::arg("dataset"),
          py::arg("num_shards"), py::arg("num_slices"), py::arg("seed"));
    m.def(
        "distribution_aware_shard",
        [](const sisa::Dataset& data, double cap, int num_slices) {
            return sisa::distribution_aware_shard(data, sisa::ShardBudget{cap}, num_slices);
        },
        py::arg("dataset"), py::arg("cap"), py::arg("num_slices") = 1);

    py::class_<sisa::SisaModel>(m, "Model")
        .def_property_readonly("num_shards", &sisa::SisaModel::num_shards)
        .def_property_readonly("num_slices", &sisa::SisaModel::num_slices)
        .def_property_readonly("aggregation",
                               [](const sisa::SisaModel& m_) { return to_string(m_.aggregation); })
        .def_property_readonly(
            "plan", [](const sisa::SisaModel& m_) { return m_.plan; },
            py::return_value_policy::reference_internal);

    m.def(
        "train",
        [](const sisa::Dataset& data, const sisa::PartitionPlan& plan, const std::string& arch,
           int hidden, int epochs, double lr, int batch, std::uint64_t seed,
           const std::string& aggregation, int workers) {
            sisa::TrainConfig cfg{epochs, lr, batch, seed};
            return sisa::sisa_train(data, plan, make_arch(arch, hidden), cfg,
                                    sisa::aggregation_from_string(aggregation), workers);
        },
        py::arg("dataset"), py::arg("plan"), py::arg("arch") = "logistic",
        py::arg("hidden") = 16, py::arg("epochs") = 10, py::arg("lr") = 0.1,
        py::arg("batch") = 32, py::arg("seed") = 1, py::arg("aggregation") = "majority",
        py::arg("workers") = 1);

    m.def(
        "predict",
        [](const sisa::SisaModel& model, const std::vector<double>& features) {
            sisa::Prediction p = sisa::aggregate_predict(model, features);
            return py::make_tuple(p.label, p.probs);
        },
        py::arg("model"), py::arg("features"),
        "Aggregated prediction: (label, class probability vector).");
    m.def("evaluate", &sisa::evaluate, py::arg("model"), py::arg("test"));

    m.def(
        "unlearn",
        [](sisa::SisaModel& model, const std::vector<std::int64_t>& ids, const std::string& mode,
           int workers) {
            sisa::RequestStream stream{ids, sisa::request_mode_from_string(mode)};
            sisa::CostLedger ledger = sisa::unlearn(model, stream, workers);
            py::dict d;
            py::list entries;
            for (const sisa::LedgerEntry& e : ledger.entries) {
                py::dict row;
                row["event"] = e.event;
                row["shard"] = e.shard;
                row["restart_slice"] = e.restart_slice;
                row["samples_retrained"] = e.samples_retrained;
                entries.append(row);
            }
            d["entries"] = entries;
            d["num_events"] = ledger.num_events;
            d["total_samples"] = ledger.total_samples;
            d["csv"] = ledger.to_csv();
            return d;
        },
        py::arg("model"), py::arg("ids"), py::arg("mode") = "sequential", py::arg("workers") = 1,
        "Remove points and retrain affected shards from their last clean checkpoints.");

    m.def("save_model", &sisa::save_model, py::arg("model"), py::arg("dir"));
    m.def("load_model", &sisa::load_model, py::arg("dir"), py::arg("dataset"));

    m.def("shard_seq_cost", &sisa::shard_seq_cost, py::arg("N"), py::arg("S"), py::arg("K"));
    m.def("shard_batch_cost", &sisa::shard_batch_cost, py::arg("N"), py::arg("S"), py::arg("K"));
    m.def("slice_seq_cost", &sisa::slice_seq_cost, py::arg("base_epochs"), py::arg("D"),
          py::arg("R"));
    m.def("slice_batch_cost", &sisa::slice_batch_cost, py::arg("base_epochs"), py::arg("D"),
          py::arg("R"), py::arg("K"));
    m.def(
        "combined_report",
        [](std::uint64_t N, int S, int R, std::uint64_t K, int epochs, const std::string& mode) {
            sisa::CostMode m_ = mode == "sequential" ? sisa::CostMode::Sequential
                              : mode == "batch"
                                  ? sisa::CostMode::Batch
                                  : throw sisa::ArgumentError("unknown mode '" + mode + "'");
            return report_dict(sisa::combined_report({N, S, R, K, epochs}, m_));
        },
        py::arg("N"), py::arg("S"), py::arg("R"), py::arg("K"), py::arg("epochs") = 10,
        py::arg("mode") = "batch");

    m.def(
        "simulate",
        [](std::uint64_t N, int S, int R, std::uint64_t K, int epochs, const std::string& mode,
           std::uint64_t trials, std::uint64_t seed) {
            return summary_dict(sisa::simulate({N, S, R, K, epochs},
                                               sisa::request_mode_from_string(mode), trials,
                                               seed));
        },
        py::arg("N"), py::arg("S"), py::arg("R"), py::arg("K"), py::arg("epochs") = 10,
        py::arg("mode") = "batch", py::arg("trials") = 100, py::arg("seed") = 1);

    m.def(
        "validate_formulas",
        [](std::uint64_t seed) {
            std::vector<sisa::ValidationRow> rows = sisa::default_validation_grid();
            sisa::validate_formulas(rows, seed);
            py::list out;
            for (const sisa::ValidationRow& r : rows) {
                py::dict row;
                row["formula"] = r.formula;
                row["analytic"] = r.analytic;
                row["simulated"] = r.simulated;
                row["rel_error"] = r.rel_error;
                row["tolerance"] = r.tolerance;
                row["pass"] = r.pass;
                out.append(row);
            }
            return out;
        },
        py::arg("seed") = 1,
        "Run the default analytic-vs-simulated validation grid; one dict per row.");
}
