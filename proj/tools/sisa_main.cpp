#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sisa/analytics.hpp"
#include "sisa/dataset.hpp"
#include "sisa/errors.hpp"
#include "sisa/montecarlo.hpp"
#include "sisa/orchestrator.hpp"
#include "sisa/partition.hpp"

namespace {

struct UsageError {
    std::string msg;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sisa::NotFoundError("cannot open '" + path + "'");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw sisa::IntegrityError("cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw sisa::IntegrityError("write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError{"cannot parse " + what + " '" + s + "'"};
    }
}

std::int64_t parse_id(const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError{"cannot parse point id '" + s + "'"};
    return v;
}

sisa::ScenarioConfig parse_scenario(const std::string& text, std::uint64_t seed) {
    sisa::ScenarioConfig scenario;
    scenario.seed = seed;
    for (const std::string& part : split(text, ',')) {
        if (part.empty()) continue;
        std::vector<std::string> kv = split(part, ':');
        if (kv.size() != 2) throw UsageError{"scenario groups look like fraction:probability"};
        scenario.groups.push_back(
            {parse_real(kv[0], "group fraction"), parse_real(kv[1], "group probability")});
    }
    if (scenario.groups.empty()) throw UsageError{"scenario has no groups"};
    return scenario;
}

std::vector<std::int64_t> parse_requests(const std::string& inline_list,
                                         const std::string& file_path) {
    if (inline_list.empty() == file_path.empty())
        throw UsageError{"give exactly one of --requests or --requests-file"};
    std::vector<std::int64_t> ids;
    if (!inline_list.empty()) {
        for (const std::string& part : split(inline_list, ','))
            if (!part.empty()) ids.push_back(parse_id(part));
    } else {
        std::string text = read_file(file_path);
        std::string token;
        for (char c : text) {
            if (c == ',' || c == '\n' || c == '\r' || c == ' ' || c == '\t') {
                if (!token.empty()) ids.push_back(parse_id(token));
                token.clear();
            } else {
                token += c;
            }
        }
        if (!token.empty()) ids.push_back(parse_id(token));
    }
    if (ids.empty()) throw UsageError{"no unlearning requests given"};
    return ids;
}

sisa::ArchSpec make_arch(const std::string& name, int hidden) {
    sisa::ArchSpec arch;
    if (name == "logistic") {
        arch.arch = sisa::Arch::Logistic;
        arch.hidden_width = 0;
    } else if (name == "mlp") {
        arch.arch = sisa::Arch::Mlp;
        arch.hidden_width = hidden;
    } else {
        throw UsageError{"unknown arch '" + name + "' (expected logistic or mlp)"};
    }
    return arch;
}

sisa::Aggregation parse_aggregation(const std::string& name) {
    try {
        return sisa::aggregation_from_string(name);
    } catch (const sisa::ArgumentError& e) {
        throw UsageError{e.what()};
    }
}

sisa::RequestMode parse_request_mode(const std::string& name) {
    try {
        return sisa::request_mode_from_string(name);
    } catch (const sisa::ArgumentError& e) {
        throw UsageError{e.what()};
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void append_report_row(std::string& csv, const std::string& formula,
                       const sisa::ExperimentParams& p, const std::string& mode, double cost,
                       double baseline, double speedup) {
    csv += formula;
    csv += ',';
    csv += std::to_string(p.N);
    csv += ',';
    csv += std::to_string(p.S);
    csv += ',';
    csv += std::to_string(p.R);
    csv += ',';
    csv += std::to_string(p.K);
    csv += ',';
    csv += std::to_string(p.base_epochs);
    csv += ',';
    csv += mode;
    csv += ',';
    csv += fmt(cost);
    csv += ',';
    csv += fmt(baseline);
    csv += ',';
    csv += fmt(speedup);
    csv += '\n';
}

// CLI11 only processes config files attached to the root command, so drain a
// subcommand's --config by hand. File values fill options the command line
// left empty; explicit flags always win.
void apply_config_defaults(CLI::App& cmd) {
    CLI::Option* copt = cmd.get_config_ptr();
    if (copt == nullptr || copt->count() == 0) return;
    std::vector<CLI::ConfigItem> items;
    try {
        items = cmd.get_config_formatter()->from_file(copt->as<std::string>());
    } catch (const CLI::FileError& e) {
        throw UsageError{e.what()};
    }
    for (const CLI::ConfigItem& item : items) {
        if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;
        CLI::Option* op = cmd.get_option_no_throw("--" + item.name);
        if (op == nullptr || op == copt || !op->empty()) continue;
        for (const std::string& input : item.inputs) op->add_result(input);
        try {
            op->run_callback();
        } catch (const CLI::ParseError& e) {
            throw UsageError{item.name + ": " + e.what()};
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharded training with exact unlearning: data, plans, models, cost reports"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic blob dataset as CSV");
    gen->set_config("--config", "", "defaults file (key = value lines)");
    std::uint64_t gen_n = 1000, gen_seed = 1, gen_scen_seed = 0;
    int gen_dim = 10, gen_classes = 4;
    std::string gen_out, gen_scenario;
    gen->add_option("--n", gen_n, "number of points")->capture_default_str();
    gen->add_option("--dim", gen_dim, "feature dimension")->capture_default_str();
    gen->add_option("--classes", gen_classes, "number of classes")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--scenario", gen_scenario,
                    "erasure probability groups, fraction:probability[,...]");
    gen->add_option("--scenario-seed", gen_scen_seed,
                    "seed for scenario group assignment (default: --seed)");
    gen->add_option("--out", gen_out, "output CSV path")->required();

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "partition a dataset into shards and slices");
    plan_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::string plan_data, plan_kind = "uniform", plan_out;
    int plan_s = 20, plan_r = 1;
    double plan_cap = 1.0;
    std::uint64_t plan_seed = 1;
    plan_cmd->add_option("--data", plan_data, "dataset CSV")->required();
    plan_cmd->add_option("--kind", plan_kind, "uniform | aware")->capture_default_str();
    plan_cmd->add_option("--S", plan_s, "shard count (uniform)")->capture_default_str();
    plan_cmd->add_option("--R", plan_r, "slices per shard")->capture_default_str();
    plan_cmd->add_option("--cap", plan_cap, "expected-request budget per shard (aware)")
        ->capture_default_str();
    plan_cmd->add_option("--seed", plan_seed, "shuffle seed")->capture_default_str();
    plan_cmd->add_option("--out", plan_out, "output plan JSON path")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train one constituent per shard");
    train_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::string tr_data, tr_plan, tr_arch = "logistic", tr_agg = "majority", tr_dir;
    int tr_hidden = 16, tr_epochs = 10, tr_batch = 32, tr_workers = 1;
    double tr_lr = 0.1;
    std::uint64_t tr_seed = 1;
    train_cmd->add_option("--data", tr_data, "dataset CSV")->required();
    train_cmd->add_option("--plan", tr_plan, "plan JSON")->required();
    train_cmd->add_option("--arch", tr_arch, "logistic | mlp")->capture_default_str();
    train_cmd->add_option("--hidden", tr_hidden, "hidden width (mlp)")->capture_default_str();
    train_cmd->add_option("--epochs", tr_epochs, "base epochs e'")->capture_default_str();
    train_cmd->add_option("--lr", tr_lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--batch", tr_batch, "batch size")->capture_default_str();
    train_cmd->add_option("--seed", tr_seed, "training seed")->capture_default_str();
    train_cmd->add_option("--agg", tr_agg, "majority | mean")->capture_default_str();
    train_cmd->add_option("--workers", tr_workers, "shard-parallel threads")
        ->capture_default_str();
    train_cmd->add_option("--model-dir", tr_dir, "output model directory")->required();

    // unlearn
    auto* un_cmd = app.add_subcommand("unlearn", "remove points and retrain from checkpoints");
    un_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::string un_data, un_dir, un_requests, un_requests_file, un_mode = "sequential",
                         un_ledger;
    int un_workers = 1;
    un_cmd->add_option("--data", un_data, "dataset CSV the model was trained from")->required();
    un_cmd->add_option("--model-dir", un_dir, "model directory (updated in place)")->required();
    un_cmd->add_option("--requests", un_requests, "comma-separated point ids");
    un_cmd->add_option("--requests-file", un_requests_file, "file of point ids");
    un_cmd->add_option("--mode", un_mode, "sequential | batch")->capture_default_str();
    un_cmd->add_option("--workers", un_workers, "shard-parallel threads")->capture_default_str();
    un_cmd->add_option("--ledger", un_ledger, "ledger CSV path (default <model-dir>/ledger.csv)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "accuracy of the aggregated model on a test CSV");
    eval_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::string ev_data, ev_test, ev_dir, ev_out;
    eval_cmd->add_option("--data", ev_data, "dataset CSV the model was trained from")->required();
    eval_cmd->add_option("--test", ev_test, "test CSV")->required();
    eval_cmd->add_option("--model-dir", ev_dir, "model directory")->required();
    eval_cmd->add_option("--out", ev_out, "evaluation JSON path")->required();

    // analyze
    auto* an_cmd = app.add_subcommand("analyze", "closed-form expected retraining costs");
    an_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::uint64_t an_n = 10000, an_k = 1;
    int an_s = 20, an_r = 1, an_epochs = 10;
    std::string an_mode = "batch", an_out;
    an_cmd->add_option("--N", an_n, "dataset size")->capture_default_str();
    an_cmd->add_option("--S", an_s, "shard count")->capture_default_str();
    an_cmd->add_option("--R", an_r, "slices per shard")->capture_default_str();
    an_cmd->add_option("--K", an_k, "unlearning requests")->capture_default_str();
    an_cmd->add_option("--epochs", an_epochs, "base epochs e'")->capture_default_str();
    an_cmd->add_option("--mode", an_mode, "sequential | batch")->capture_default_str();
    an_cmd->add_option("--out", an_out, "report CSV path");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo cost simulation");
    sim_cmd->set_config("--config", "", "defaults file (key = value lines)");
    std::uint64_t sim_n = 10000, sim_k = 1, sim_trials = 100, sim_seed = 1;
    int sim_s = 20, sim_r = 1, sim_epochs = 10;
    std::string sim_mode = "batch", sim_out, sim_ks;
    bool sim_validate = false;
    std::string sc_data, sc_kind = "uniform";
    double sc_cap = 1.0;
    int sc_uniform_s = 20, sc_horizon = 10;
    sim_cmd->add_flag("--validate", sim_validate,
                      "check every closed form against the simulator on the default grid");
    sim_cmd->add_option("--N", sim_n, "dataset size")->capture_default_str();
    sim_cmd->add_option("--S", sim_s, "shard count")->capture_default_str();
    sim_cmd->add_option("--R", sim_r, "slices per shard")->capture_default_str();
    sim_cmd->add_option("--K", sim_k, "unlearning requests")->capture_default_str();
    sim_cmd->add_option("--ks", sim_ks, "comma-separated K values for a cost curve");
    sim_cmd->add_option("--epochs", sim_epochs, "base epochs e'")->capture_default_str();
    sim_cmd->add_option("--mode", sim_mode, "sequential | batch")->capture_default_str();
    sim_cmd->add_option("--trials", sim_trials, "trials per point")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "simulation seed")->capture_default_str();
    sim_cmd->add_option("--scenario-data", sc_data,
                        "dataset CSV with erasure probabilities: price request streams on a real plan");
    sim_cmd->add_option("--plan-kind", sc_kind, "uniform | aware (scenario)")
        ->capture_default_str();
    sim_cmd->add_option("--cap", sc_cap, "expected-request budget per shard (scenario, aware)")
        ->capture_default_str();
    sim_cmd->add_option("--uniform-S", sc_uniform_s, "shard count (scenario, uniform)")
        ->capture_default_str();
    sim_cmd->add_option("--horizon", sc_horizon, "requests priced per trial (scenario)")
        ->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "output CSV path");

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : app.get_subcommands()) apply_config_defaults(*sub);

        if (gen->parsed()) {
            sisa::Dataset data = sisa::gen_synthetic(gen_n, gen_dim, gen_classes, gen_seed);
            if (!gen_scenario.empty()) {
                std::uint64_t s =
                    gen->count("--scenario-seed") > 0 ? gen_scen_seed : gen_seed;
                data = sisa::assign_probs(data, parse_scenario(gen_scenario, s));
            }
            sisa::save_csv(data, gen_out);
            std::cout << "wrote " << data.size() << " points to " << gen_out << "\n";
            return 0;
        }

        if (plan_cmd->parsed()) {
            sisa::Dataset data = sisa::load_csv(plan_data);
            sisa::PartitionPlan plan =
                plan_kind == "uniform"
                    ? sisa::uniform_partition(data, plan_s, plan_r, plan_seed)
                : plan_kind == "aware"
                    ? sisa::distribution_aware_shard(data, sisa::ShardBudget{plan_cap}, plan_r)
                    : throw UsageError{"unknown plan kind '" + plan_kind +
                                       "' (expected uniform or aware)"};
            write_file(plan_out, plan.to_json());
            std::cout << "planned " << plan.num_shards() << " shards x " << plan.num_slices()
                      << " slices into " << plan_out << "\n";
            return 0;
        }

        if (train_cmd->parsed()) {
            sisa::ArchSpec arch = make_arch(tr_arch, tr_hidden);
            sisa::Aggregation agg = parse_aggregation(tr_agg);
            sisa::Dataset data = sisa::load_csv(tr_data);
            sisa::PartitionPlan plan = sisa::PartitionPlan::from_json(read_file(tr_plan));
            sisa::TrainConfig cfg{tr_epochs, tr_lr, tr_batch, tr_seed};
            sisa::SisaModel model = sisa::sisa_train(data, plan, arch, cfg, agg, tr_workers);
            sisa::save_model(model, tr_dir);
            std::uint64_t samples = 0;
            for (int k = 0; k < model.num_shards(); ++k)
                samples += model.serving(k).samples_seen;
            std::cout << "trained " << model.num_shards() << " constituents ("
                      << model.num_slices() << " slices, " << samples << " samples) into "
                      << tr_dir << "\n";
            return 0;
        }

        if (un_cmd->parsed()) {
            sisa::RequestMode mode = parse_request_mode(un_mode);
            std::vector<std::int64_t> ids = parse_requests(un_requests, un_requests_file);
            sisa::Dataset data = sisa::load_csv(un_data);
            sisa::SisaModel model = sisa::load_model(un_dir, data);
            sisa::RequestStream stream{ids, mode};
            sisa::CostLedger ledger = sisa::unlearn(model, stream, un_workers);
            sisa::save_model(model, un_dir);
            std::string ledger_path = un_ledger.empty() ? un_dir + "/ledger.csv" : un_ledger;
            write_file(ledger_path, ledger.to_csv());
            std::cout << "unlearned " << ids.size() << " points in " << ledger.num_events
                      << " events, retrained " << ledger.total_samples << " samples; ledger in "
                      << ledger_path << "\n";
            return 0;
        }

        if (eval_cmd->parsed()) {
            sisa::Dataset data = sisa::load_csv(ev_data);
            sisa::Dataset test = sisa::load_csv(ev_test);
            sisa::SisaModel model = sisa::load_model(ev_dir, data);

            std::vector<std::uint64_t> per_class_total(
                static_cast<std::size_t>(test.num_classes()), 0);
            std::vector<std::uint64_t> per_class_correct(
                static_cast<std::size_t>(test.num_classes()), 0);
            std::uint64_t correct = 0;
            if (test.size() == 0) throw sisa::ArgumentError("empty test set");
            for (const sisa::DataPoint& p : test.points()) {
                int predicted = sisa::aggregate_predict(model, p.features).label;
                ++per_class_total[static_cast<std::size_t>(p.label)];
                if (predicted == p.label) {
                    ++correct;
                    ++per_class_correct[static_cast<std::size_t>(p.label)];
                }
            }
            double accuracy = static_cast<double>(correct) / static_cast<double>(test.size());

            nlohmann::ordered_json j;
            j["accuracy"] = accuracy;
            nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < per_class_total.size(); ++c) {
                if (per_class_total[c] == 0)
                    per_class.push_back(nullptr);
                else
                    per_class.push_back(static_cast<double>(per_class_correct[c]) /
                                        static_cast<double>(per_class_total[c]));
            }
            j["per_class_accuracy"] = per_class;
            j["S"] = model.num_shards();
            j["R"] = model.num_slices();
            j["aggregation"] = sisa::to_string(model.aggregation);
            write_file(ev_out, j.dump(2) + "\n");
            std::cout << "accuracy " << fmt(accuracy) << " over " << test.size()
                      << " test points; report in " << ev_out << "\n";
            return 0;
        }

        if (an_cmd->parsed()) {
            sisa::ExperimentParams params{an_n, an_s, an_r, an_k, an_epochs};
            sisa::CostMode mode = an_mode == "sequential" ? sisa::CostMode::Sequential
                                : an_mode == "batch"
                                    ? sisa::CostMode::Batch
                                    : throw UsageError{"unknown mode '" + an_mode + "'"};
            sisa::CostReport report = sisa::combined_report(params, mode);

            double N = static_cast<double>(an_n), S = an_s, R = an_r,
                   K = static_cast<double>(an_k), e = an_epochs;
            double D = N / S;
            std::string csv =
                "formula,N,S,R,K,base_epochs,mode,expected_cost,baseline_cost,speedup\n";
            double seq_base = e * (N * K - K * (K + 1.0) / 2.0);
            double batch_base = e * (N - K);
            double c_shard_seq = e * sisa::shard_seq_cost(N, S, K);
            append_report_row(csv, "shard_seq", params, "sequential", c_shard_seq, seq_base,
                              seq_base / c_shard_seq);
            double c_shard_batch = e * sisa::shard_batch_cost(N, S, K);
            append_report_row(csv, "shard_batch", params, "batch", c_shard_batch, batch_base,
                              batch_base / c_shard_batch);
            double c_slice_seq = sisa::slice_seq_cost(e, D, R);
            append_report_row(csv, "slice_seq", params, "sequential", c_slice_seq, e * D,
                              e * D / c_slice_seq);
            double c_slice_batch = sisa::slice_batch_cost(e, D, R, K);
            append_report_row(csv, "slice_batch", params, "batch", c_slice_batch, e * D,
                              e * D / c_slice_batch);
            double c_lone_seq = e * sisa::lone_shard_seq_cost(N, S, K);
            append_report_row(csv, "lone_seq", params, "sequential", c_lone_seq, seq_base,
                              c_lone_seq > 0.0 ? seq_base / c_lone_seq : 0.0);
            double c_lone_batch = e * sisa::lone_shard_batch_cost(N, S, K);
            append_report_row(csv, "lone_batch", params, "batch", c_lone_batch, batch_base,
                              batch_base / c_lone_batch);
            append_report_row(csv, "combined", params, an_mode, report.expected_cost,
                              report.baseline_cost, report.speedup);
            if (!an_out.empty()) write_file(an_out, csv);

            std::cout << "combined " << an_mode << ": expected " << fmt(report.expected_cost)
                      << " samples, baseline " << fmt(report.baseline_cost) << ", speedup "
                      << fmt(report.speedup)
                      << (report.regime_small_k ? " (K < 3S)" : " (K >= 3S)") << "\n";
            return 0;
        }

        if (sim_cmd->parsed()) {
            if (sim_validate) {
                std::vector<sisa::ValidationRow> rows = sisa::default_validation_grid();
                sisa::validate_formulas(rows, sim_seed);
                std::cout << sisa::validation_table(rows);
                if (!sim_out.empty()) write_file(sim_out, sisa::validation_csv(rows));
                if (!sisa::all_pass(rows)) {
                    std::cerr << "error: some formulas disagree with the simulation\n";
                    return 2;
                }
                return 0;
            }
            if (!sc_data.empty()) {
                sisa::Dataset data = sisa::load_csv(sc_data);
                sisa::ScenarioPlanSpec spec;
                spec.kind = sc_kind == "uniform" ? sisa::PlanKind::Uniform
                          : sc_kind == "aware"
                              ? sisa::PlanKind::DistributionAware
                              : throw UsageError{"unknown plan kind '" + sc_kind + "'"};
                spec.budget = sisa::ShardBudget{sc_cap};
                spec.uniform_shards = sc_uniform_s;
                spec.num_slices = sim_r;
                spec.base_epochs = sim_epochs;
                sisa::SimSummary summary =
                    sisa::simulate_scenario(data, spec, sc_horizon, sim_trials, sim_seed);
                if (!sim_out.empty()) write_file(sim_out, sisa::curve_csv(summary));
                std::cout << "scenario " << sc_kind << ": mean cost "
                          << fmt(summary.mean_cost) << " samples over " << summary.trials
                          << " trials (horizon " << sc_horizon << ")\n";
                return 0;
            }
            sisa::ExperimentParams params{sim_n, sim_s, sim_r, sim_k, sim_epochs};
            sisa::RequestMode mode = parse_request_mode(sim_mode);
            sisa::SimSummary summary;
            if (!sim_ks.empty()) {
                std::vector<std::uint64_t> ks;
                for (const std::string& part : split(sim_ks, ','))
                    if (!part.empty())
                        ks.push_back(static_cast<std::uint64_t>(parse_id(part)));
                summary = sisa::simulate_curve(params, mode, ks, sim_trials, sim_seed);
            } else {
                summary = sisa::simulate(params, mode, sim_trials, sim_seed);
            }
            if (!sim_out.empty()) write_file(sim_out, sisa::curve_csv(summary));
            const sisa::CurvePoint& last = summary.curve.back();
            std::cout << "K=" << last.K << ": mean cost " << fmt(last.mean_cost)
                      << " samples, variance " << fmt(last.variance) << ", speedup "
                      << fmt(last.speedup) << " (" << summary.trials << " trials)\n";
            return 0;
        }

        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.msg << "\n";
        return 1;
    } catch (const sisa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
