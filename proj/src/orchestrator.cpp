#include "sisa/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "sisa/errors.hpp"
#include "sisa/rng.hpp"

namespace sisa {

namespace {

constexpr std::uint64_t kShardTag = 0x5348415244ULL; // "SHARD"

int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
    return best;
}

std::vector<const DataPoint*> gather(const Dataset& data, const std::vector<std::int64_t>& ids) {
    std::vector<const DataPoint*> out;
    out.reserve(ids.size());
    for (std::int64_t id : ids) out.push_back(&data.by_id(id));
    return out;
}

template <typename F>
auto tagged(int shard, F&& fn) -> decltype(fn()) {
    auto tag = [shard](const char* what) {
        return "shard " + std::to_string(shard) + ": " + what;
    };
    try {
        return fn();
    } catch (const NumericalError& e) {
        throw NumericalError(tag(e.what()));
    } catch (const NotFoundError& e) {
        throw NotFoundError(tag(e.what()));
    } catch (const ArgumentError& e) {
        throw ArgumentError(tag(e.what()));
    }
}

// Retrains shard k from its slice_after = `from` checkpoint through the final
// slice, replacing everything above `from` in the tower. Returns the samples
// consumed, which is also added to the tower's samples_seen chain.
std::uint64_t retrain_tail(SisaModel& model, int k, int from) {
    const int R = model.plan.num_slices();
    TrainConfig cfg = model.cfg;
    cfg.seed = shard_stream_seed(model.cfg.seed, k);
    auto& tower = model.constituents[static_cast<std::size_t>(k)];
    tower.resize(static_cast<std::size_t>(from) + 1);
    tower.reserve(static_cast<std::size_t>(R) + 1);
    std::uint64_t samples = 0;
    for (int s = from + 1; s <= R; ++s) {
        std::vector<const DataPoint*> pts = gather(model.data, model.plan.shard_prefix_ids(k, s));
        double epochs = model.schedule.epochs_per_slice[static_cast<std::size_t>(s - 1)];
        TrainResult res =
            train(tower.back().params, pts, epochs, cfg, static_cast<std::uint64_t>(s));
        Checkpoint next;
        next.shard = k;
        next.slice_after = s;
        next.params = std::move(res.params);
        next.samples_seen = tower.back().samples_seen + res.samples_processed;
        samples += res.samples_processed;
        tower.push_back(std::move(next));
    }
    return samples;
}

// Runs fn over the shard indices on up to `workers` threads; the failure with
// the lowest shard index is rethrown once every thread has joined.
void run_sharded(const std::vector<int>& shards, int workers, const std::function<void(int)>& fn) {
    if (workers < 1) throw ArgumentError("workers must be >= 1");
    if (workers == 1 || shards.size() < 2) {
        for (int k : shards) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(shards.size());
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= shards.size()) return;
            try {
                fn(shards[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), shards.size());
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

void validate_train_cfg(const TrainConfig& cfg) {
    if (cfg.base_epochs < 1) throw ArgumentError("base_epochs must be >= 1");
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
        throw ArgumentError("learning_rate must be positive and finite");
    if (cfg.batch_size < 1) throw ArgumentError("batch_size must be >= 1");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IntegrityError("cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IntegrityError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open '" + path + "'");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

std::string to_string(Aggregation a) {
    return a == Aggregation::MajorityLabel ? "majority" : "mean";
}

Aggregation aggregation_from_string(const std::string& s) {
    if (s == "majority") return Aggregation::MajorityLabel;
    if (s == "mean") return Aggregation::MeanVector;
    throw ArgumentError("unknown aggregation '" + s + "' (expected majority or mean)");
}

std::string to_string(RequestMode m) {
    return m == RequestMode::Sequential ? "sequential" : "batch";
}

RequestMode request_mode_from_string(const std::string& s) {
    if (s == "sequential") return RequestMode::Sequential;
    if (s == "batch") return RequestMode::Batch;
    throw ArgumentError("unknown mode '" + s + "' (expected sequential or batch)");
}

const Checkpoint& SisaModel::serving(int shard) const {
    if (shard < 0 || shard >= num_shards()) throw ArgumentError("shard index out of range");
    return constituents[static_cast<std::size_t>(shard)].back();
}

std::uint64_t shard_stream_seed(std::uint64_t base_seed, int shard) {
    std::uint64_t h = hash_fold(0x452821e638d01377ULL, base_seed);
    h = hash_fold(h, kShardTag);
    return hash_fold(h, static_cast<std::uint64_t>(shard));
}

SisaModel sisa_train(const Dataset& dataset, const PartitionPlan& plan, const ArchSpec& arch,
                     const TrainConfig& cfg, Aggregation aggregation, int workers) {
    validate_train_cfg(cfg);
    if (plan.num_points() != dataset.size())
        throw ArgumentError("plan holds " + std::to_string(plan.num_points()) +
                            " points, dataset has " + std::to_string(dataset.size()));
    for (int k = 0; k < plan.num_shards(); ++k)
        for (int r = 0; r < plan.num_slices(); ++r)
            for (std::int64_t id : plan.slice_ids(k, r))
                if (!dataset.contains(id))
                    throw ArgumentError("plan references id " + std::to_string(id) +
                                        " missing from the dataset");

    SisaModel model{plan,
                    arch,
                    cfg,
                    epoch_calibration(cfg.base_epochs, plan.num_slices()),
                    aggregation,
                    dataset,
                    {}};
    model.constituents.resize(static_cast<std::size_t>(plan.num_shards()));

    std::vector<int> shards(static_cast<std::size_t>(plan.num_shards()));
    for (std::size_t i = 0; i < shards.size(); ++i) shards[i] = static_cast<int>(i);
    run_sharded(shards, workers, [&](int k) {
        tagged(k, [&] {
            Checkpoint root;
            root.shard = k;
            root.slice_after = 0;
            root.params = init_params(arch, dataset.feature_dim(), dataset.num_classes(),
                                      shard_stream_seed(cfg.seed, k));
            root.samples_seen = 0;
            auto& tower = model.constituents[static_cast<std::size_t>(k)];
            tower.clear();
            tower.push_back(std::move(root));
            retrain_tail(model, k, 0);
            return 0;
        });
    });
    return model;
}

Prediction aggregate_predict(const SisaModel& model, const std::vector<double>& features) {
    if (static_cast<int>(features.size()) != model.data.feature_dim())
        throw ArgumentError("feature vector has length " + std::to_string(features.size()) +
                            ", model expects " + std::to_string(model.data.feature_dim()));
    const int S = model.num_shards();
    const int C = model.data.num_classes();
    Prediction out;
    out.probs.assign(static_cast<std::size_t>(C), 0.0);
    for (int k = 0; k < S; ++k) {
        if (model.plan.shard_size(k) == 0) {
            // An emptied shard abstains from voting and is uniform in the mean.
            if (model.aggregation == Aggregation::MeanVector)
                for (double& v : out.probs) v += 1.0 / C;
            continue;
        }
        std::vector<double> p = predict(model.serving(k).params, features);
        if (model.aggregation == Aggregation::MajorityLabel) {
            out.probs[static_cast<std::size_t>(argmax_lowest(p))] += 1.0;
        } else {
            for (int c = 0; c < C; ++c) out.probs[static_cast<std::size_t>(c)] += p[static_cast<std::size_t>(c)];
        }
    }
    for (double& v : out.probs) v /= S;
    out.label = argmax_lowest(out.probs);
    return out;
}

double evaluate(const SisaModel& model, const Dataset& test) {
    if (test.size() == 0) throw ArgumentError("empty test set");
    std::size_t correct = 0;
    for (const DataPoint& p : test.points())
        if (aggregate_predict(model, p.features).label == p.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

CostLedger unlearn(SisaModel& model, const RequestStream& stream, int workers) {
    std::unordered_set<std::int64_t> seen;
    for (std::int64_t id : stream.ids) {
        if (!seen.insert(id).second)
            throw ArgumentError("duplicate unlearning request for id " + std::to_string(id));
        if (!model.plan.contains(id))
            throw NotFoundError("unknown point id " + std::to_string(id));
    }

    CostLedger ledger;
    if (stream.ids.empty()) return ledger;

    if (stream.mode == RequestMode::Sequential) {
        for (std::size_t i = 0; i < stream.ids.size(); ++i) {
            std::int64_t id = stream.ids[i];
            auto [k, q] = model.plan.locate(id);
            model.plan = model.plan.remove_point(id);
            std::uint64_t samples = tagged(k, [&] { return retrain_tail(model, k, q); });
            ledger.entries.push_back({static_cast<int>(i), k, q, samples});
            ledger.total_samples += samples;
        }
        ledger.num_events = static_cast<int>(stream.ids.size());
        return ledger;
    }

    // Batch: locate everything first, then drop the whole batch from the plan
    // and restart each affected shard once from its minimum affected slice.
    std::map<int, int> restart; // shard -> min slice
    for (std::int64_t id : stream.ids) {
        auto [k, q] = model.plan.locate(id);
        auto it = restart.find(k);
        if (it == restart.end())
            restart.emplace(k, q);
        else
            it->second = std::min(it->second, q);
    }
    for (std::int64_t id : stream.ids) model.plan = model.plan.remove_point(id);

    std::vector<int> shards;
    shards.reserve(restart.size());
    for (const auto& [k, q] : restart) shards.push_back(k);
    std::vector<std::uint64_t> samples(model.constituents.size(), 0);
    run_sharded(shards, workers, [&](int k) {
        samples[static_cast<std::size_t>(k)] =
            tagged(k, [&] { return retrain_tail(model, k, restart.at(k)); });
    });
    for (const auto& [k, q] : restart) {
        ledger.entries.push_back({0, k, q, samples[static_cast<std::size_t>(k)]});
        ledger.total_samples += samples[static_cast<std::size_t>(k)];
    }
    ledger.num_events = 1;
    return ledger;
}

std::string CostLedger::to_csv() const {
    std::string out = "event,shard,restart_slice,samples_retrained\n";
    for (const LedgerEntry& e : entries) {
        out += std::to_string(e.event);
        out += ',';
        out += std::to_string(e.shard);
        out += ',';
        out += std::to_string(e.restart_slice);
        out += ',';
        out += std::to_string(e.samples_retrained);
        out += '\n';
    }
    return out;
}

void save_model(const SisaModel& model, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/plan.json", model.plan.to_json());

    nlohmann::ordered_json j;
    j["format"] = 1;
    j["arch"] = model.arch.arch == Arch::Logistic ? "logistic" : "mlp";
    j["hidden_width"] = model.arch.hidden_width;
    j["base_epochs"] = model.cfg.base_epochs;
    j["learning_rate"] = model.cfg.learning_rate;
    j["batch_size"] = model.cfg.batch_size;
    j["seed"] = model.cfg.seed;
    j["aggregation"] = to_string(model.aggregation);
    write_text_file(dir + "/model.json", j.dump(2) + "\n");

    for (const auto& tower : model.constituents)
        for (const Checkpoint& ckpt : tower) save_checkpoint(dir, ckpt);
}

SisaModel load_model(const std::string& dir, const Dataset& data) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(dir + "/model.json"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("model.json: " + std::string(e.what()));
    }

    ArchSpec arch;
    TrainConfig cfg;
    Aggregation aggregation = Aggregation::MajorityLabel;
    try {
        std::string arch_name = j.at("arch").get<std::string>();
        if (arch_name == "logistic")
            arch.arch = Arch::Logistic;
        else if (arch_name == "mlp")
            arch.arch = Arch::Mlp;
        else
            throw FormatError("model.json: unknown arch '" + arch_name + "'");
        arch.hidden_width = j.at("hidden_width").get<int>();
        cfg.base_epochs = j.at("base_epochs").get<int>();
        cfg.learning_rate = j.at("learning_rate").get<double>();
        cfg.batch_size = j.at("batch_size").get<int>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("model.json: " + std::string(e.what()));
    }
    validate_train_cfg(cfg);

    PartitionPlan plan = PartitionPlan::from_json(read_text_file(dir + "/plan.json"));
    for (int k = 0; k < plan.num_shards(); ++k)
        for (int r = 0; r < plan.num_slices(); ++r)
            for (std::int64_t id : plan.slice_ids(k, r))
                if (!data.contains(id))
                    throw ArgumentError("plan references id " + std::to_string(id) +
                                        " missing from the dataset");

    SisaModel model{plan,
                    arch,
                    cfg,
                    epoch_calibration(cfg.base_epochs, plan.num_slices()),
                    aggregation,
                    data,
                    {}};
    model.constituents.resize(static_cast<std::size_t>(plan.num_shards()));
    for (int k = 0; k < plan.num_shards(); ++k) {
        auto& tower = model.constituents[static_cast<std::size_t>(k)];
        for (int r = 0; r <= plan.num_slices(); ++r) {
            Checkpoint ckpt = load_checkpoint(dir, k, r);
            if (ckpt.params.arch.arch != arch.arch ||
                ckpt.params.feature_dim != data.feature_dim() ||
                ckpt.params.num_classes != data.num_classes())
                throw IntegrityError("checkpoint shard " + std::to_string(k) + " slice " +
                                     std::to_string(r) + " does not match the model shape");
            if (!tower.empty() && ckpt.samples_seen < tower.back().samples_seen)
                throw IntegrityError("checkpoint shard " + std::to_string(k) +
                                     " has a decreasing sample counter");
            tower.push_back(std::move(ckpt));
        }
    }
    return model;
}

} // namespace sisa
