#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sisa/checkpoint_io.hpp"
#include "sisa/dataset.hpp"
#include "sisa/learner.hpp"
#include "sisa/partition.hpp"

namespace sisa {

enum class Aggregation { MajorityLabel, MeanVector };
std::string to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& s);

/// Trained ensemble: one constituent per shard, each with its full checkpoint
/// tower (slice_after = 0..R). The plan, not the dataset, defines membership:
/// after unlearning, `data` may hold points the plan no longer references.
struct SisaModel {
    PartitionPlan plan;
    ArchSpec arch;
    TrainConfig cfg;
    SliceSchedule schedule;
    Aggregation aggregation;
    Dataset data;
    std::vector<std::vector<Checkpoint>> constituents; // [shard][slice_after]

    int num_shards() const { return plan.num_shards(); }
    int num_slices() const { return plan.num_slices(); }
    /// The serving model of a shard: its final checkpoint.
    const Checkpoint& serving(int shard) const;
};

/// Seed for one shard's initialization and sample-order streams, derived from
/// the run seed so constituents are independent but reproducible.
std::uint64_t shard_stream_seed(std::uint64_t base_seed, int shard);

/// Trains every constituent in isolation: initialize from the shard seed, then
/// for r = 1..R train on the union of the first r slices for the schedule's
/// epochs, checkpointing before each new slice joins and after the last.
/// The plan must cover the dataset exactly. Workers > 1 trains shards on a
/// thread pool; results are identical at any worker count.
SisaModel sisa_train(const Dataset& dataset, const PartitionPlan& plan, const ArchSpec& arch,
                     const TrainConfig& cfg, Aggregation aggregation, int workers = 1);

struct Prediction {
    int label = 0;
    /// Vote histogram normalized by the shard count (majority) or the mean of
    /// the constituent probability vectors (mean).
    std::vector<double> probs;
};

/// Ensemble prediction. Majority: each constituent votes its argmax, ties in
/// the vote count break toward the lowest class index. Mean: average the
/// probability vectors and take the argmax, same tie-break. A shard emptied by
/// unlearning abstains from voting and contributes the uniform vector to the
/// mean.
Prediction aggregate_predict(const SisaModel& model, const std::vector<double>& features);

/// Fraction of test points whose aggregated label matches the true label.
double evaluate(const SisaModel& model, const Dataset& test);

enum class RequestMode { Sequential, Batch };
std::string to_string(RequestMode m);
RequestMode request_mode_from_string(const std::string& s);

struct RequestStream {
    std::vector<std::int64_t> ids; // distinct; a point is unlearned at most once
    RequestMode mode = RequestMode::Sequential;
};

/// One retraining event on one shard. `event` is the request index in
/// sequential mode and the batch index (always 0) in batch mode.
/// `restart_slice` is the lowest slice that had a removal: training resumes
/// from the checkpoint taken just before that slice was introduced.
struct LedgerEntry {
    int event = 0;
    int shard = 0;
    int restart_slice = 0;
    std::uint64_t samples_retrained = 0;
};

struct CostLedger {
    std::vector<LedgerEntry> entries;
    int num_events = 0;
    std::uint64_t total_samples = 0;

    /// CSV with header `event,shard,restart_slice,samples_retrained`.
    std::string to_csv() const;
};

/// Processes the stream in place. Sequential mode handles one request at a
/// time: locate the point, drop it from the plan, retrain its shard from the
/// last checkpoint that never saw it. Batch mode drops every requested point
/// first, then retrains each affected shard once from its minimum affected
/// slice. Unaffected shards keep bit-identical checkpoints. The result equals
/// a from-scratch sisa_train on the reduced plan with the same seeds, bit for
/// bit. Unknown ids raise NotFoundError, duplicates ArgumentError, both before
/// any mutation.
CostLedger unlearn(SisaModel& model, const RequestStream& stream, int workers = 1);

/// Persists a model as plan.json, model.json, and one checkpoint file per
/// (shard, slice_after) under `dir`; loads it back against the dataset the
/// plan refers to. The plan may reference a subset of the dataset (prior
/// unlearning), never the other way around.
void save_model(const SisaModel& model, const std::string& dir);
SisaModel load_model(const std::string& dir, const Dataset& data);

} // namespace sisa
