#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sisa/analytics.hpp"
#include "sisa/dataset.hpp"
#include "sisa/learner.hpp"
#include "sisa/orchestrator.hpp"
#include "sisa/partition.hpp"

namespace sisa {

/// One simulated request stream: where the K requests landed and what the
/// retraining bill came to, in samples.
struct TrialRecord {
    std::vector<std::uint64_t> hits_per_shard;
    std::vector<bool> affected_flags;
    std::vector<int> min_slice_per_shard; // -1 when the shard took no hit
    std::uint64_t cost = 0;
};

struct CurvePoint {
    std::uint64_t K = 0;
    double mean_cost = 0.0;
    double variance = 0.0;
    double speedup = 0.0; // baseline / mean, 0 when no baseline applies
    std::uint64_t trials = 0;
};

struct SimSummary {
    std::uint64_t trials = 0;
    double mean_cost = 0.0;
    double variance = 0.0; // sample variance
    std::vector<CurvePoint> curve;
};

/// Shard and slice sizes of a balanced uniform layout of N points: the same
/// round-robin deal the planner uses, so abstract draws map onto real plans.
std::vector<std::vector<std::size_t>> balanced_layout(std::uint64_t N, int S, int R);

/// Exact retraining bill of a request sequence on a sliced layout, using the
/// trainer's own arithmetic (per-step sample counts are floored the same way).
/// `cells` lists the (shard, slice) of each request in processing order;
/// sizes shrink as points are removed. Returns per-request samples.
std::vector<std::uint64_t> sequential_replay_costs(std::vector<std::vector<std::size_t>> sizes,
                                                   const std::vector<std::pair<int, int>>& cells,
                                                   const SliceSchedule& schedule);

/// Same, but the whole set is removed first and each affected shard restarts
/// once from its minimum affected slice.
std::uint64_t batch_replay_cost(std::vector<std::vector<std::size_t>> sizes,
                                const std::vector<std::pair<int, int>>& cells,
                                const SliceSchedule& schedule);

/// Draws K distinct points per trial (uniformly, without replacement) on the
/// balanced layout and prices the stream exactly. Deterministic in the seed.
/// Pass `records` to capture per-trial realizations (intended for small runs).
SimSummary simulate(const ExperimentParams& params, RequestMode mode, std::uint64_t trials,
                    std::uint64_t seed, std::vector<TrialRecord>* records = nullptr);

/// Cost and speed-up versus K, with the same drawn requests reused across the
/// K values (each K prices a prefix of one length-max(ks) draw), so curves
/// compare under common random numbers. Points come back sorted by K.
SimSummary simulate_curve(const ExperimentParams& base, RequestMode mode,
                          const std::vector<std::uint64_t>& ks, std::uint64_t trials,
                          std::uint64_t seed);

/// A model trained on one 1/S-sized sample of the data: it retrains only when
/// a request lands inside that sample.
SimSummary simulate_lone(const ExperimentParams& params, RequestMode mode, std::uint64_t trials,
                         std::uint64_t seed);

struct ScenarioPlanSpec {
    PlanKind kind = PlanKind::Uniform;
    ShardBudget budget{1.0}; // distribution-aware cap
    int uniform_shards = 20; // shard count for the uniform kind
    int num_slices = 1;
    int base_epochs = 1; // cost unit: 1 prices costs in points retrained
};

/// Prices erasure-probability-driven request streams against a real plan over
/// the dataset. Per trial, each point requests erasure independently with its
/// own probability; requests are processed sequentially in a random order up
/// to the horizon. The request realizations depend only on the seed, not the
/// plan, so runs with different plan specs and the same seed compare under
/// common random numbers. Curve point K holds the mean cumulative cost after
/// K requests over the trials that produced at least K.
SimSummary simulate_scenario(const Dataset& data, const ScenarioPlanSpec& plan_spec,
                             int horizon_requests, std::uint64_t trials, std::uint64_t seed);

/// CSV with header `K,mean_cost,variance,speedup`.
std::string curve_csv(const SimSummary& summary);

/// One closed-form formula checked against the simulator at one grid point.
struct ValidationRow {
    std::string formula; // shard_seq | shard_batch | slice_seq | slice_batch | lone_seq | lone_batch
    ExperimentParams params;
    std::uint64_t trials = 0;
    double tolerance = 0.0;
    std::string note;
    double analytic = 0.0;
    double simulated = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

/// The default 25-point grid with per-formula trial counts and tolerances.
std::vector<ValidationRow> default_validation_grid();

/// Runs every row and fills in the analytic value, the simulated mean, the
/// relative error, and the pass flag.
void validate_formulas(std::vector<ValidationRow>& rows, std::uint64_t seed);

bool all_pass(const std::vector<ValidationRow>& rows);
std::string validation_table(const std::vector<ValidationRow>& rows);
std::string validation_csv(const std::vector<ValidationRow>& rows);

} // namespace sisa
