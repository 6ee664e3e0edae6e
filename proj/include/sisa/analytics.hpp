#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace sisa {

/// One experiment configuration for the cost model and the simulator.
/// `N` points, `S` shards, `R` slices per shard, `K` unlearning requests,
/// `base_epochs` = the epochs a monolithic baseline would train for.
struct ExperimentParams {
    std::uint64_t N = 0;
    int S = 1;
    int R = 1;
    std::uint64_t K = 1;
    int base_epochs = 1;

    void validate() const; // all positive, K <= N, S <= N
};

/// Expected points retrained to serve K requests one at a time when the data
/// is split into S shards, each retrained whole on every hit.
double shard_seq_cost(double N, double S, double K);

/// Expected points retrained when the K requests are served together: every
/// hit shard retrains once at the end.
double shard_batch_cost(double N, double S, double K);

/// Characteristic request count of the batch curve; the small-K asymptote is
/// N(1 - exp(-K / tau)).
double shard_batch_tau(double S);
double shard_batch_asymptote(double N, double S, double K);

/// Expected samples to serve one request on a shard of D points cut into R
/// incrementally trained slices: e'D(2/3 + 1/(3R)).
double slice_seq_cost(double base_epochs, double D, double R);

/// Mean and second moment of the minimum of n independent uniform draws on
/// (a, b): ((na+b)/(n+1), a^2 + (2(b-a)/(n+1)) * ((n+1)a+b)/(n+2)).
std::pair<double, double> uniform_min_moments(double n, double a, double b);

/// Expected samples to serve a batch of K requests landing in one shard of D
/// points and R slices; reduces to slice_seq_cost at K=1 and approaches e'D
/// for K >> R.
double slice_batch_cost(double base_epochs, double D, double R, double K);

/// A lone shard trains on a 1/S sample of the data and retrains only when a
/// request lands inside it.
double lone_shard_seq_cost(double N, double S, double K);
double lone_shard_batch_cost(double N, double S, double K);

struct CostReport {
    double expected_cost = 0.0; // samples
    double baseline_cost = 0.0; // samples, monolithic model
    double speedup = 0.0;       // baseline / expected
    bool regime_small_k = false; // K < 3S, where sharding pays off
};

enum class CostMode { Sequential, Batch };

/// Composes shard selection with the per-shard slicing cost: expected affected
/// shards times the expected slicing cost of one affected shard (batch), or
/// the sequential shard cost scaled by the slicing factor. The monolithic
/// baseline retrains after every request (sequential) or once on the survivors
/// (batch). S=1, R=1 gives speedup exactly 1.
CostReport combined_report(const ExperimentParams& params, CostMode mode);

} // namespace sisa
