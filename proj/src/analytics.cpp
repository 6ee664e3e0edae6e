#include "sisa/analytics.hpp"

#include <cmath>
#include <string>

#include "sisa/errors.hpp"

namespace sisa {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ArgumentError(std::string(name) + " must be positive and finite");
}

} // namespace

void ExperimentParams::validate() const {
    if (N < 1) throw ArgumentError("N must be >= 1");
    if (S < 1) throw ArgumentError("S must be >= 1");
    if (R < 1) throw ArgumentError("R must be >= 1");
    if (K < 1) throw ArgumentError("K must be >= 1");
    if (base_epochs < 1) throw ArgumentError("base_epochs must be >= 1");
    if (K > N) throw ArgumentError("K must be <= N");
    if (static_cast<std::uint64_t>(S) > N) throw ArgumentError("S must be <= N");
}

double shard_seq_cost(double N, double S, double K) {
    check_positive(N, "N");
    check_positive(S, "S");
    if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
    if (!(N / S > 1.0)) throw ArgumentError("shards must hold more than one point (N/S > 1)");
    return (N / S + 1.0 / (2.0 * S) - 1.0) * K - K * K / (2.0 * S);
}

double shard_batch_cost(double N, double S, double K) {
    check_positive(N, "N");
    check_positive(S, "S");
    if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
    return N * (1.0 - std::pow(1.0 - 1.0 / S, K)) - K;
}

double shard_batch_tau(double S) {
    check_positive(S, "S");
    return 1.0 / (-std::log1p(-1.0 / S));
}

double shard_batch_asymptote(double N, double S, double K) {
    check_positive(N, "N");
    return N * (1.0 - std::exp(-K / shard_batch_tau(S)));
}

double slice_seq_cost(double base_epochs, double D, double R) {
    check_positive(base_epochs, "base_epochs");
    check_positive(D, "D");
    if (!(R >= 1.0)) throw ArgumentError("R must be >= 1");
    return base_epochs * D * (2.0 / 3.0 + 1.0 / (3.0 * R));
}

std::pair<double, double> uniform_min_moments(double n, double a, double b) {
    if (!(n >= 1.0)) throw ArgumentError("n must be >= 1");
    if (!(a < b)) throw ArgumentError("the interval needs a < b");
    double mean = (n * a + b) / (n + 1.0);
    double second = a * a + (2.0 * (b - a) / (n + 1.0)) * ((n + 1.0) * a + b) / (n + 2.0);
    return {mean, second};
}

double slice_batch_cost(double base_epochs, double D, double R, double K) {
    check_positive(base_epochs, "base_epochs");
    check_positive(D, "D");
    if (!(R >= 1.0)) throw ArgumentError("R must be >= 1");
    if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
    // One request is the sequential case; the continuous minimum-moment device
    // below only approximates it, so route it through the exact form.
    if (R == 1.0 || K == 1.0) return slice_seq_cost(base_epochs, D, R);
    auto [m1, m2] = uniform_min_moments(K, 1.0, R);
    double scale = 2.0 * base_epochs * D / (R * (R + 1.0));
    return scale * (R * (R + 1.0) / 2.0 - 0.5 * (m2 - m1));
}

double lone_shard_seq_cost(double N, double S, double K) {
    check_positive(N, "N");
    check_positive(S, "S");
    if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
    return (1.0 / S) * (N / S + 1.0 / (2.0 * S) - 1.0) * K - K * K / (2.0 * S * S);
}

double lone_shard_batch_cost(double N, double S, double K) {
    check_positive(N, "N");
    check_positive(S, "S");
    if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
    return (N - K) / S;
}

CostReport combined_report(const ExperimentParams& params, CostMode mode) {
    params.validate();
    double N = static_cast<double>(params.N);
    double S = params.S;
    double R = params.R;
    double K = static_cast<double>(params.K);
    double e = params.base_epochs;
    double D = N / S;

    CostReport report;
    report.regime_small_k = K < 3.0 * S;
    if (mode == CostMode::Batch) {
        double affected = S * (1.0 - std::pow(1.0 - 1.0 / S, K));
        double hits = K / affected; // expected requests per affected shard
        if (!(D > hits))
            throw ArgumentError("shards too small for this request load (N/S <= K per shard)");
        report.expected_cost = affected * slice_batch_cost(e, D - hits, R, hits);
        report.baseline_cost = e * (N - K);
    } else {
        report.expected_cost = e * shard_seq_cost(N, S, K) * (2.0 / 3.0 + 1.0 / (3.0 * R));
        report.baseline_cost = e * (N * K - K * (K + 1.0) / 2.0);
    }
    if (!(report.expected_cost > 0.0))
        throw NumericalError("expected cost is not positive for these parameters");
    report.speedup = report.baseline_cost / report.expected_cost;
    return report;
}

} // namespace sisa
