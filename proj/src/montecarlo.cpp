#include "sisa/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "sisa/errors.hpp"
#include "sisa/rng.hpp"

namespace sisa {

namespace {

constexpr std::uint64_t kKeyBasis = 0x452821e638d01377ULL;
constexpr std::uint64_t kTrialTag = 0x545249414cULL; // "TRIAL"
constexpr std::uint64_t kScenTag = 0x5343454eULL;    // "SCEN"
constexpr std::uint64_t kPlanTag = 0x504c414eULL;    // "PLAN"

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::pair<double, double> mean_variance(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, ss / static_cast<double>(xs.size() - 1)};
}

std::uint64_t floor_samples(double epochs, std::size_t n) {
    return static_cast<std::uint64_t>(std::floor(epochs * static_cast<double>(n)));
}

// The shared pricing kernel over a flat [shard * R + slice] size table, using
// the trainer's per-step flooring. Mutates `sizes` by removing the requested
// cells. Sequential prices each request as it arrives; batch removes all cells
// first and restarts each affected shard once from its minimum slice.
std::uint64_t replay_cells(std::vector<std::size_t>& sizes, int S, int R,
                           const std::pair<int, int>* cells, std::size_t ncells,
                           const std::vector<double>& eps, bool batch,
                           std::vector<std::uint64_t>* per_request,
                           std::vector<int>* min_slice) {
    auto check = [&](const std::pair<int, int>& c) {
        if (c.first < 0 || c.first >= S || c.second < 0 || c.second >= R)
            throw ArgumentError("request cell out of range");
        std::size_t& slot = sizes[static_cast<std::size_t>(c.first) * R + c.second];
        if (slot == 0) throw ArgumentError("removal from an empty slice");
        --slot;
    };
    auto suffix_cost = [&](int k, int from) {
        const std::size_t* row = sizes.data() + static_cast<std::size_t>(k) * R;
        std::size_t prefix = 0;
        for (int j = 0; j <= from; ++j) prefix += row[j];
        std::uint64_t cost = 0;
        for (int s = from + 1; s <= R; ++s) {
            cost += floor_samples(eps[static_cast<std::size_t>(s - 1)], prefix);
            if (s < R) prefix += row[s];
        }
        return cost;
    };
    if (min_slice) min_slice->assign(static_cast<std::size_t>(S), -1);
    auto note_min = [&](int k, int r) {
        if (!min_slice) return;
        int& slot = (*min_slice)[static_cast<std::size_t>(k)];
        if (slot < 0 || r < slot) slot = r;
    };

    std::uint64_t total = 0;
    if (!batch) {
        for (std::size_t i = 0; i < ncells; ++i) {
            check(cells[i]);
            note_min(cells[i].first, cells[i].second);
            std::uint64_t c = suffix_cost(cells[i].first, cells[i].second);
            if (per_request) per_request->push_back(c);
            total += c;
        }
        return total;
    }
    std::vector<int> restart(static_cast<std::size_t>(S), -1);
    for (std::size_t i = 0; i < ncells; ++i) {
        check(cells[i]);
        note_min(cells[i].first, cells[i].second);
        int& slot = restart[static_cast<std::size_t>(cells[i].first)];
        if (slot < 0 || cells[i].second < slot) slot = cells[i].second;
    }
    for (int k = 0; k < S; ++k)
        if (restart[static_cast<std::size_t>(k)] >= 0)
            total += suffix_cost(k, restart[static_cast<std::size_t>(k)]);
    return total;
}

std::vector<std::size_t> flatten(const std::vector<std::vector<std::size_t>>& sizes, int& S,
                                 int& R) {
    if (sizes.empty()) throw ArgumentError("layout has no shards");
    S = static_cast<int>(sizes.size());
    R = static_cast<int>(sizes.front().size());
    if (R < 1) throw ArgumentError("layout has no slices");
    std::vector<std::size_t> flat;
    flat.reserve(static_cast<std::size_t>(S) * R);
    for (const auto& row : sizes) {
        if (static_cast<int>(row.size()) != R)
            throw ArgumentError("layout rows must all have the same slice count");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

void check_schedule(const SliceSchedule& schedule, int R) {
    if (schedule.num_slices != R ||
        schedule.epochs_per_slice.size() != static_cast<std::size_t>(R))
        throw ArgumentError("schedule does not match the layout's slice count");
}

// Ordered sample of k distinct values from [0, n).
std::vector<std::uint64_t> draw_distinct(DetRng& rng, std::uint64_t n, std::uint64_t k) {
    if (k > n) throw ArgumentError("cannot draw more distinct points than exist");
    std::vector<std::uint64_t> out;
    out.reserve(k);
    if (k <= n / 2) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(k * 2);
        while (out.size() < k) {
            std::uint64_t v = rng.next_below(n);
            if (seen.insert(v).second) out.push_back(v);
        }
        return out;
    }
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t j = i + rng.next_below(n - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

// Maps a point position on the balanced layout to its (shard, slice) cell.
struct BalancedMap {
    std::uint64_t N;
    int S, R;
    std::uint64_t D, big; // D = N / S, `big` shards hold D + 1

    BalancedMap(std::uint64_t n, int s, int r)
        : N(n), S(s), R(r), D(n / static_cast<std::uint64_t>(s)),
          big(n % static_cast<std::uint64_t>(s)) {}

    std::pair<int, int> cell(std::uint64_t p) const {
        std::uint64_t shard, q;
        if (p < (D + 1) * big) {
            shard = p / (D + 1);
            q = p % (D + 1);
        } else {
            std::uint64_t rest = p - (D + 1) * big;
            shard = big + rest / D;
            q = rest % D;
        }
        std::uint64_t nk = D + (shard < big ? 1 : 0);
        std::uint64_t base = nk / R;
        std::uint64_t extra = nk % R;
        std::uint64_t slice;
        if (q < extra * (base + 1))
            slice = q / (base + 1);
        else
            slice = extra + (q - extra * (base + 1)) / (base > 0 ? base : 1);
        return {static_cast<int>(shard), static_cast<int>(slice)};
    }
};

double sequential_baseline(double e, double N, double K) {
    return e * (N * K - K * (K + 1.0) / 2.0);
}

double batch_baseline(double e, double N, double K) { return e * (N - K); }

CurvePoint make_point(std::uint64_t K, const std::vector<double>& costs, double baseline) {
    auto [mean, var] = mean_variance(costs);
    CurvePoint pt;
    pt.K = K;
    pt.mean_cost = mean;
    pt.variance = var;
    pt.speedup = mean > 0.0 ? baseline / mean : 0.0;
    pt.trials = costs.size();
    return pt;
}

} // namespace

std::vector<std::vector<std::size_t>> balanced_layout(std::uint64_t N, int S, int R) {
    if (S < 1 || static_cast<std::uint64_t>(S) > N)
        throw ArgumentError("need 1 <= S <= N");
    std::uint64_t ceil_d = (N + static_cast<std::uint64_t>(S) - 1) / static_cast<std::uint64_t>(S);
    if (R < 1 || static_cast<std::uint64_t>(R) > ceil_d)
        throw ArgumentError("need 1 <= R <= ceil(N / S)");
    std::vector<std::vector<std::size_t>> sizes(static_cast<std::size_t>(S));
    for (int k = 0; k < S; ++k) {
        std::uint64_t nk = N / S + (static_cast<std::uint64_t>(k) < N % S ? 1 : 0);
        auto& row = sizes[static_cast<std::size_t>(k)];
        row.resize(static_cast<std::size_t>(R));
        for (int r = 0; r < R; ++r)
            row[static_cast<std::size_t>(r)] =
                nk / R + (static_cast<std::uint64_t>(r) < nk % R ? 1 : 0);
    }
    return sizes;
}

std::vector<std::uint64_t> sequential_replay_costs(std::vector<std::vector<std::size_t>> sizes,
                                                   const std::vector<std::pair<int, int>>& cells,
                                                   const SliceSchedule& schedule) {
    int S = 0, R = 0;
    std::vector<std::size_t> flat = flatten(sizes, S, R);
    check_schedule(schedule, R);
    std::vector<std::uint64_t> per_request;
    per_request.reserve(cells.size());
    replay_cells(flat, S, R, cells.data(), cells.size(), schedule.epochs_per_slice, false,
                 &per_request, nullptr);
    return per_request;
}

std::uint64_t batch_replay_cost(std::vector<std::vector<std::size_t>> sizes,
                                const std::vector<std::pair<int, int>>& cells,
                                const SliceSchedule& schedule) {
    int S = 0, R = 0;
    std::vector<std::size_t> flat = flatten(sizes, S, R);
    check_schedule(schedule, R);
    return replay_cells(flat, S, R, cells.data(), cells.size(), schedule.epochs_per_slice, true,
                        nullptr, nullptr);
}

SimSummary simulate(const ExperimentParams& params, RequestMode mode, std::uint64_t trials,
                    std::uint64_t seed, std::vector<TrialRecord>* records) {
    params.validate();
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    auto layout = balanced_layout(params.N, params.S, params.R);
    int S = 0, R = 0;
    std::vector<std::size_t> pristine = flatten(layout, S, R);
    SliceSchedule schedule = epoch_calibration(params.base_epochs, R);
    BalancedMap map(params.N, S, R);

    std::vector<double> costs;
    costs.reserve(trials);
    std::vector<std::size_t> sizes;
    std::vector<std::pair<int, int>> cells(params.K);
    std::vector<int> min_slice;
    for (std::uint64_t t = 0; t < trials; ++t) {
        DetRng rng = DetRng::keyed({seed, kTrialTag, t});
        std::vector<std::uint64_t> draws = draw_distinct(rng, params.N, params.K);
        for (std::size_t i = 0; i < draws.size(); ++i) cells[i] = map.cell(draws[i]);
        sizes = pristine;
        std::uint64_t cost =
            replay_cells(sizes, S, R, cells.data(), cells.size(), schedule.epochs_per_slice,
                         mode == RequestMode::Batch, nullptr, records ? &min_slice : nullptr);
        costs.push_back(static_cast<double>(cost));
        if (records) {
            TrialRecord rec;
            rec.hits_per_shard.assign(static_cast<std::size_t>(S), 0);
            for (const auto& c : cells) ++rec.hits_per_shard[static_cast<std::size_t>(c.first)];
            rec.affected_flags.resize(static_cast<std::size_t>(S));
            for (int k = 0; k < S; ++k)
                rec.affected_flags[static_cast<std::size_t>(k)] =
                    rec.hits_per_shard[static_cast<std::size_t>(k)] > 0;
            rec.min_slice_per_shard = min_slice;
            rec.cost = cost;
            records->push_back(std::move(rec));
        }
    }

    double e = params.base_epochs;
    double baseline = mode == RequestMode::Batch
                          ? batch_baseline(e, static_cast<double>(params.N),
                                           static_cast<double>(params.K))
                          : sequential_baseline(e, static_cast<double>(params.N),
                                                static_cast<double>(params.K));
    SimSummary summary;
    summary.trials = trials;
    summary.curve.push_back(make_point(params.K, costs, baseline));
    summary.mean_cost = summary.curve.back().mean_cost;
    summary.variance = summary.curve.back().variance;
    return summary;
}

SimSummary simulate_curve(const ExperimentParams& base, RequestMode mode,
                          const std::vector<std::uint64_t>& ks, std::uint64_t trials,
                          std::uint64_t seed) {
    if (ks.empty()) throw ArgumentError("no K values given");
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    std::vector<std::uint64_t> sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    ExperimentParams check = base;
    check.K = sorted.back();
    check.validate();
    if (sorted.front() < 1) throw ArgumentError("K values must be >= 1");

    auto layout = balanced_layout(base.N, base.S, base.R);
    int S = 0, R = 0;
    std::vector<std::size_t> pristine = flatten(layout, S, R);
    SliceSchedule schedule = epoch_calibration(base.base_epochs, R);
    BalancedMap map(base.N, S, R);
    std::uint64_t max_k = sorted.back();

    std::vector<std::vector<double>> costs(sorted.size());
    for (auto& c : costs) c.reserve(trials);
    std::vector<std::size_t> sizes;
    std::vector<std::pair<int, int>> cells(max_k);
    for (std::uint64_t t = 0; t < trials; ++t) {
        DetRng rng = DetRng::keyed({seed, kTrialTag, t});
        std::vector<std::uint64_t> draws = draw_distinct(rng, base.N, max_k);
        for (std::size_t i = 0; i < draws.size(); ++i) cells[i] = map.cell(draws[i]);
        for (std::size_t j = 0; j < sorted.size(); ++j) {
            sizes = pristine;
            std::uint64_t cost =
                replay_cells(sizes, S, R, cells.data(), sorted[j], schedule.epochs_per_slice,
                             mode == RequestMode::Batch, nullptr, nullptr);
            costs[j].push_back(static_cast<double>(cost));
        }
    }

    double e = base.base_epochs;
    SimSummary summary;
    summary.trials = trials;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        double K = static_cast<double>(sorted[j]);
        double baseline = mode == RequestMode::Batch
                              ? batch_baseline(e, static_cast<double>(base.N), K)
                              : sequential_baseline(e, static_cast<double>(base.N), K);
        summary.curve.push_back(make_point(sorted[j], costs[j], baseline));
    }
    summary.mean_cost = summary.curve.back().mean_cost;
    summary.variance = summary.curve.back().variance;
    return summary;
}

SimSummary simulate_lone(const ExperimentParams& params, RequestMode mode, std::uint64_t trials,
                         std::uint64_t seed) {
    params.validate();
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    std::uint64_t n0 = params.N / params.S + (params.N % params.S ? 1 : 0);
    double e = params.base_epochs;

    std::vector<double> costs;
    costs.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        DetRng rng = DetRng::keyed({seed, kTrialTag, t});
        std::vector<std::uint64_t> draws = draw_distinct(rng, params.N, params.K);
        std::uint64_t cost = 0;
        std::uint64_t hits = 0;
        for (std::uint64_t p : draws)
            if (p < n0) {
                ++hits;
                if (mode == RequestMode::Sequential)
                    cost += floor_samples(e, static_cast<std::size_t>(n0 - hits));
            }
        if (mode == RequestMode::Batch)
            cost = floor_samples(e, static_cast<std::size_t>(n0 - hits));
        costs.push_back(static_cast<double>(cost));
    }

    double baseline = mode == RequestMode::Batch
                          ? batch_baseline(e, static_cast<double>(params.N),
                                           static_cast<double>(params.K))
                          : sequential_baseline(e, static_cast<double>(params.N),
                                                static_cast<double>(params.K));
    SimSummary summary;
    summary.trials = trials;
    summary.curve.push_back(make_point(params.K, costs, baseline));
    summary.mean_cost = summary.curve.back().mean_cost;
    summary.variance = summary.curve.back().variance;
    return summary;
}

SimSummary simulate_scenario(const Dataset& data, const ScenarioPlanSpec& plan_spec,
                             int horizon_requests, std::uint64_t trials, std::uint64_t seed) {
    if (horizon_requests < 1) throw ArgumentError("horizon must be >= 1");
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    if (plan_spec.base_epochs < 1) throw ArgumentError("base_epochs must be >= 1");

    std::uint64_t plan_seed = hash_fold(hash_fold(kKeyBasis, seed), kPlanTag);
    PartitionPlan plan =
        plan_spec.kind == PlanKind::Uniform
            ? uniform_partition(data, plan_spec.uniform_shards, plan_spec.num_slices, plan_seed)
            : distribution_aware_shard(data, plan_spec.budget, plan_spec.num_slices);
    int S = plan.num_shards();
    int R = plan.num_slices();
    SliceSchedule schedule = epoch_calibration(plan_spec.base_epochs, R);

    std::vector<std::size_t> pristine;
    pristine.reserve(static_cast<std::size_t>(S) * R);
    for (int k = 0; k < S; ++k) {
        auto row = plan.slice_sizes(k);
        pristine.insert(pristine.end(), row.begin(), row.end());
    }
    std::unordered_map<std::int64_t, std::pair<int, int>> cell_of;
    cell_of.reserve(data.size() * 2);
    for (int k = 0; k < S; ++k)
        for (int r = 0; r < R; ++r)
            for (std::int64_t id : plan.slice_ids(k, r)) cell_of.emplace(id, std::make_pair(k, r));

    std::size_t horizon = static_cast<std::size_t>(horizon_requests);
    std::vector<double> count(horizon, 0.0), sum(horizon, 0.0), sumsq(horizon, 0.0);
    std::vector<double> totals;
    totals.reserve(trials);
    std::vector<std::int64_t> requested;
    std::vector<std::size_t> sizes;
    for (std::uint64_t t = 0; t < trials; ++t) {
        DetRng rng = DetRng::keyed({seed, kScenTag, t});
        requested.clear();
        for (const DataPoint& p : data.points())
            if (rng.next_real() < p.erase_prob) requested.push_back(p.id);
        rng.shuffle(requested);

        sizes = pristine;
        double cumulative = 0.0;
        std::size_t m = std::min(horizon, requested.size());
        for (std::size_t j = 0; j < m; ++j) {
            std::pair<int, int> cell = cell_of.at(requested[j]);
            cumulative += static_cast<double>(replay_cells(
                sizes, S, R, &cell, 1, schedule.epochs_per_slice, false, nullptr, nullptr));
            count[j] += 1.0;
            sum[j] += cumulative;
            sumsq[j] += cumulative * cumulative;
        }
        totals.push_back(cumulative);
    }

    SimSummary summary;
    summary.trials = trials;
    auto [mean, var] = mean_variance(totals);
    summary.mean_cost = mean;
    summary.variance = var;
    for (std::size_t j = 0; j < horizon; ++j) {
        CurvePoint pt;
        pt.K = j + 1;
        pt.trials = static_cast<std::uint64_t>(count[j]);
        if (count[j] > 0.0) {
            pt.mean_cost = sum[j] / count[j];
            if (count[j] > 1.0)
                pt.variance = std::max(
                    0.0, (sumsq[j] - count[j] * pt.mean_cost * pt.mean_cost) / (count[j] - 1.0));
        }
        summary.curve.push_back(pt);
    }
    return summary;
}

std::string curve_csv(const SimSummary& summary) {
    std::string out = "K,mean_cost,variance,speedup\n";
    for (const CurvePoint& pt : summary.curve) {
        out += std::to_string(pt.K);
        out += ',';
        out += fmt_g(pt.mean_cost);
        out += ',';
        out += fmt_g(pt.variance);
        out += ',';
        out += fmt_g(pt.speedup);
        out += '\n';
    }
    return out;
}

std::vector<ValidationRow> default_validation_grid() {
    std::vector<ValidationRow> rows;
    auto add = [&rows](const char* formula, std::uint64_t N, int S, int R, std::uint64_t K,
                       std::uint64_t trials, double tol, const char* note = "") {
        ValidationRow row;
        row.formula = formula;
        row.params = {N, S, R, K, 10};
        row.trials = trials;
        row.tolerance = tol;
        row.note = note;
        rows.push_back(std::move(row));
    };
    add("shard_batch", 10000, 10, 1, 5, 100000, 0.01);
    add("shard_batch", 10000, 20, 1, 10, 100000, 0.01);
    add("shard_batch", 50000, 20, 1, 8, 100000, 0.01);
    add("shard_batch", 10000, 5, 1, 3, 100000, 0.01);
    add("shard_batch", 20000, 10, 1, 20, 100000, 0.01);
    add("shard_batch", 60000, 20, 1, 10, 100000, 0.01);
    add("lone_batch", 10000, 10, 1, 5, 100000, 0.01);
    add("lone_batch", 10000, 20, 1, 10, 100000, 0.01);
    add("lone_batch", 20000, 5, 1, 10, 100000, 0.01);
    add("shard_seq", 10000, 10, 1, 50, 100000, 0.05, "constant shard size approximation");
    add("shard_seq", 10000, 20, 1, 100, 100000, 0.05, "constant shard size approximation");
    add("shard_seq", 5000, 5, 1, 100, 100000, 0.05, "constant shard size approximation");
    add("shard_seq", 20000, 10, 1, 200, 100000, 0.05, "constant shard size approximation");
    add("slice_seq", 5000, 1, 1, 1, 20000, 0.02);
    add("slice_seq", 5000, 1, 5, 1, 20000, 0.02);
    add("slice_seq", 5000, 1, 20, 1, 20000, 0.02);
    add("slice_seq", 5000, 1, 50, 1, 20000, 0.02);
    add("slice_batch", 5000, 1, 10, 2, 20000, 0.03, "continuous minimum moments");
    add("slice_batch", 5000, 1, 10, 5, 20000, 0.03, "continuous minimum moments");
    add("slice_batch", 5000, 1, 10, 10, 20000, 0.03, "continuous minimum moments");
    add("slice_batch", 5000, 1, 20, 5, 20000, 0.03, "continuous minimum moments");
    add("slice_batch", 5000, 1, 20, 20, 20000, 0.03, "continuous minimum moments");
    add("slice_batch", 5000, 1, 50, 25, 20000, 0.03, "continuous minimum moments");
    add("lone_seq", 10000, 10, 1, 50, 100000, 0.05);
    add("lone_seq", 10000, 20, 1, 40, 100000, 0.05);
    return rows;
}

void validate_formulas(std::vector<ValidationRow>& rows, std::uint64_t seed) {
    if (rows.empty()) throw ArgumentError("validation grid is empty");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ValidationRow& row = rows[i];
        const ExperimentParams& p = row.params;
        double e = p.base_epochs;
        double N = static_cast<double>(p.N);
        double S = p.S;
        double R = p.R;
        double K = static_cast<double>(p.K);
        std::uint64_t row_seed = hash_fold(hash_fold(kKeyBasis, seed), i);

        if (row.formula == "shard_seq") {
            row.analytic = e * shard_seq_cost(N, S, K);
            row.simulated = simulate(p, RequestMode::Sequential, row.trials, row_seed).mean_cost;
        } else if (row.formula == "shard_batch") {
            row.analytic = e * shard_batch_cost(N, S, K);
            row.simulated = simulate(p, RequestMode::Batch, row.trials, row_seed).mean_cost;
        } else if (row.formula == "slice_seq") {
            if (p.S != 1 || p.K != 1)
                throw ArgumentError("slice_seq rows use S=1, K=1");
            row.analytic = slice_seq_cost(e, N, R);
            row.simulated = simulate(p, RequestMode::Sequential, row.trials, row_seed).mean_cost;
        } else if (row.formula == "slice_batch") {
            if (p.S != 1) throw ArgumentError("slice_batch rows use S=1");
            row.analytic = slice_batch_cost(e, N, R, K);
            row.simulated = simulate(p, RequestMode::Batch, row.trials, row_seed).mean_cost;
        } else if (row.formula == "lone_seq") {
            row.analytic = e * lone_shard_seq_cost(N, S, K);
            row.simulated =
                simulate_lone(p, RequestMode::Sequential, row.trials, row_seed).mean_cost;
        } else if (row.formula == "lone_batch") {
            row.analytic = e * lone_shard_batch_cost(N, S, K);
            row.simulated = simulate_lone(p, RequestMode::Batch, row.trials, row_seed).mean_cost;
        } else {
            throw ArgumentError("unknown formula '" + row.formula + "'");
        }

        if (row.analytic != 0.0)
            row.rel_error = std::fabs(row.simulated - row.analytic) / std::fabs(row.analytic);
        else
            row.rel_error = row.simulated == 0.0 ? 0.0 : 1.0;
        row.pass = row.rel_error <= row.tolerance;
    }
}

bool all_pass(const std::vector<ValidationRow>& rows) {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

std::string validation_table(const std::vector<ValidationRow>& rows) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-12s %8s %4s %4s %5s %8s %14s %14s %8s %6s %s\n", "formula",
                  "N", "S", "R", "K", "trials", "analytic", "simulated", "rel%", "tol%", "status");
    out += buf;
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf,
                      "%-12s %8llu %4d %4d %5llu %8llu %14.4f %14.4f %8.3f %6.1f %s%s%s\n",
                      row.formula.c_str(), static_cast<unsigned long long>(row.params.N),
                      row.params.S, row.params.R, static_cast<unsigned long long>(row.params.K),
                      static_cast<unsigned long long>(row.trials), row.analytic, row.simulated,
                      100.0 * row.rel_error, 100.0 * row.tolerance, row.pass ? "pass" : "FAIL",
                      row.note.empty() ? "" : "  ", row.note.c_str());
        out += buf;
    }
    return out;
}

std::string validation_csv(const std::vector<ValidationRow>& rows) {
    std::string out = "formula,N,S,R,K,base_epochs,trials,analytic,simulated,rel_error,tolerance,pass\n";
    for (const auto& row : rows) {
        out += row.formula;
        out += ',';
        out += std::to_string(row.params.N);
        out += ',';
        out += std::to_string(row.params.S);
        out += ',';
        out += std::to_string(row.params.R);
        out += ',';
        out += std::to_string(row.params.K);
        out += ',';
        out += std::to_string(row.params.base_epochs);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += fmt_g(row.analytic);
        out += ',';
        out += fmt_g(row.simulated);
        out += ',';
        out += fmt_g(row.rel_error);
        out += ',';
        out += fmt_g(row.tolerance);
        out += ',';
        out += row.pass ? '1' : '0';
        out += '\n';
    }
    return out;
}

} // namespace sisa
