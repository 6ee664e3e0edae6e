#include <algorithm>
#include <map>
#include <set>

#include <doctest.h>

#include "sisa/dataset.hpp"
#include "sisa/errors.hpp"
#include "sisa/partition.hpp"
#include "sisa/rng.hpp"

using namespace sisa;

namespace {

// Every dataset id appears exactly once across all slices.
void check_disjoint_cover(const PartitionPlan& plan, const Dataset& data) {
    std::set<std::int64_t> seen;
    for (int k = 0; k < plan.num_shards(); ++k)
        for (int r = 0; r < plan.num_slices(); ++r)
            for (std::int64_t id : plan.slice_ids(k, r)) {
                CHECK(data.contains(id));
                CHECK(seen.insert(id).second);
            }
    CHECK(seen.size() == data.size());
}

std::vector<std::size_t> sorted_shard_sizes(const PartitionPlan& plan) {
    std::vector<std::size_t> sizes = plan.shard_sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

Dataset with_probs(std::size_t n, const std::vector<double>& probs) {
    std::vector<DataPoint> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({static_cast<std::int64_t>(i), {0.0, 0.0}, static_cast<int>(i % 2),
                       probs[i % probs.size()]});
    return Dataset(std::move(pts), 2, 2);
}

} // namespace

TEST_CASE("uniform_partition: exact and near-exact balance") {
    Dataset d100 = gen_synthetic(100, 2, 2, 1);
    PartitionPlan plan = uniform_partition(d100, 4, 5, 3);
    CHECK(plan.kind() == PlanKind::Uniform);
    CHECK(plan.num_shards() == 4);
    CHECK(plan.num_slices() == 5);
    for (int k = 0; k < 4; ++k) {
        CHECK(plan.shard_size(k) == 25);
        for (std::size_t s : plan.slice_sizes(k)) CHECK(s == 5);
    }
    check_disjoint_cover(plan, d100);

    Dataset d10 = gen_synthetic(10, 2, 2, 1);
    PartitionPlan p10 = uniform_partition(d10, 3, 1, 3);
    CHECK(sorted_shard_sizes(p10) == std::vector<std::size_t>{4, 3, 3});

    PartitionPlan mono = uniform_partition(d10, 1, 1, 0);
    CHECK(mono.num_shards() == 1);
    CHECK(mono.num_slices() == 1);
    CHECK(mono.shard_size(0) == 10);
}

TEST_CASE("uniform_partition: determinism and input validation") {
    Dataset d = gen_synthetic(60, 2, 2, 8);
    PartitionPlan a = uniform_partition(d, 5, 3, 42);
    PartitionPlan b = uniform_partition(d, 5, 3, 42);
    PartitionPlan c = uniform_partition(d, 5, 3, 43);
    bool same = true, differ = false;
    for (const DataPoint& p : d.points()) {
        same = same && (a.locate(p.id) == b.locate(p.id));
        differ = differ || (a.locate(p.id) != c.locate(p.id));
    }
    CHECK(same);
    CHECK(differ);

    CHECK_THROWS_AS(uniform_partition(d, 0, 1, 0), ArgumentError);
    CHECK_THROWS_AS(uniform_partition(d, 61, 1, 0), ArgumentError);
    CHECK_THROWS_AS(uniform_partition(d, 5, 13, 0), ArgumentError); // R > ceil(60/5)
    CHECK_NOTHROW(uniform_partition(d, 5, 12, 0));
    CHECK_NOTHROW(uniform_partition(d, 60, 1, 0));
}

TEST_CASE("uniform balance property over random shapes") {
    DetRng rng = DetRng::keyed({7, 1});
    for (int it = 0; it < 25; ++it) {
        std::size_t n = 5 + rng.next_below(300);
        int S = 1 + static_cast<int>(rng.next_below(n));
        std::size_t ceil_d = (n + S - 1) / S;
        int R = 1 + static_cast<int>(rng.next_below(ceil_d));
        Dataset d = gen_synthetic(n, 2, 2, rng.next_u64());
        PartitionPlan plan = uniform_partition(d, S, R, rng.next_u64());
        check_disjoint_cover(plan, d);

        std::vector<std::size_t> sizes = plan.shard_sizes();
        auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*mx - *mn <= 1);
        for (int k = 0; k < S; ++k) {
            std::vector<std::size_t> sl = plan.slice_sizes(k);
            auto [smn, smx] = std::minmax_element(sl.begin(), sl.end());
            CHECK(*smx - *smn <= 1);
        }
    }
}

TEST_CASE("distribution_aware_shard: literal eviction trace") {
    SUBCASE("thirty points at 0.1 under cap 1.0 close at nine") {
        Dataset d = with_probs(30, {0.1});
        PartitionPlan plan = distribution_aware_shard(d, ShardBudget{1.0}, 1);
        CHECK(plan.kind() == PlanKind::DistributionAware);
        CHECK(plan.shard_sizes() == std::vector<std::size_t>{9, 9, 9, 3});
        check_disjoint_cover(plan, d);
    }

    SUBCASE("each point overflowing the cap sits alone") {
        std::vector<DataPoint> pts = {{0, {0.0, 0.0}, 0, 0.6}, {1, {0.0, 0.0}, 1, 0.7}};
        Dataset d(pts, 2, 2);
        PartitionPlan plan = distribution_aware_shard(d, ShardBudget{0.5}, 1);
        CHECK(plan.shard_sizes() == std::vector<std::size_t>{1, 1});
        // sorted ascending by probability: shard 0 holds the 0.6 point
        CHECK(plan.locate(0).first == 0);
        CHECK(plan.locate(1).first == 1);
    }

    SUBCASE("all-zero probabilities never reach the cap") {
        Dataset d = with_probs(50, {0.0});
        PartitionPlan plan = distribution_aware_shard(d, ShardBudget{0.7}, 1);
        CHECK(plan.num_shards() == 1);
        CHECK(plan.shard_size(0) == 50);
    }

    SUBCASE("cap must lie in (0, 1]") {
        Dataset d = with_probs(10, {0.1});
        CHECK_THROWS_AS(distribution_aware_shard(d, ShardBudget{0.0}, 1), ArgumentError);
        CHECK_THROWS_AS(distribution_aware_shard(d, ShardBudget{1.5}, 1), ArgumentError);
    }
}

TEST_CASE("distribution_aware_shard: sorted monotone shards under budget") {
    DetRng rng = DetRng::keyed({7, 2});
    std::vector<DataPoint> pts;
    for (int i = 0; i < 400; ++i)
        pts.push_back({i, {0.0, 0.0}, i % 2, rng.next_real() * 0.2});
    Dataset d(pts, 2, 2);
    double cap = 0.9;
    PartitionPlan plan = distribution_aware_shard(d, ShardBudget{cap}, 3);
    check_disjoint_cover(plan, d);
    REQUIRE(plan.num_shards() >= 2);

    std::vector<double> shard_min(plan.num_shards(), 2.0), shard_max(plan.num_shards(), -1.0),
        shard_sum(plan.num_shards(), 0.0), shard_first(plan.num_shards(), -1.0);
    for (int k = 0; k < plan.num_shards(); ++k) {
        for (int r = 0; r < plan.num_slices(); ++r)
            for (std::int64_t id : plan.slice_ids(k, r)) {
                double p = d.by_id(id).erase_prob;
                shard_min[k] = std::min(shard_min[k], p);
                shard_max[k] = std::max(shard_max[k], p);
                shard_sum[k] += p;
            }
        shard_first[k] = shard_min[k];
    }
    for (int k = 0; k + 1 < plan.num_shards(); ++k) {
        CHECK(shard_max[k] <= shard_min[k + 1]); // sorted construction
        CHECK(shard_sum[k] < cap);               // closed strictly below the cap
        CHECK(shard_sum[k] + shard_first[k + 1] >= cap * (1.0 - 1e-9));
    }

    // slices within each shard stay balanced
    for (int k = 0; k < plan.num_shards(); ++k) {
        std::vector<std::size_t> sl = plan.slice_sizes(k);
        auto [mn, mx] = std::minmax_element(sl.begin(), sl.end());
        CHECK(*mx - *mn <= 1);
    }

    // deterministic: no seed parameter, same input, same plan
    PartitionPlan again = distribution_aware_shard(d, ShardBudget{cap}, 3);
    for (const DataPoint& p : d.points()) CHECK(plan.locate(p.id) == again.locate(p.id));
}

TEST_CASE("locate, contains, remove_point") {
    Dataset d = gen_synthetic(40, 2, 2, 9);
    PartitionPlan plan = uniform_partition(d, 4, 2, 5);

    for (const DataPoint& p : d.points()) {
        auto [k, r] = plan.locate(p.id);
        CHECK(k >= 0);
        CHECK(k < 4);
        CHECK(r >= 0);
        CHECK(r < 2);
        CHECK(plan.contains(p.id));
    }
    CHECK_FALSE(plan.contains(999));
    CHECK_THROWS_WITH_AS(plan.locate(999), doctest::Contains("999"), NotFoundError);

    std::int64_t victim = d.at(17).id;
    auto [vk, vr] = plan.locate(victim);
    PartitionPlan reduced = plan.remove_point(victim);

    CHECK_FALSE(reduced.contains(victim));
    CHECK_THROWS_AS(reduced.locate(victim), NotFoundError);
    CHECK_THROWS_AS(reduced.remove_point(victim), NotFoundError);
    CHECK(reduced.num_points() == plan.num_points() - 1);
    CHECK(reduced.shard_size(vk) == plan.shard_size(vk) - 1);
    for (const DataPoint& p : d.points()) {
        if (p.id == victim) continue;
        CHECK(reduced.locate(p.id) == plan.locate(p.id));
    }
    // order preserved within the affected slice
    std::vector<std::int64_t> before = plan.slice_ids(vk, vr);
    before.erase(std::remove(before.begin(), before.end(), victim), before.end());
    CHECK(reduced.slice_ids(vk, vr) == before);
    // original untouched
    CHECK(plan.contains(victim));
}

TEST_CASE("removing a whole slice leaves an empty slice in place") {
    Dataset d = gen_synthetic(12, 2, 2, 2);
    PartitionPlan plan = uniform_partition(d, 3, 2, 1);
    std::vector<std::int64_t> doomed = plan.slice_ids(1, 0);
    PartitionPlan reduced = plan;
    for (std::int64_t id : doomed) reduced = reduced.remove_point(id);
    CHECK(reduced.slice_ids(1, 0).empty());
    CHECK(reduced.slice_sizes(1)[1] == plan.slice_sizes(1)[1]);
    CHECK(reduced.num_shards() == 3);
}

TEST_CASE("plan json round trip") {
    Dataset d = gen_synthetic(35, 2, 2, 4);
    PartitionPlan plan = uniform_partition(d, 3, 4, 77);
    PartitionPlan back = PartitionPlan::from_json(plan.to_json());
    CHECK(back.kind() == plan.kind());
    CHECK(back.num_shards() == plan.num_shards());
    CHECK(back.num_slices() == plan.num_slices());
    for (const DataPoint& p : d.points()) CHECK(back.locate(p.id) == plan.locate(p.id));
    for (int k = 0; k < plan.num_shards(); ++k)
        for (int r = 0; r < plan.num_slices(); ++r)
            CHECK(back.slice_ids(k, r) == plan.slice_ids(k, r)); // order survives

    Dataset dp = with_probs(20, {0.05, 0.2});
    PartitionPlan aware = distribution_aware_shard(dp, ShardBudget{0.4}, 2);
    PartitionPlan aback = PartitionPlan::from_json(aware.to_json());
    CHECK(aback.kind() == PlanKind::DistributionAware);
    for (const DataPoint& p : dp.points()) CHECK(aback.locate(p.id) == aware.locate(p.id));

    CHECK_THROWS_AS(PartitionPlan::from_json("not json"), FormatError);
    CHECK_THROWS_AS(PartitionPlan::from_json("{\"S\": 2}"), FormatError);
}
