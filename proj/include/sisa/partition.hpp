#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sisa/dataset.hpp"

namespace sisa {

enum class PlanKind { Uniform, DistributionAware };

/// Expected-request budget per shard for distribution-aware sharding.
struct ShardBudget {
    double cap = 1.0; // in (0, 1]
};

/// Assignment of point ids to (shard, slice) cells. Slices keep insertion order;
/// that order is part of the training contract (retraining replays it), so removal
/// erases an id without reshuffling the survivors.
class PartitionPlan {
public:
    PartitionPlan(PlanKind kind, int num_slices,
                  std::vector<std::vector<std::vector<std::int64_t>>> slices);

    PlanKind kind() const { return kind_; }
    int num_shards() const { return static_cast<int>(slices_.size()); }
    int num_slices() const { return num_slices_; }
    std::size_t num_points() const { return index_.size(); }

    /// (shard, slice) for an id; NotFoundError if absent.
    std::pair<int, int> locate(std::int64_t id) const;
    bool contains(std::int64_t id) const { return index_.count(id) != 0; }

    /// Copy of the plan without the given id; slice order is otherwise preserved.
    PartitionPlan remove_point(std::int64_t id) const;

    std::size_t shard_size(int shard) const;
    std::vector<std::size_t> shard_sizes() const;
    /// Point count per slice of one shard.
    std::vector<std::size_t> slice_sizes(int shard) const;
    const std::vector<std::int64_t>& slice_ids(int shard, int slice) const;
    /// Ids of slices [0, upto) of a shard, concatenated in slice order.
    std::vector<std::int64_t> shard_prefix_ids(int shard, int upto) const;

    /// Serialization: {"S", "R", "kind", "assignment": {id: [shard, slice]}} with
    /// assignment entries emitted shard-major, slice-major, in slice order, so a
    /// round trip preserves training order exactly.
    std::string to_json() const;
    static PartitionPlan from_json(const std::string& text);

private:
    PlanKind kind_;
    int num_slices_;
    std::vector<std::vector<std::vector<std::int64_t>>> slices_; // [shard][slice] -> ids
    std::unordered_map<std::int64_t, std::pair<int, int>> index_;
};

/// Seeded shuffle, deal round-robin into S shards, then round-robin each shard's
/// sequence into R slices. Shard sizes and slice sizes within a shard differ by at
/// most one. Requires 1 <= S <= n and 1 <= R <= ceil(n / S).
PartitionPlan uniform_partition(const Dataset& dataset, int num_shards, int num_slices,
                                std::uint64_t seed);

/// Greedy budget sharding: points sorted by ascending erase probability (ties by
/// ascending id) are appended to the current shard; when the shard's expected
/// request count reaches the cap, the point that crossed the line moves to a fresh
/// shard. The shard count is an output. Each shard is then sliced uniformly into R
/// slices after a shuffle seeded by the shard index.
PartitionPlan distribution_aware_shard(const Dataset& dataset, const ShardBudget& budget,
                                       int num_slices);

} // namespace sisa
