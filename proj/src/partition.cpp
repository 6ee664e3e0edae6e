#include "sisa/partition.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "sisa/errors.hpp"
#include "sisa/rng.hpp"

namespace sisa {

PartitionPlan::PartitionPlan(PlanKind kind, int num_slices,
                             std::vector<std::vector<std::vector<std::int64_t>>> slices)
    : kind_(kind), num_slices_(num_slices), slices_(std::move(slices)) {
    if (slices_.empty()) throw ArgumentError("plan must have at least one shard");
    if (num_slices_ < 1) throw ArgumentError("plan must have at least one slice");
    for (int k = 0; k < num_shards(); ++k) {
        if (static_cast<int>(slices_[static_cast<std::size_t>(k)].size()) != num_slices_)
            throw ArgumentError("shard " + std::to_string(k) + " has wrong slice count");
        for (int r = 0; r < num_slices_; ++r)
            for (std::int64_t id : slices_[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)])
                if (!index_.emplace(id, std::make_pair(k, r)).second)
                    throw ArgumentError("id " + std::to_string(id) +
                                        " assigned to more than one cell");
    }
    if (index_.empty()) throw ArgumentError("plan assigns no points");
}

std::pair<int, int> PartitionPlan::locate(std::int64_t id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw NotFoundError("point id " + std::to_string(id) + " is not in the plan");
    return it->second;
}

PartitionPlan PartitionPlan::remove_point(std::int64_t id) const {
    auto [shard, slice] = locate(id);
    std::vector<std::vector<std::vector<std::int64_t>>> slices = slices_;
    auto& cell = slices[static_cast<std::size_t>(shard)][static_cast<std::size_t>(slice)];
    cell.erase(std::find(cell.begin(), cell.end(), id));
    return PartitionPlan(kind_, num_slices_, std::move(slices));
}

std::size_t PartitionPlan::shard_size(int shard) const {
    std::size_t n = 0;
    for (const auto& slice : slices_.at(static_cast<std::size_t>(shard))) n += slice.size();
    return n;
}

std::vector<std::size_t> PartitionPlan::shard_sizes() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(num_shards()));
    for (int k = 0; k < num_shards(); ++k) out[static_cast<std::size_t>(k)] = shard_size(k);
    return out;
}

std::vector<std::size_t> PartitionPlan::slice_sizes(int shard) const {
    const auto& sh = slices_.at(static_cast<std::size_t>(shard));
    std::vector<std::size_t> out(sh.size());
    for (std::size_t r = 0; r < sh.size(); ++r) out[r] = sh[r].size();
    return out;
}

const std::vector<std::int64_t>& PartitionPlan::slice_ids(int shard, int slice) const {
    return slices_.at(static_cast<std::size_t>(shard)).at(static_cast<std::size_t>(slice));
}

std::vector<std::int64_t> PartitionPlan::shard_prefix_ids(int shard, int upto) const {
    const auto& sh = slices_.at(static_cast<std::size_t>(shard));
    if (upto < 0 || upto > num_slices_) throw ArgumentError("slice prefix out of range");
    std::vector<std::int64_t> out;
    for (int r = 0; r < upto; ++r) {
        const auto& slice = sh[static_cast<std::size_t>(r)];
        out.insert(out.end(), slice.begin(), slice.end());
    }
    return out;
}

std::string PartitionPlan::to_json() const {
    nlohmann::ordered_json j;
    j["S"] = num_shards();
    j["R"] = num_slices_;
    j["kind"] = kind_ == PlanKind::Uniform ? "uniform" : "distribution_aware";
    nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
    for (int k = 0; k < num_shards(); ++k)
        for (int r = 0; r < num_slices_; ++r)
            for (std::int64_t id : slice_ids(k, r))
                assignment[std::to_string(id)] = {k, r};
    j["assignment"] = std::move(assignment);
    return j.dump(2);
}

PartitionPlan PartitionPlan::from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("plan json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("S") || !j.contains("R") || !j.contains("kind") ||
        !j.contains("assignment"))
        throw FormatError("plan json: expected keys S, R, kind, assignment");
    int S = 0, R = 0;
    std::string kind_name;
    try {
        S = j.at("S").get<int>();
        R = j.at("R").get<int>();
        kind_name = j.at("kind").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("plan json: ") + e.what());
    }
    if (S < 1 || R < 1) throw FormatError("plan json: S and R must be >= 1");
    PlanKind kind;
    if (kind_name == "uniform")
        kind = PlanKind::Uniform;
    else if (kind_name == "distribution_aware")
        kind = PlanKind::DistributionAware;
    else
        throw FormatError("plan json: unknown kind '" + kind_name + "'");

    std::vector<std::vector<std::vector<std::int64_t>>> slices(
        static_cast<std::size_t>(S),
        std::vector<std::vector<std::int64_t>>(static_cast<std::size_t>(R)));
    const auto& assignment = j.at("assignment");
    if (!assignment.is_object()) throw FormatError("plan json: assignment must be an object");
    for (auto it = assignment.begin(); it != assignment.end(); ++it) {
        std::int64_t id = 0;
        try {
            id = std::stoll(it.key());
        } catch (const std::exception&) {
            throw FormatError("plan json: non-integer id '" + it.key() + "'");
        }
        const auto& cell = it.value();
        if (!cell.is_array() || cell.size() != 2)
            throw FormatError("plan json: assignment for id " + it.key() +
                              " must be [shard, slice]");
        int k = cell[0].get<int>();
        int r = cell[1].get<int>();
        if (k < 0 || k >= S || r < 0 || r >= R)
            throw FormatError("plan json: cell out of range for id " + it.key());
        slices[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)].push_back(id);
    }
    return PartitionPlan(kind, R, std::move(slices));
}

PartitionPlan uniform_partition(const Dataset& dataset, int num_shards, int num_slices,
                                std::uint64_t seed) {
    std::size_t n = dataset.size();
    if (num_shards < 1 || static_cast<std::size_t>(num_shards) > n)
        throw ArgumentError("num_shards must lie in [1, n]");
    std::size_t max_slices =
        (n + static_cast<std::size_t>(num_shards) - 1) / static_cast<std::size_t>(num_shards);
    if (num_slices < 1 || static_cast<std::size_t>(num_slices) > max_slices)
        throw ArgumentError("num_slices must lie in [1, ceil(n / num_shards)]");

    std::vector<std::int64_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = dataset.at(i).id;
    DetRng rng = DetRng::keyed({seed, 0x504c414eULL /* PLAN */});
    rng.shuffle(ids);

    std::vector<std::vector<std::vector<std::int64_t>>> slices(
        static_cast<std::size_t>(num_shards),
        std::vector<std::vector<std::int64_t>>(static_cast<std::size_t>(num_slices)));
    std::vector<std::size_t> dealt(static_cast<std::size_t>(num_shards), 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t shard = i % static_cast<std::size_t>(num_shards);
        std::size_t slice = dealt[shard] % static_cast<std::size_t>(num_slices);
        slices[shard][slice].push_back(ids[i]);
        ++dealt[shard];
    }
    return PartitionPlan(PlanKind::Uniform, num_slices, std::move(slices));
}

PartitionPlan distribution_aware_shard(const Dataset& dataset, const ShardBudget& budget,
                                       int num_slices) {
    if (!(budget.cap > 0.0 && budget.cap <= 1.0))
        throw ArgumentError("shard budget cap must lie in (0, 1]");
    if (num_slices < 1) throw ArgumentError("num_slices must be >= 1");

    std::vector<const DataPoint*> order;
    order.reserve(dataset.size());
    for (const DataPoint& p : dataset.points()) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const DataPoint* a, const DataPoint* b) {
        if (a->erase_prob != b->erase_prob) return a->erase_prob < b->erase_prob;
        return a->id < b->id;
    });

    // Greedy fill: Kahan-compensated running sum of erase probabilities; the
    // comparison carries a small relative tolerance so decimal inputs whose exact
    // sum lands on the cap (ten 0.1s against 1.0) close the shard as real
    // arithmetic would.
    const double threshold = budget.cap * (1.0 - 1e-12);
    std::vector<std::vector<std::int64_t>> shards(1);
    double sum = 0.0, comp = 0.0;
    for (const DataPoint* p : order) {
        shards.back().push_back(p->id);
        double y = p->erase_prob - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (sum >= threshold) {
            shards.back().pop_back();
            shards.emplace_back();
            shards.back().push_back(p->id);
            sum = p->erase_prob;
            comp = 0.0;
        }
    }
    // The seed shard stays empty when the very first point crosses the cap alone.
    if (shards.front().empty()) shards.erase(shards.begin());

    std::vector<std::vector<std::vector<std::int64_t>>> sliced(shards.size());
    for (std::size_t k = 0; k < shards.size(); ++k) {
        DetRng rng = DetRng::keyed({0x534c494345ULL /* SLICE */, static_cast<std::uint64_t>(k)});
        rng.shuffle(shards[k]);
        sliced[k].resize(static_cast<std::size_t>(num_slices));
        for (std::size_t i = 0; i < shards[k].size(); ++i)
            sliced[k][i % static_cast<std::size_t>(num_slices)].push_back(shards[k][i]);
    }
    return PartitionPlan(PlanKind::DistributionAware, num_slices, std::move(sliced));
}

} // namespace sisa
