#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace sisa {

struct DataPoint {
    std::int64_t id = 0;
    std::vector<double> features;
    int label = 0;
    double erase_prob = 0.0;
};

/// One group of a synthetic erasure-probability scenario: a fraction of the dataset
/// sharing a common per-point request probability.
struct ScenarioGroup {
    double fraction = 0.0;
    double erase_prob = 0.0;
};

struct ScenarioConfig {
    std::vector<ScenarioGroup> groups;
    std::uint64_t seed = 0;
};

/// Immutable labeled dataset. Construction validates the whole-table invariants:
/// unique ids, uniform feature dimension, labels in [0, num_classes), erase
/// probabilities in [0, 1].
class Dataset {
public:
    Dataset(std::vector<DataPoint> points, int feature_dim, int num_classes);

    std::size_t size() const { return points_.size(); }
    int feature_dim() const { return feature_dim_; }
    int num_classes() const { return num_classes_; }
    const std::vector<DataPoint>& points() const { return points_; }
    const DataPoint& at(std::size_t i) const { return points_[i]; }

    bool contains(std::int64_t id) const { return by_id_.count(id) != 0; }
    /// Point lookup by id; throws NotFoundError for unknown ids.
    const DataPoint& by_id(std::int64_t id) const;

private:
    std::vector<DataPoint> points_;
    int feature_dim_;
    int num_classes_;
    std::unordered_map<std::int64_t, std::size_t> by_id_;
};

/// Gaussian blobs: one uniform class center in [-1, 1]^dim, points = center +
/// 0.3 * unit noise. Labels are assigned in balanced contiguous blocks in
/// generation order (point i gets floor(i * num_classes / num_points)), ids are
/// 0..n-1, erase_prob starts at 0. Deterministic in the seed.
Dataset gen_synthetic(std::size_t num_points, int feature_dim, int num_classes,
                      std::uint64_t seed);

/// Reads the canonical CSV layout: header "id,label,erase_prob,f_1,...,f_d"
/// followed by one row per point. The feature dimension comes from the header, the
/// class count is max label + 1. Raises FormatError with the offending line number
/// for ragged rows, unparsable numbers, duplicate ids, or an empty table.
Dataset load_csv(const std::string& path);

/// Writes the same layout with full round-trip precision.
void save_csv(const Dataset& dataset, const std::string& path);

/// Returns a copy of the dataset with erase probabilities assigned by scenario
/// group. Membership is determined by shuffling the point indices with the
/// scenario seed and cutting the shuffled order into contiguous blocks sized by
/// the group fractions; point order, ids, features and labels are untouched.
/// Fractions must sum to 1 within 1e-9 and probabilities must lie in [0, 1].
Dataset assign_probs(const Dataset& dataset, const ScenarioConfig& scenario);

/// Seeded shuffle then split: the first floor(n * test_fraction) shuffled points
/// become the test set, the rest the training set. The pair is (train, test).
std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed);

} // namespace sisa
