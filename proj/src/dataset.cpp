#include "sisa/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sisa/errors.hpp"
#include "sisa/rng.hpp"

namespace sisa {

Dataset::Dataset(std::vector<DataPoint> points, int feature_dim, int num_classes)
    : points_(std::move(points)), feature_dim_(feature_dim), num_classes_(num_classes) {
    if (points_.empty()) throw ArgumentError("dataset must contain at least one point");
    if (feature_dim_ < 1) throw ArgumentError("feature_dim must be >= 1");
    if (num_classes_ < 2) throw ArgumentError("num_classes must be >= 2");
    by_id_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const DataPoint& p = points_[i];
        if (static_cast<int>(p.features.size()) != feature_dim_)
            throw ArgumentError("point id " + std::to_string(p.id) + " has " +
                                std::to_string(p.features.size()) + " features, expected " +
                                std::to_string(feature_dim_));
        if (p.label < 0 || p.label >= num_classes_)
            throw ArgumentError("point id " + std::to_string(p.id) + " has label " +
                                std::to_string(p.label) + " outside [0, " +
                                std::to_string(num_classes_) + ")");
        if (!(p.erase_prob >= 0.0 && p.erase_prob <= 1.0))
            throw ArgumentError("point id " + std::to_string(p.id) +
                                " has erase_prob outside [0, 1]");
        if (!by_id_.emplace(p.id, i).second)
            throw ArgumentError("duplicate point id " + std::to_string(p.id));
    }
}

const DataPoint& Dataset::by_id(std::int64_t id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw NotFoundError("unknown point id " + std::to_string(id));
    return points_[it->second];
}

Dataset gen_synthetic(std::size_t num_points, int feature_dim, int num_classes,
                      std::uint64_t seed) {
    if (num_classes < 2) throw ArgumentError("num_classes must be >= 2");
    if (feature_dim < 1) throw ArgumentError("feature_dim must be >= 1");
    if (num_points < static_cast<std::size_t>(num_classes))
        throw ArgumentError("num_points must be >= num_classes");

    DetRng rng = DetRng::keyed({seed, 0x47454eULL /* GEN */});
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(num_classes));
    for (auto& c : centers) {
        c.resize(static_cast<std::size_t>(feature_dim));
        for (double& v : c) v = rng.next_uniform(-1.0, 1.0);
    }

    std::vector<DataPoint> points(num_points);
    for (std::size_t i = 0; i < num_points; ++i) {
        int label = static_cast<int>(i * static_cast<std::size_t>(num_classes) / num_points);
        DataPoint& p = points[i];
        p.id = static_cast<std::int64_t>(i);
        p.label = label;
        p.erase_prob = 0.0;
        p.features.resize(static_cast<std::size_t>(feature_dim));
        for (int f = 0; f < feature_dim; ++f)
            p.features[static_cast<std::size_t>(f)] =
                centers[static_cast<std::size_t>(label)][static_cast<std::size_t>(f)] +
                0.3 * rng.next_gaussian();
    }
    return Dataset(std::move(points), feature_dim, num_classes);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError("line " + std::to_string(line_no) + ": cannot parse " + what +
                          " from '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError("line " + std::to_string(line_no) + ": cannot parse " + what +
                          " from '" + s + "'");
    return v;
}

} // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path + "': empty file, header required");
    std::vector<std::string> header = split_fields(line);
    if (header.size() < 4 || header[0] != "id" || header[1] != "label" ||
        header[2] != "erase_prob")
        throw FormatError("'" + path + "': header must be id,label,erase_prob,f_1,...,f_d");
    int feature_dim = static_cast<int>(header.size()) - 3;

    std::vector<DataPoint> points;
    std::unordered_map<std::int64_t, std::size_t> seen;
    int max_label = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f = split_fields(line);
        if (f.size() != header.size())
            throw FormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(f.size()));
        DataPoint p;
        p.id = parse_int(f[0], line_no, "id");
        std::int64_t label = parse_int(f[1], line_no, "label");
        if (label < 0) throw FormatError("line " + std::to_string(line_no) + ": negative label");
        p.label = static_cast<int>(label);
        p.erase_prob = parse_double(f[2], line_no, "erase_prob");
        if (!(p.erase_prob >= 0.0 && p.erase_prob <= 1.0))
            throw FormatError("line " + std::to_string(line_no) + ": erase_prob outside [0, 1]");
        p.features.resize(static_cast<std::size_t>(feature_dim));
        for (int d = 0; d < feature_dim; ++d)
            p.features[static_cast<std::size_t>(d)] =
                parse_double(f[static_cast<std::size_t>(d) + 3], line_no, "feature");
        auto ins = seen.emplace(p.id, line_no);
        if (!ins.second)
            throw FormatError("line " + std::to_string(line_no) + ": duplicate id " +
                              std::to_string(p.id) + " (first seen at line " +
                              std::to_string(ins.first->second) + ")");
        max_label = std::max(max_label, p.label);
        points.push_back(std::move(p));
    }
    if (points.empty()) throw FormatError("'" + path + "': empty dataset (header only)");
    int num_classes = std::max(max_label + 1, 2);
    return Dataset(std::move(points), feature_dim, num_classes);
}

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << "id,label,erase_prob";
    for (int d = 1; d <= dataset.feature_dim(); ++d) out << ",f_" << d;
    out << "\n";
    char buf[64];
    for (const DataPoint& p : dataset.points()) {
        out << p.id << ',' << p.label << ',';
        std::snprintf(buf, sizeof buf, "%.17g", p.erase_prob);
        out << buf;
        for (double v : p.features) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << "\n";
    }
    if (!out) throw FormatError("write to '" + path + "' failed");
}

Dataset assign_probs(const Dataset& dataset, const ScenarioConfig& scenario) {
    if (scenario.groups.empty()) throw ArgumentError("scenario has no groups");
    double frac_sum = 0.0;
    for (const ScenarioGroup& g : scenario.groups) {
        if (!(g.fraction >= 0.0)) throw ArgumentError("scenario fraction must be >= 0");
        if (!(g.erase_prob >= 0.0 && g.erase_prob <= 1.0))
            throw ArgumentError("scenario erase_prob outside [0, 1]");
        frac_sum += g.fraction;
    }
    if (std::fabs(frac_sum - 1.0) > 1e-9)
        throw ArgumentError("scenario fractions sum to " + std::to_string(frac_sum) +
                            ", expected 1");

    std::size_t n = dataset.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    DetRng rng = DetRng::keyed({scenario.seed, 0x50524f42ULL /* PROB */});
    rng.shuffle(order);

    std::vector<DataPoint> points = dataset.points();
    double cum = 0.0;
    std::size_t start = 0;
    for (std::size_t g = 0; g < scenario.groups.size(); ++g) {
        cum += scenario.groups[g].fraction;
        std::size_t end = (g + 1 == scenario.groups.size())
                              ? n
                              : static_cast<std::size_t>(std::llround(cum * static_cast<double>(n)));
        end = std::min(std::max(end, start), n);
        for (std::size_t i = start; i < end; ++i)
            points[order[i]].erase_prob = scenario.groups[g].erase_prob;
        start = end;
    }
    return Dataset(std::move(points), dataset.feature_dim(), dataset.num_classes());
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ArgumentError("test_fraction must lie in (0, 1)");
    std::size_t n = dataset.size();
    std::size_t n_test =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction));
    if (n_test == 0 || n_test == n)
        throw ArgumentError("test_fraction leaves an empty split for n = " + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    DetRng rng = DetRng::keyed({seed, 0x53504c49ULL /* SPLI */});
    rng.shuffle(order);

    std::vector<DataPoint> test_pts, train_pts;
    test_pts.reserve(n_test);
    train_pts.reserve(n - n_test);
    for (std::size_t i = 0; i < n; ++i) {
        const DataPoint& p = dataset.at(order[i]);
        (i < n_test ? test_pts : train_pts).push_back(p);
    }
    Dataset train(std::move(train_pts), dataset.feature_dim(), dataset.num_classes());
    Dataset test(std::move(test_pts), dataset.feature_dim(), dataset.num_classes());
    return {std::move(train), std::move(test)};
}

} // namespace sisa
