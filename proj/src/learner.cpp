#include "sisa/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "sisa/errors.hpp"
#include "sisa/rng.hpp"

namespace sisa {

namespace {

void validate_arch(const ArchSpec& arch, int feature_dim, int num_classes) {
    if (feature_dim < 1) throw ArgumentError("feature_dim must be >= 1");
    if (num_classes < 2) throw ArgumentError("num_classes must be >= 2");
    if (arch.arch == Arch::Mlp && arch.hidden_width < 1)
        throw ArgumentError("mlp hidden_width must be >= 1");
}

void validate_cfg(const TrainConfig& cfg) {
    if (cfg.base_epochs < 1) throw ArgumentError("base_epochs must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw ArgumentError("learning_rate must be > 0");
    if (cfg.batch_size < 1) throw ArgumentError("batch_size must be >= 1");
}

// Per-sample forward pass and optional gradient accumulation. Gradients are added
// into grad (same layout as weights) scaled by `scale`; returns the sample loss.
double forward_backward(const ModelParams& m, const double* x, int label, double* grad,
                        double scale, std::vector<double>& scratch) {
    const int d = m.feature_dim;
    const int c = m.num_classes;
    const double* w = m.weights.data();

    if (m.arch.arch == Arch::Logistic) {
        scratch.resize(static_cast<std::size_t>(c));
        double* logits = scratch.data();
        const double* b = w + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
        for (int i = 0; i < c; ++i) {
            double acc = b[i];
            const double* row = w + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
            for (int j = 0; j < d; ++j) acc += row[j] * x[j];
            logits[i] = acc;
        }
        double mx = *std::max_element(logits, logits + c);
        double z = 0.0;
        for (int i = 0; i < c; ++i) {
            logits[i] = std::exp(logits[i] - mx);
            z += logits[i];
        }
        double loss = -std::log(logits[label] / z);
        if (grad) {
            double* gw = grad;
            double* gb = grad + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
            for (int i = 0; i < c; ++i) {
                double gl = (logits[i] / z - (i == label ? 1.0 : 0.0)) * scale;
                double* grow = gw + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
                for (int j = 0; j < d; ++j) grow[j] += gl * x[j];
                gb[i] += gl;
            }
        }
        return loss;
    }

    const int h = m.arch.hidden_width;
    scratch.resize(static_cast<std::size_t>(h) + static_cast<std::size_t>(c));
    double* hidden = scratch.data();
    double* logits = scratch.data() + h;
    const double* w1 = w;
    const double* b1 = w + static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
    const double* w2 = b1 + h;
    const double* b2 = w2 + static_cast<std::size_t>(c) * static_cast<std::size_t>(h);
    for (int i = 0; i < h; ++i) {
        double acc = b1[i];
        const double* row = w1 + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
        for (int j = 0; j < d; ++j) acc += row[j] * x[j];
        hidden[i] = std::tanh(acc);
    }
    for (int i = 0; i < c; ++i) {
        double acc = b2[i];
        const double* row = w2 + static_cast<std::size_t>(i) * static_cast<std::size_t>(h);
        for (int j = 0; j < h; ++j) acc += row[j] * hidden[j];
        logits[i] = acc;
    }
    double mx = *std::max_element(logits, logits + c);
    double z = 0.0;
    for (int i = 0; i < c; ++i) {
        logits[i] = std::exp(logits[i] - mx);
        z += logits[i];
    }
    double loss = -std::log(logits[label] / z);
    if (grad) {
        double* g1 = grad;
        double* gb1 = grad + static_cast<std::size_t>(h) * static_cast<std::size_t>(d);
        double* g2 = gb1 + h;
        double* gb2 = g2 + static_cast<std::size_t>(c) * static_cast<std::size_t>(h);
        for (int i = 0; i < c; ++i) {
            double gl = (logits[i] / z - (i == label ? 1.0 : 0.0)) * scale;
            double* grow = g2 + static_cast<std::size_t>(i) * static_cast<std::size_t>(h);
            for (int j = 0; j < h; ++j) grow[j] += gl * hidden[j];
            gb2[i] += gl;
        }
        for (int j = 0; j < h; ++j) {
            double acc = 0.0;
            for (int i = 0; i < c; ++i) {
                double gl = (logits[i] / z - (i == label ? 1.0 : 0.0)) * scale;
                acc += gl * w2[static_cast<std::size_t>(i) * static_cast<std::size_t>(h) + j];
            }
            double gh = acc * (1.0 - hidden[j] * hidden[j]);
            double* grow = g1 + static_cast<std::size_t>(j) * static_cast<std::size_t>(d);
            for (int k = 0; k < d; ++k) grow[k] += gh * x[k];
            gb1[j] += gh;
        }
    }
    return loss;
}

} // namespace

std::size_t ModelParams::expected_size() const {
    std::size_t d = static_cast<std::size_t>(feature_dim);
    std::size_t c = static_cast<std::size_t>(num_classes);
    if (arch.arch == Arch::Logistic) return c * d + c;
    std::size_t h = static_cast<std::size_t>(arch.hidden_width);
    return h * d + h + c * h + c;
}

bool ModelParams::bit_identical(const ModelParams& other) const {
    if (arch.arch != other.arch.arch || arch.hidden_width != other.arch.hidden_width ||
        feature_dim != other.feature_dim || num_classes != other.num_classes ||
        weights.size() != other.weights.size())
        return false;
    if (weights.empty()) return true;
    return std::memcmp(weights.data(), other.weights.data(),
                       weights.size() * sizeof(double)) == 0;
}

SliceSchedule epoch_calibration(int base_epochs, int num_slices) {
    if (base_epochs < 1) throw ArgumentError("base_epochs must be >= 1");
    if (num_slices < 1) throw ArgumentError("num_slices must be >= 1");
    SliceSchedule s;
    s.num_slices = num_slices;
    double R = static_cast<double>(num_slices);
    s.total_epochs = 2.0 * R / (R + 1.0) * static_cast<double>(base_epochs);
    s.epochs_per_slice.assign(static_cast<std::size_t>(num_slices), s.total_epochs / R);
    return s;
}

ModelParams init_params(const ArchSpec& arch, int feature_dim, int num_classes,
                        std::uint64_t seed) {
    validate_arch(arch, feature_dim, num_classes);
    ModelParams m;
    m.arch = arch;
    m.feature_dim = feature_dim;
    m.num_classes = num_classes;
    m.weights.assign(m.expected_size(), 0.0);

    DetRng rng = DetRng::keyed({seed, 0x494e4954ULL /* INIT */});
    auto fill_layer = [&rng](double* w, int out, int in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(in));
        for (std::size_t i = 0; i < static_cast<std::size_t>(out) * static_cast<std::size_t>(in);
             ++i)
            w[i] = rng.next_uniform(-bound, bound);
        // bias entries follow the matrix and stay zero
    };
    if (arch.arch == Arch::Logistic) {
        fill_layer(m.weights.data(), num_classes, feature_dim);
    } else {
        int h = arch.hidden_width;
        fill_layer(m.weights.data(), h, feature_dim);
        fill_layer(m.weights.data() + static_cast<std::size_t>(h) * feature_dim + h, num_classes,
                   h);
    }
    return m;
}

TrainResult train(const ModelParams& params, const std::vector<const DataPoint*>& data,
                  double epochs, const TrainConfig& cfg, std::uint64_t stream_tag) {
    validate_cfg(cfg);
    validate_arch(params.arch, params.feature_dim, params.num_classes);
    if (params.weights.size() != params.expected_size())
        throw ArgumentError("parameter vector has wrong length");
    if (epochs < 0.0) throw ArgumentError("epochs must be >= 0");

    TrainResult out{params, 0};
    std::size_t n = data.size();
    std::uint64_t total =
        static_cast<std::uint64_t>(std::floor(epochs * static_cast<double>(n)));
    if (n == 0 || total == 0) return out;

    for (const DataPoint* p : data)
        if (static_cast<int>(p->features.size()) != params.feature_dim ||
            p->label < 0 || p->label >= params.num_classes)
            throw ArgumentError("training point id " + std::to_string(p->id) +
                                " does not match the model shape");

    std::vector<std::size_t> order(n);
    std::vector<double> grad(params.weights.size());
    std::vector<double> scratch;
    std::uint64_t done = 0;
    std::uint64_t batch_index = 0;
    for (std::uint64_t epoch = 0; done < total; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        DetRng rng = DetRng::keyed({cfg.seed, 0x45504f4348ULL /* EPOCH */, stream_tag, epoch});
        rng.shuffle(order);
        std::size_t pos = 0;
        while (pos < n && done < total) {
            std::size_t take = std::min<std::uint64_t>(
                {static_cast<std::uint64_t>(cfg.batch_size),
                 static_cast<std::uint64_t>(n - pos), total - done});
            std::fill(grad.begin(), grad.end(), 0.0);
            double loss = 0.0;
            double scale = 1.0 / static_cast<double>(take);
            for (std::size_t i = 0; i < take; ++i) {
                const DataPoint* p = data[order[pos + i]];
                loss += scale * forward_backward(out.params, p->features.data(), p->label,
                                                 grad.data(), scale, scratch);
            }
            if (!std::isfinite(loss))
                throw NumericalError("non-finite loss in batch " + std::to_string(batch_index));
            for (std::size_t i = 0; i < grad.size(); ++i)
                out.params.weights[i] -= cfg.learning_rate * grad[i];
            pos += take;
            done += take;
            ++batch_index;
        }
    }
    out.samples_processed = done;
    return out;
}

std::vector<double> predict(const ModelParams& params, const std::vector<double>& features) {
    validate_arch(params.arch, params.feature_dim, params.num_classes);
    if (static_cast<int>(features.size()) != params.feature_dim)
        throw ArgumentError("feature vector has length " + std::to_string(features.size()) +
                            ", model expects " + std::to_string(params.feature_dim));
    // Run the forward pass through the shared kernel with label 0 and no gradient.
    std::vector<double> scratch;
    forward_backward(params, features.data(), 0, nullptr, 0.0, scratch);
    int c = params.num_classes;
    const double* logits = scratch.data() + (scratch.size() - static_cast<std::size_t>(c));
    double z = std::accumulate(logits, logits + c, 0.0);
    std::vector<double> probs(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) probs[static_cast<std::size_t>(i)] = logits[i] / z;
    return probs;
}

double point_loss(const ModelParams& params, const DataPoint& point) {
    std::vector<double> scratch;
    return forward_backward(params, point.features.data(), point.label, nullptr, 0.0, scratch);
}

std::vector<double> loss_gradient(const ModelParams& params, const DataPoint& point) {
    std::vector<double> grad(params.weights.size(), 0.0);
    std::vector<double> scratch;
    forward_backward(params, point.features.data(), point.label, grad.data(), 1.0, scratch);
    return grad;
}

std::vector<double> finite_diff_gradient(const ModelParams& params, const DataPoint& point,
                                         double step) {
    ModelParams probe = params;
    std::vector<double> grad(params.weights.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        double orig = probe.weights[i];
        probe.weights[i] = orig + step;
        double up = point_loss(probe, point);
        probe.weights[i] = orig - step;
        double down = point_loss(probe, point);
        probe.weights[i] = orig;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

double relative_error(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

GradCheckResult gradient_check(const ModelParams& params, const DataPoint& point,
                               double tolerance) {
    std::vector<double> analytic = loss_gradient(params, point);
    std::vector<double> numeric = finite_diff_gradient(params, point, 1e-6);
    GradCheckResult res;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double err = relative_error(analytic[i], numeric[i]);
        if (err > res.max_rel_error) {
            res.max_rel_error = err;
            res.worst_index = i;
        }
    }
    res.ok = res.max_rel_error <= tolerance;
    return res;
}

} // namespace sisa
