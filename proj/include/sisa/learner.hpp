#pragma once

#include <cstdint>
#include <vector>

#include "sisa/dataset.hpp"

namespace sisa {

enum class Arch : std::uint8_t { Logistic = 0, Mlp = 1 };

/// Architecture selector. hidden_width is ignored for Logistic and must be >= 1
/// for Mlp (one tanh hidden layer).
struct ArchSpec {
    Arch arch = Arch::Logistic;
    int hidden_width = 0;
};

/// Flat parameter vector: for each layer in forward order, the weight matrix
/// (out x in, row-major) followed by its bias. Logistic has one layer
/// (classes x dim); Mlp has (hidden x dim) then (classes x hidden).
struct ModelParams {
    ArchSpec arch;
    int feature_dim = 0;
    int num_classes = 0;
    std::vector<double> weights;

    std::size_t expected_size() const;
    /// Bit-level equality of the weight vectors (and matching shape).
    bool bit_identical(const ModelParams& other) const;
};

struct TrainConfig {
    int base_epochs = 1;      // e', epochs a monolithic model would get
    double learning_rate = 0.1;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

/// Incremental-presentation schedule: R slices, each trained for e/R epochs where
/// e = 2R/(R+1) * e' keeps total sample presentations at e' * D.
struct SliceSchedule {
    int num_slices = 1;
    double total_epochs = 0.0;
    std::vector<double> epochs_per_slice;
};

SliceSchedule epoch_calibration(int base_epochs, int num_slices);

/// Seeded initialization: weights uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)]
/// per layer, biases zero.
ModelParams init_params(const ArchSpec& arch, int feature_dim, int num_classes,
                        std::uint64_t seed);

struct TrainResult {
    ModelParams params;
    std::uint64_t samples_processed = 0;
};

/// Mini-batch SGD with softmax cross-entropy, fixed learning rate, no momentum.
/// Exactly floor(epochs * |data|) samples are consumed: full passes shuffle the
/// point order with a stream keyed on (cfg.seed, stream_tag, epoch index), and the
/// final partial pass truncates deterministically. Two calls with identical inputs
/// produce bit-identical parameters. A non-finite batch loss raises NumericalError
/// naming the batch index.
TrainResult train(const ModelParams& params, const std::vector<const DataPoint*>& data,
                  double epochs, const TrainConfig& cfg, std::uint64_t stream_tag);

/// Class-probability vector (softmax outputs, sums to 1).
std::vector<double> predict(const ModelParams& params, const std::vector<double>& features);

/// Mean cross-entropy loss of the model on a single point.
double point_loss(const ModelParams& params, const DataPoint& point);
/// Analytic gradient of point_loss with respect to every parameter.
std::vector<double> loss_gradient(const ModelParams& params, const DataPoint& point);
/// Central finite differences of point_loss, step h on each coordinate.
std::vector<double> finite_diff_gradient(const ModelParams& params, const DataPoint& point,
                                         double step);
/// |a - b| / max(1, |a|, |b|).
double relative_error(double a, double b);

struct GradCheckResult {
    bool ok = false;
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    explicit operator bool() const { return ok; }
};

/// Compares analytic and finite-difference gradients coordinate-wise (step 1e-6);
/// fails if any relative error exceeds the tolerance and reports the worst offender.
GradCheckResult gradient_check(const ModelParams& params, const DataPoint& point,
                               double tolerance);

} // namespace sisa
