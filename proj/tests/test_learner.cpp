#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "sisa/dataset.hpp"
#include "sisa/errors.hpp"
#include "sisa/learner.hpp"
#include "sisa/orchestrator.hpp"
#include "sisa/partition.hpp"
#include "sisa/rng.hpp"

using namespace sisa;

namespace {

std::vector<const DataPoint*> as_refs(const Dataset& d) {
    std::vector<const DataPoint*> out;
    for (const DataPoint& p : d.points()) out.push_back(&p);
    return out;
}

DataPoint random_point(DetRng& rng, int dim, int classes) {
    DataPoint p;
    p.id = 0;
    for (int i = 0; i < dim; ++i) p.features.push_back(rng.next_gaussian());
    p.label = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(classes)));
    return p;
}

} // namespace

TEST_CASE("init_params: shapes, ranges, determinism") {
    ModelParams logi = init_params({Arch::Logistic, 0}, 3, 2, 5);
    CHECK(logi.weights.size() == 8); // 3*2 weights + 2 biases
    CHECK(logi.expected_size() == 8);

    ModelParams mlp = init_params({Arch::Mlp, 4}, 3, 2, 5);
    CHECK(mlp.weights.size() == 3 * 4 + 4 + 4 * 2 + 2);

    CHECK(logi.bit_identical(init_params({Arch::Logistic, 0}, 3, 2, 5)));
    CHECK_FALSE(logi.bit_identical(init_params({Arch::Logistic, 0}, 3, 2, 6)));
    CHECK_FALSE(logi.bit_identical(mlp));

    // weight rows bounded by 1/sqrt(fan_in), biases exactly zero
    double bound = 1.0 / std::sqrt(3.0);
    for (int c = 0; c < 2; ++c)
        for (int f = 0; f < 3; ++f) CHECK(std::abs(logi.weights[c * 3 + f]) <= bound);
    CHECK(logi.weights[6] == 0.0);
    CHECK(logi.weights[7] == 0.0);

    CHECK_THROWS_AS(init_params({Arch::Mlp, 0}, 3, 2, 5), ArgumentError);
    CHECK_THROWS_AS(init_params({Arch::Logistic, 0}, 0, 2, 5), ArgumentError);
}

TEST_CASE("epoch_calibration follows the recalibration rule") {
    SliceSchedule flat = epoch_calibration(10, 1);
    CHECK(flat.total_epochs == doctest::Approx(10.0).epsilon(1e-12));
    REQUIRE(flat.epochs_per_slice.size() == 1);
    CHECK(flat.epochs_per_slice[0] == doctest::Approx(10.0).epsilon(1e-12));

    SliceSchedule s3 = epoch_calibration(10, 3);
    CHECK(s3.total_epochs == doctest::Approx(15.0).epsilon(1e-12));
    REQUIRE(s3.epochs_per_slice.size() == 3);
    for (double e : s3.epochs_per_slice) CHECK(e == doctest::Approx(5.0).epsilon(1e-12));

    SliceSchedule big = epoch_calibration(10, 1000);
    CHECK(big.total_epochs > 19.9);
    CHECK(big.total_epochs < 20.0);

    double sum = 0.0;
    for (double e : big.epochs_per_slice) sum += e;
    CHECK(sum == doctest::Approx(big.total_epochs).epsilon(1e-9));

    CHECK_THROWS_AS(epoch_calibration(0, 3), ArgumentError);
    CHECK_THROWS_AS(epoch_calibration(10, 0), ArgumentError);
}

TEST_CASE("train: sample accounting and no-op edges") {
    Dataset d = gen_synthetic(1000, 3, 2, 21);
    ModelParams w0 = init_params({Arch::Logistic, 0}, 3, 2, 1);
    TrainConfig cfg{3, 0.1, 32, 77};

    TrainResult r = train(w0, as_refs(d), 3.0, cfg, 1);
    CHECK(r.samples_processed == 3000);

    TrainResult zero = train(w0, as_refs(d), 0.0, cfg, 1);
    CHECK(zero.samples_processed == 0);
    CHECK(zero.params.bit_identical(w0));

    TrainResult empty = train(w0, {}, 3.0, cfg, 1);
    CHECK(empty.samples_processed == 0);
    CHECK(empty.params.bit_identical(w0));

    // fractional epochs truncate at floor(epochs * n)
    TrainResult frac = train(w0, as_refs(d), 2.5, cfg, 1);
    CHECK(frac.samples_processed == 2500);

    DetRng rng = DetRng::keyed({31});
    for (int it = 0; it < 10; ++it) {
        double epochs = rng.next_real() * 4.0;
        std::size_t n = 1 + rng.next_below(50);
        Dataset small = gen_synthetic(std::max<std::size_t>(n, 2), 3, 2, it);
        TrainResult rr = train(w0, as_refs(small), epochs, cfg, 9);
        CHECK(rr.samples_processed ==
              static_cast<std::uint64_t>(std::floor(epochs * static_cast<double>(small.size()))));
    }
}

TEST_CASE("train: bit determinism and stream separation") {
    Dataset d = gen_synthetic(120, 4, 3, 5);
    ModelParams w0 = init_params({Arch::Mlp, 6}, 4, 3, 2);
    TrainConfig cfg{2, 0.2, 16, 99};

    TrainResult a = train(w0, as_refs(d), 1.7, cfg, 4);
    TrainResult b = train(w0, as_refs(d), 1.7, cfg, 4);
    CHECK(a.params.bit_identical(b.params));

    TrainResult other_tag = train(w0, as_refs(d), 1.7, cfg, 5);
    CHECK_FALSE(a.params.bit_identical(other_tag.params));

    TrainConfig cfg2 = cfg;
    cfg2.seed = 100;
    TrainResult other_seed = train(w0, as_refs(d), 1.7, cfg2, 4);
    CHECK_FALSE(a.params.bit_identical(other_seed.params));

    for (double w : a.params.weights) CHECK(std::isfinite(w));
}

TEST_CASE("train: errors on dimension mismatch and numerical blowup") {
    Dataset d = gen_synthetic(40, 3, 2, 6);
    ModelParams wrong_dim = init_params({Arch::Logistic, 0}, 5, 2, 1);
    TrainConfig cfg{1, 0.1, 8, 1};
    CHECK_THROWS_AS(train(wrong_dim, as_refs(d), 1.0, cfg, 0), ArgumentError);

    ModelParams w0 = init_params({Arch::Logistic, 0}, 3, 2, 1);
    TrainConfig hot{1, 1e308, 8, 1};
    CHECK_THROWS_WITH_AS(train(w0, as_refs(d), 4.0, hot, 0), doctest::Contains("batch"),
                         NumericalError);
}

TEST_CASE("train actually learns the blobs task") {
    Dataset d = gen_synthetic(2000, 10, 4, 1);
    auto [train_set, test_set] = split_train_test(d, 0.25, 3);
    PartitionPlan mono = uniform_partition(train_set, 1, 1, 1);
    SisaModel model = sisa_train(train_set, mono, {Arch::Logistic, 0}, {20, 0.5, 32, 7},
                                 Aggregation::MajorityLabel);
    double acc = evaluate(model, test_set);
    CHECK(acc > 0.8); // frozen floor for the reference learner
}

TEST_CASE("predict: softmax contract") {
    ModelParams zero = init_params({Arch::Logistic, 0}, 3, 4, 1);
    std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
    std::vector<double> probs = predict(zero, {0.3, -1.0, 2.0});
    REQUIRE(probs.size() == 4);
    for (double p : probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

    DetRng rng = DetRng::keyed({17});
    for (int it = 0; it < 20; ++it) {
        ModelParams w = init_params({Arch::Mlp, 5}, 3, 4, rng.next_u64());
        std::vector<double> x = {rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        std::vector<double> p = predict(w, x);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // argmax of the probabilities equals argmax of the linear logits
    ModelParams hand = init_params({Arch::Logistic, 0}, 2, 3, 1);
    hand.weights = {1.0, 0.0,  // class 0 row
                    0.0, 2.0,  // class 1 row
                    -1.0, 0.0, // class 2 row
                    0.1, 0.0, 0.0}; // biases
    std::vector<double> x = {1.0, 3.0};
    std::vector<double> logits = {1.0 * 1.0 + 0.1, 2.0 * 3.0, -1.0};
    std::vector<double> pr = predict(hand, x);
    auto arg = [](const std::vector<double>& v) {
        return std::distance(v.begin(), std::max_element(v.begin(), v.end()));
    };
    CHECK(arg(pr) == arg(logits));

    CHECK_THROWS_AS(predict(hand, {1.0}), ArgumentError);
}

TEST_CASE("gradient_check validates both architectures") {
    DetRng rng = DetRng::keyed({23});
    for (int it = 0; it < 10; ++it) {
        ModelParams logi = init_params({Arch::Logistic, 0}, 4, 3, rng.next_u64());
        DataPoint p = random_point(rng, 4, 3);
        CHECK(static_cast<bool>(gradient_check(logi, p, 1e-5)));

        ModelParams mlp = init_params({Arch::Mlp, 8}, 4, 3, rng.next_u64());
        CHECK(static_cast<bool>(gradient_check(mlp, p, 1e-4)));
    }
}

TEST_CASE("gradient negative control: a flipped sign is caught") {
    DetRng rng = DetRng::keyed({29});
    ModelParams w = init_params({Arch::Logistic, 0}, 4, 3, 3);
    DataPoint p = random_point(rng, 4, 3);

    std::vector<double> analytic = loss_gradient(w, p);
    std::vector<double> numeric = finite_diff_gradient(w, p, 1e-6);
    REQUIRE(analytic.size() == numeric.size());

    std::size_t worst = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        if (std::abs(analytic[i]) > std::abs(analytic[worst])) worst = i;
    REQUIRE(std::abs(analytic[worst]) > 1e-2);

    double honest = relative_error(analytic[worst], numeric[worst]);
    double corrupted = relative_error(-analytic[worst], numeric[worst]);
    CHECK(honest <= 1e-5);
    CHECK(corrupted > 1e-5);
}
