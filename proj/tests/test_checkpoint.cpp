#include <cstdint>
#include <vector>

#include <doctest.h>

#include "sisa/checkpoint_io.hpp"
#include "sisa/errors.hpp"
#include "sisa/learner.hpp"
#include "sisa/rng.hpp"
#include "test_util.hpp"

using namespace sisa;

namespace {

Checkpoint make_checkpoint(DetRng& rng, bool mlp) {
    ArchSpec arch = mlp ? ArchSpec{Arch::Mlp, 1 + static_cast<int>(rng.next_below(6))}
                        : ArchSpec{Arch::Logistic, 0};
    int dim = 1 + static_cast<int>(rng.next_below(5));
    int classes = 2 + static_cast<int>(rng.next_below(3));
    Checkpoint c;
    c.shard = static_cast<int>(rng.next_below(10));
    c.slice_after = static_cast<int>(rng.next_below(8));
    c.samples_seen = rng.next_u64() % 1000000;
    c.params = init_params(arch, dim, classes, rng.next_u64());
    for (double& w : c.params.weights) w = rng.next_gaussian();
    return c;
}

bool same_checkpoint(const Checkpoint& a, const Checkpoint& b) {
    return a.shard == b.shard && a.slice_after == b.slice_after &&
           a.samples_seen == b.samples_seen && a.params.bit_identical(b.params);
}

} // namespace

TEST_CASE("checkpoint encode/decode round trips bit for bit") {
    DetRng rng = DetRng::keyed({101});
    for (int it = 0; it < 50; ++it) {
        Checkpoint c = make_checkpoint(rng, it % 2 == 1);
        Checkpoint back = decode_checkpoint(encode_checkpoint(c));
        CHECK(same_checkpoint(c, back));
    }
}

TEST_CASE("checkpoint file round trip and naming") {
    TempDir tmp("ckpt");
    DetRng rng = DetRng::keyed({102});
    Checkpoint c = make_checkpoint(rng, false);
    c.shard = 3;
    c.slice_after = 2;

    CHECK(checkpoint_filename(3, 2) == "shard3_after2.ckpt");
    save_checkpoint(tmp.path.string(), c);
    Checkpoint back = load_checkpoint(tmp.path.string(), 3, 2);
    CHECK(same_checkpoint(c, back));

    CHECK_THROWS_AS(load_checkpoint(tmp.path.string(), 4, 2), NotFoundError);

    // a file stored under the wrong name is rejected on load
    std::filesystem::copy_file(tmp.path / "shard3_after2.ckpt", tmp.path / "shard5_after2.ckpt");
    CHECK_THROWS_AS(load_checkpoint(tmp.path.string(), 5, 2), IntegrityError);
}

TEST_CASE("decode rejects structural damage with specific errors") {
    DetRng rng = DetRng::keyed({103});
    Checkpoint c = make_checkpoint(rng, true);
    std::vector<std::uint8_t> blob = encode_checkpoint(c);

    SUBCASE("bad magic") {
        blob[0] ^= 0xff;
        CHECK_THROWS_WITH_AS(decode_checkpoint(blob), doctest::Contains("magic"),
                             IntegrityError);
    }
    SUBCASE("unknown version") {
        blob[4] = 0x7f;
        CHECK_THROWS_AS(decode_checkpoint(blob), VersionError);
    }
    SUBCASE("unknown architecture tag") {
        blob[14] = 9;
        CHECK_THROWS_AS(decode_checkpoint(blob), IntegrityError);
    }
    SUBCASE("truncation at every boundary") {
        for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{10},
                                std::size_t{42}, blob.size() - 5, blob.size() - 1}) {
            std::vector<std::uint8_t> cut(blob.begin(), blob.begin() + len);
            CHECK_THROWS_AS(decode_checkpoint(cut), Error);
        }
    }
    SUBCASE("payload corruption trips the checksum") {
        blob[blob.size() - 9] ^= 0x01; // inside the last weight
        CHECK_THROWS_WITH_AS(decode_checkpoint(blob), doctest::Contains("checksum"),
                             IntegrityError);
    }
    SUBCASE("checksum corruption is caught") {
        blob[blob.size() - 1] ^= 0x01;
        CHECK_THROWS_WITH_AS(decode_checkpoint(blob), doctest::Contains("checksum"),
                             IntegrityError);
    }
    SUBCASE("trailing garbage is rejected") {
        blob.push_back(0);
        CHECK_THROWS_AS(decode_checkpoint(blob), IntegrityError);
    }
}

TEST_CASE("encode rejects malformed parameter vectors") {
    DetRng rng = DetRng::keyed({104});
    Checkpoint c = make_checkpoint(rng, false);
    c.params.weights.pop_back();
    CHECK_THROWS_AS(encode_checkpoint(c), ArgumentError);
}
