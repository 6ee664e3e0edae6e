#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sisa/learner.hpp"

namespace sisa {

/// Parameter snapshot taken after a shard has trained on its first `slice_after`
/// slices (0 = fresh initialization).
struct Checkpoint {
    int shard = 0;
    int slice_after = 0;
    ModelParams params;
    std::uint64_t samples_seen = 0;
};

/// On-disk layout (little-endian throughout):
///   "SISA" | u16 version | u32 shard | u32 slice_after | u8 arch tag |
///   u32 feature_dim | u32 num_classes | u32 hidden_width (0 for logistic) |
///   u64 samples_seen | u64 weight count | f64 weights... | u32 CRC32
/// The CRC covers every preceding byte. Readers raise IntegrityError on bad
/// magic, checksum mismatch, truncation, trailing bytes, or inconsistent shape,
/// and VersionError on an unsupported version.
inline constexpr std::uint16_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void write_checkpoint_file(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint_file(const std::string& path);

/// Store layout: <dir>/shard<k>_after<r>.ckpt.
std::string checkpoint_filename(int shard, int slice_after);
void save_checkpoint(const std::string& store_dir, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& store_dir, int shard, int slice_after);

/// CRC-32 (IEEE reflected, as used by zip and friends).
std::uint32_t crc32(const std::uint8_t* data, std::size_t len);

} // namespace sisa
