#include "sisa/checkpoint_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "sisa/errors.hpp"

namespace sisa {

namespace {

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

    std::uint16_t u16() { return static_cast<std::uint16_t>(u(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
    std::uint64_t u64() { return u(8); }
    std::uint8_t u8() { return static_cast<std::uint8_t>(u(1)); }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    void raw(std::uint8_t* dst, std::size_t n) {
        need(n);
        std::memcpy(dst, data_ + pos_, n);
        pos_ += n;
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return len_ - pos_; }

private:
    std::uint64_t u(std::size_t bytes) {
        need(bytes);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < bytes; ++i)
            v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += bytes;
        return v;
    }
    void need(std::size_t n) const {
        if (len_ - pos_ < n) throw IntegrityError("checkpoint truncated");
    }
    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

} // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
    static const std::array<std::uint32_t, 256> table = make_crc_table();
    std::uint32_t c = 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xff] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    const ModelParams& m = ckpt.params;
    if (m.weights.size() != m.expected_size())
        throw ArgumentError("checkpoint parameter vector has wrong length");
    std::vector<std::uint8_t> out;
    out.reserve(43 + m.weights.size() * 8);
    out.push_back('S');
    out.push_back('I');
    out.push_back('S');
    out.push_back('A');
    put_u16(out, kCheckpointVersion);
    put_u32(out, static_cast<std::uint32_t>(ckpt.shard));
    put_u32(out, static_cast<std::uint32_t>(ckpt.slice_after));
    out.push_back(static_cast<std::uint8_t>(m.arch.arch));
    put_u32(out, static_cast<std::uint32_t>(m.feature_dim));
    put_u32(out, static_cast<std::uint32_t>(m.num_classes));
    put_u32(out, static_cast<std::uint32_t>(m.arch.arch == Arch::Mlp ? m.arch.hidden_width : 0));
    put_u64(out, ckpt.samples_seen);
    put_u64(out, static_cast<std::uint64_t>(m.weights.size()));
    for (double w : m.weights) {
        std::uint64_t bits;
        std::memcpy(&bits, &w, sizeof bits);
        put_u64(out, bits);
    }
    put_u32(out, crc32(out.data(), out.size()));
    return out;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes.data(), bytes.size());
    std::uint8_t magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, "SISA", 4) != 0) throw IntegrityError("bad checkpoint magic");
    std::uint16_t version = r.u16();
    if (version != kCheckpointVersion)
        throw VersionError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint ckpt;
    ckpt.shard = static_cast<int>(r.u32());
    ckpt.slice_after = static_cast<int>(r.u32());
    std::uint8_t arch_tag = r.u8();
    if (arch_tag > 1)
        throw IntegrityError("unknown architecture tag " + std::to_string(arch_tag));
    ckpt.params.arch.arch = static_cast<Arch>(arch_tag);
    ckpt.params.feature_dim = static_cast<int>(r.u32());
    ckpt.params.num_classes = static_cast<int>(r.u32());
    ckpt.params.arch.hidden_width = static_cast<int>(r.u32());
    ckpt.samples_seen = r.u64();
    std::uint64_t count = r.u64();
    if (ckpt.params.feature_dim < 1 || ckpt.params.num_classes < 2 ||
        (ckpt.params.arch.arch == Arch::Mlp && ckpt.params.arch.hidden_width < 1) ||
        (ckpt.params.arch.arch == Arch::Logistic && ckpt.params.arch.hidden_width != 0))
        throw IntegrityError("inconsistent checkpoint shape fields");
    if (count != ckpt.params.expected_size())
        throw IntegrityError("weight count does not match the declared shape");
    if (r.remaining() != count * 8 + 4)
        throw IntegrityError("checkpoint length does not match its contents");
    ckpt.params.weights.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) ckpt.params.weights[i] = r.f64();
    std::uint32_t stored = r.u32();
    std::uint32_t actual = crc32(bytes.data(), bytes.size() - 4);
    if (stored != actual) throw IntegrityError("checkpoint checksum mismatch");
    return ckpt;
}

void write_checkpoint_file(const std::string& path, const Checkpoint& ckpt) {
    std::vector<std::uint8_t> bytes = encode_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IntegrityError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IntegrityError("write to '" + path + "' failed");
}

Checkpoint read_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open checkpoint '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

std::string checkpoint_filename(int shard, int slice_after) {
    return "shard" + std::to_string(shard) + "_after" + std::to_string(slice_after) + ".ckpt";
}

void save_checkpoint(const std::string& store_dir, const Checkpoint& ckpt) {
    write_checkpoint_file(store_dir + "/" + checkpoint_filename(ckpt.shard, ckpt.slice_after),
                          ckpt);
}

Checkpoint load_checkpoint(const std::string& store_dir, int shard, int slice_after) {
    Checkpoint ckpt =
        read_checkpoint_file(store_dir + "/" + checkpoint_filename(shard, slice_after));
    if (ckpt.shard != shard || ckpt.slice_after != slice_after)
        throw IntegrityError("checkpoint header does not match its filename");
    return ckpt;
}

} // namespace sisa
