#include "feam/io.hpp"

#include <cctype>
#include <fstream>

namespace feam::io {

namespace {

constexpr char kMagic[4] = {'G', 'F', '2', 'M'};
constexpr std::uint8_t kVersion = 1;

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::size_t row_bytes(std::size_t n) { return (n + 7) / 8; }

} // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view text) {
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    int hi = -1;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const int d = hex_digit(c);
        if (d < 0) throw FormatError("invalid hex character");
        if (hi < 0) {
            hi = d;
        } else {
            out.push_back(static_cast<std::uint8_t>(hi << 4 | d));
            hi = -1;
        }
    }
    if (hi >= 0) throw FormatError("odd number of hex digits");
    return out;
}

std::size_t payload_size(std::size_t n) { return n * row_bytes(n); }

std::vector<std::uint8_t> matrix_payload(const gf2::BoolMatrix& m) {
    const std::size_t n = m.dim();
    const std::size_t rb = row_bytes(n);
    std::vector<std::uint8_t> out(payload_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto words = m.row_words(i);
        for (std::size_t b = 0; b < rb; ++b)
            out[i * rb + b] = static_cast<std::uint8_t>(words[b >> 3] >> ((b & 7) * 8));
    }
    return out;
}

gf2::BoolMatrix matrix_from_payload(std::span<const std::uint8_t> payload, std::size_t n) {
    if (n < 1 || n > gf2::kMaxDim) throw FormatError("matrix dimension out of range");
    const std::size_t rb = row_bytes(n);
    if (payload.size() != payload_size(n)) throw FormatError("matrix payload length mismatch");
    gf2::BoolMatrix m(n);
    const std::uint64_t mask = m.tail_mask();
    for (std::size_t i = 0; i < n; ++i) {
        auto words = m.row_words(i);
        for (std::size_t b = 0; b < rb; ++b)
            words[b >> 3] |= std::uint64_t{payload[i * rb + b]} << ((b & 7) * 8);
        if ((words[m.words_per_row() - 1] & ~mask) != 0)
            throw FormatError("matrix record has nonzero padding bits");
    }
    return m;
}

std::vector<std::uint8_t> matrix_to_bytes(const gf2::BoolMatrix& m) {
    const std::uint32_t n = static_cast<std::uint32_t>(m.dim());
    std::vector<std::uint8_t> out;
    out.reserve(9 + payload_size(m.dim()));
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(n >> s));
    auto payload = matrix_payload(m);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

gf2::BoolMatrix read_matrix(std::span<const std::uint8_t> data, std::size_t& offset) {
    if (offset > data.size() || data.size() - offset < 9)
        throw FormatError("truncated matrix record header");
    const std::uint8_t* p = data.data() + offset;
    if (!std::equal(kMagic, kMagic + 4, p)) throw FormatError("bad matrix record magic");
    if (p[4] != kVersion) throw FormatError("unsupported matrix record version");
    std::uint32_t n = 0;
    for (int b = 0; b < 4; ++b) n |= std::uint32_t{p[5 + b]} << (b * 8);
    if (n < 1 || n > gf2::kMaxDim) throw FormatError("matrix dimension out of range");
    const std::size_t need = payload_size(n);
    if (data.size() - offset - 9 < need) throw FormatError("truncated matrix record payload");
    auto m = matrix_from_payload(data.subspan(offset + 9, need), n);
    offset += 9 + need;
    return m;
}

gf2::BoolMatrix matrix_from_bytes(std::span<const std::uint8_t> data) {
    std::size_t offset = 0;
    auto m = read_matrix(data, offset);
    if (offset != data.size()) throw FormatError("trailing bytes after matrix record");
    return m;
}

std::string matrix_to_hex(const gf2::BoolMatrix& m) {
    auto bytes = matrix_to_bytes(m);
    return to_hex(bytes);
}

gf2::BoolMatrix matrix_from_hex(std::string_view text) {
    auto bytes = from_hex(text);
    return matrix_from_bytes(bytes);
}

std::size_t block_size(std::size_t n) { return (n * n + 7) / 8; }

std::vector<std::uint8_t> pack_block(const gf2::BoolMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<std::uint8_t> out(block_size(n));
    for (std::size_t k = 0; k < n * n; ++k)
        if (m.get(k / n, k % n)) out[k >> 3] |= std::uint8_t(1u << (k & 7));
    return out;
}

gf2::BoolMatrix unpack_block(std::span<const std::uint8_t> bytes, std::size_t n) {
    if (bytes.size() != block_size(n)) throw std::invalid_argument("block byte count mismatch");
    gf2::BoolMatrix m(n);
    for (std::size_t k = 0; k < n * n; ++k)
        if ((bytes[k >> 3] >> (k & 7)) & 1u) m.set(k / n, k % n, true);
    return m;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read error: " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write error: " + path.string());
}

} // namespace feam::io
