#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "feam/gf2.hpp"

namespace feam::io {

// Malformed serialized data: bad magic, bad version, truncation, stray bits.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

std::string to_hex(std::span<const std::uint8_t> data);
// Accepts upper/lower case and surrounding ASCII whitespace; throws
// FormatError on odd length or non-hex characters.
std::vector<std::uint8_t> from_hex(std::string_view text);

// Matrix record layout: magic "GF2M", one version byte (1), 4-byte
// little-endian dimension n, then the payload: n rows of ceil(n/8) bytes,
// LSB-first within each byte, padding bits zero.
std::size_t payload_size(std::size_t n);
std::vector<std::uint8_t> matrix_payload(const gf2::BoolMatrix& m);
gf2::BoolMatrix matrix_from_payload(std::span<const std::uint8_t> payload, std::size_t n);

std::vector<std::uint8_t> matrix_to_bytes(const gf2::BoolMatrix& m);
// Parses one record starting at `offset` and advances it past the record;
// lets callers walk files that concatenate several records.
gf2::BoolMatrix read_matrix(std::span<const std::uint8_t> data, std::size_t& offset);
// Exactly one record covering the whole buffer.
gf2::BoolMatrix matrix_from_bytes(std::span<const std::uint8_t> data);

std::string matrix_to_hex(const gf2::BoolMatrix& m);
gf2::BoolMatrix matrix_from_hex(std::string_view text);

// Stream block layout: the n^2 matrix bits in row-major order (bit k is
// element (k/n, k mod n)), LSB-first, packed into ceil(n^2/8) bytes. For n a
// multiple of 8 this coincides with the matrix record payload.
std::size_t block_size(std::size_t n);
std::vector<std::uint8_t> pack_block(const gf2::BoolMatrix& m);
// `bytes` must be exactly block_size(n); unused high bits are ignored.
gf2::BoolMatrix unpack_block(std::span<const std::uint8_t> bytes, std::size_t n);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

} // namespace feam::io
