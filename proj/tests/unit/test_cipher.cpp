#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "doctest.h"

#include "feam/cipher.hpp"
#include "feam/io.hpp"

using feam::BoolMatrix;
using feam::DetPrng;
using feam::Direction;
using feam::SessionSecrets;
namespace gf2 = feam::gf2;
namespace io = feam::io;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

std::string sha256_hex(const std::vector<std::uint8_t>& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    return io::to_hex({digest, len});
}

} // namespace

TEST_CASE("seeded key generation is pinned byte for byte") {
    DetPrng prng(42);
    const SessionSecrets s = feam::keygen_session(prng, 64);
    CHECK(s.k.row_words(0)[0] == 0xBDD732262FEB6E95ull);
    CHECK(s.v.row_words(0)[0] == 0x533054EB566050BEull);
    CHECK(gf2::mul(s.k, s.k_inv) == BoolMatrix::identity(64));

    auto payload = io::matrix_payload(s.k);
    const auto v_payload = io::matrix_payload(s.v);
    payload.insert(payload.end(), v_payload.begin(), v_payload.end());
    CHECK(sha256_hex(payload) ==
          "2a911a0adb75849759740ac4611a8f960cfa03cdfd8e355492c611de2945ae04");
}

TEST_CASE("streams round-trip across dimensions and lengths") {
    DetPrng prng(1);
    for (std::size_t n : {2, 4, 8, 16, 64}) {
        const SessionSecrets s = feam::keygen_session(prng, n);
        const std::size_t bs = io::block_size(n);
        for (std::size_t len : {std::size_t{0}, std::size_t{1}, bs - 1, bs,
                                bs + 1, 3 * bs + 5}) {
            std::vector<std::uint8_t> msg(len);
            for (auto& b : msg) b = std::uint8_t(prng.next());
            const auto ct = feam::encrypt_stream(s, msg);
            CHECK(feam::decrypt_stream(s, ct) == msg);
        }
    }
}

TEST_CASE("ciphertext framing: header, block count, padding block") {
    DetPrng prng(2);
    const SessionSecrets s = feam::keygen_session(prng, 8);
    const std::size_t bs = io::block_size(8); // 8 bytes, 64 bits per block

    const auto empty_ct = feam::encrypt_stream(s, {});
    CHECK(empty_ct.size() == 4 + bs); // padding alone still emits a block
    CHECK(empty_ct[0] == 8);          // little-endian dimension header
    CHECK(empty_ct[1] == 0);
    CHECK(empty_ct[2] == 0);
    CHECK(empty_ct[3] == 0);

    // A message filling blocks exactly forces one extra padding block.
    const auto full_ct = feam::encrypt_stream(s, std::vector<std::uint8_t>(bs));
    CHECK(full_ct.size() == 4 + 2 * bs);

    // One bit over a block boundary also needs the next block.
    const auto over_ct =
        feam::encrypt_stream(s, std::vector<std::uint8_t>(bs + 1));
    CHECK(over_ct.size() == 4 + 2 * bs);
}

TEST_CASE("incremental state matches the closed-form block transform") {
    DetPrng prng(3);
    const std::size_t n = 8;
    const SessionSecrets s = feam::keygen_session(prng, n);
    feam::CipherState enc(s, Direction::encrypt);

    for (std::uint64_t i = 1; i <= 32; ++i) {
        const BoolMatrix p = gf2::random_matrix(prng, n);
        const BoolMatrix got = feam::encrypt_block(enc, p);

        const BoolMatrix mask =
            gf2::mul(gf2::mul(s.k, s.v), gf2::pow(s.k, i));
        const BoolMatrix want = gf2::add(
            gf2::mul(gf2::mul(s.k, gf2::add(p, mask)), gf2::pow(s.k, n + i)),
            mask);
        CHECK(got == want);

        feam::CipherState dec(s, Direction::decrypt);
        // Advance the fresh decrypt state to block i by replaying junk.
        for (std::uint64_t skip = 1; skip < i; ++skip)
            feam::decrypt_block(dec, BoolMatrix(n));
        CHECK(feam::decrypt_block(dec, got) == p);
    }
}

TEST_CASE("using a state against its direction is a logic error") {
    DetPrng prng(4);
    const SessionSecrets s = feam::keygen_session(prng, 4);
    feam::CipherState enc(s, Direction::encrypt);
    CHECK_THROWS_AS(feam::decrypt_block(enc, BoolMatrix(4)), std::logic_error);
    feam::CipherState dec(s, Direction::decrypt);
    CHECK_THROWS_AS(feam::encrypt_block(dec, BoolMatrix(4)), std::logic_error);
}

TEST_CASE("an identity session key passes blocks through unchanged") {
    // With K = I every mask contribution cancels: C = (P + V) + V = P.
    DetPrng prng(5);
    const SessionSecrets s = feam::secrets_from_matrices(
        BoolMatrix::identity(8), gf2::random_matrix(prng, 8));
    feam::CipherState enc(s, Direction::encrypt);
    for (int t = 0; t < 4; ++t) {
        const BoolMatrix p = gf2::random_matrix(prng, 8);
        CHECK(feam::encrypt_block(enc, p) == p);
    }
}

TEST_CASE("decrypt_stream rejects malformed ciphertexts") {
    DetPrng prng(6);
    const SessionSecrets s = feam::keygen_session(prng, 8);
    const auto ct = feam::encrypt_stream(s, bytes_of("attack at dawn"));

    // Header too short.
    CHECK_THROWS_AS(
        feam::decrypt_stream(s, std::vector<std::uint8_t>{8, 0, 0}),
        feam::BadLength);

    // Torn block: payload not a multiple of the block size.
    auto torn = ct;
    torn.pop_back();
    CHECK_THROWS_AS(feam::decrypt_stream(s, torn), feam::BadLength);

    // Empty payload: not even the mandatory padding block.
    CHECK_THROWS_AS(
        feam::decrypt_stream(s, std::vector<std::uint8_t>{8, 0, 0, 0}),
        feam::BadLength);

    // Dimension header that can't be a real matrix size.
    std::vector<std::uint8_t> zero_n{0, 0, 0, 0, 1, 2, 3};
    CHECK_THROWS_AS(feam::decrypt_stream(s, zero_n), feam::BadLength);

    // Dimension mismatch against the session key is a caller bug.
    DetPrng prng16(7);
    const SessionSecrets s16 = feam::keygen_session(prng16, 16);
    CHECK_THROWS_AS(feam::decrypt_stream(s16, ct), std::invalid_argument);
}

TEST_CASE("a stream whose padding block is stripped fails to parse") {
    DetPrng prng(8);
    const SessionSecrets s = feam::keygen_session(prng, 8);
    const std::size_t bs = io::block_size(8);

    // An all-zero message exactly one block long: the second block holds
    // only the padding marker, so removing it leaves no set bit at all.
    const auto ct = feam::encrypt_stream(s, std::vector<std::uint8_t>(bs));
    REQUIRE(ct.size() == 4 + 2 * bs);
    std::vector<std::uint8_t> clipped(ct.begin(), ct.end() - long(bs));
    CHECK_THROWS_AS(feam::decrypt_stream(s, clipped), feam::BadPadding);
}

TEST_CASE("key distribution round-trips through the transport form") {
    DetPrng prng(9);
    int done = 0;
    while (done < 100) {
        const std::size_t n = 2 + done % 15;
        const feam::MasterKey master = feam::MasterKey::create(prng, n);
        const SessionSecrets s = feam::keygen_session(prng, n);
        const feam::DistributionMessage msg = feam::distribute(master, s);
        const SessionSecrets back = feam::recover(master, msg);
        CHECK(back.k == s.k);
        CHECK(back.v == s.v);
        CHECK(back.k_inv == s.k_inv);
        ++done;
    }
}

TEST_CASE("distribution degenerates gracefully at the identity master") {
    DetPrng prng(10);
    const feam::MasterKey master =
        feam::MasterKey::from_matrix(BoolMatrix::identity(8));
    const SessionSecrets s = feam::keygen_session(prng, 8);
    const feam::DistributionMessage msg = feam::distribute(master, s);
    // K* = K0 K^-1 K0 collapses to K^-1 when K0 = I.
    CHECK(msg.k_star == s.k_inv);
    CHECK(msg.v_star == s.v);
    const SessionSecrets back = feam::recover(master, msg);
    CHECK(back.k == s.k);
    CHECK(back.v == s.v);
}

TEST_CASE("a corrupted transport key is rejected on recovery") {
    DetPrng prng(11);
    const feam::MasterKey master = feam::MasterKey::create(prng, 8);
    const SessionSecrets s = feam::keygen_session(prng, 8);
    feam::DistributionMessage msg = feam::distribute(master, s);
    msg.k_star = BoolMatrix(8); // zero matrix: transported key is singular
    CHECK_THROWS_AS(feam::recover(master, msg), gf2::NotInvertibleError);
}

TEST_CASE("singular master keys are refused outright") {
    CHECK_THROWS_AS(feam::MasterKey::from_matrix(BoolMatrix(8)),
                    gf2::NotInvertibleError);
}

TEST_CASE("session files round-trip and reject trailing bytes") {
    DetPrng prng(12);
    const SessionSecrets s = feam::keygen_session(prng, 16);
    auto blob = feam::session_to_bytes(s);
    const SessionSecrets back = feam::session_from_bytes(blob);
    CHECK(back.k == s.k);
    CHECK(back.v == s.v);
    CHECK(back.k_inv == s.k_inv);

    blob.push_back(0);
    CHECK_THROWS_AS(feam::session_from_bytes(blob), io::FormatError);
}

TEST_CASE("keygen succeeds even at the smallest dimension") {
    // n = 1 rejects half of all draws; the retry cap absorbs that.
    DetPrng prng(0xDEAD);
    const SessionSecrets s = feam::keygen_session(prng, 1);
    CHECK(s.k.get(0, 0)); // the only invertible 1x1 matrix
}
