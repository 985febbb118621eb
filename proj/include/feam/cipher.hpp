#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "feam/gf2.hpp"
#include "feam/prng.hpp"

namespace feam {

using gf2::BoolMatrix;

// Session key generation ran out of candidates before finding an invertible
// matrix. With the default retry budget this is astronomically unlikely.
struct ExhaustedError : std::runtime_error {
    ExhaustedError() : std::runtime_error("Exhausted") {}
};

// Ciphertext framing is wrong: short header, partial block, or no blocks.
struct BadLength : std::runtime_error {
    BadLength() : std::runtime_error("BadLength") {}
};

// Pad removal failed: all-zero tail or message length not a whole byte count.
// Decryption has no integrity check, so a corrupted ciphertext may instead
// decode to wrong bytes without tripping this.
struct BadPadding : std::runtime_error {
    BadPadding() : std::runtime_error("BadPadding") {}
};

enum class Direction { encrypt, decrypt };

// Long-lived shared secret K0; session keys travel wrapped in it.
struct MasterKey {
    BoolMatrix k0;
    BoolMatrix k0_inv;

    static MasterKey create(DetPrng& prng, std::size_t n);
    // Throws NotInvertibleError when k0 is singular.
    static MasterKey from_matrix(const BoolMatrix& k0);
};

// Per-session key pair: invertible K (with cached inverse) and initial
// matrix V, which may be anything including singular or zero.
struct SessionSecrets {
    BoolMatrix k;
    BoolMatrix k_inv;
    BoolMatrix v;
};

// What the sender transmits: K* = K0·K^-1·K0 and V* = K0·V·K0.
struct DistributionMessage {
    BoolMatrix k_star;
    BoolMatrix v_star;
};

// Draws K (invertible) then V, in that order; the order is load-bearing for
// anything replaying a seed. Throws ExhaustedError if no invertible K turns
// up within the retry budget.
SessionSecrets keygen_session(DetPrng& prng, std::size_t n);

// Builds SessionSecrets from explicit matrices; throws NotInvertibleError
// when k is singular.
SessionSecrets secrets_from_matrices(const BoolMatrix& k, const BoolMatrix& v);

DistributionMessage distribute(const MasterKey& master, const SessionSecrets& s);
// Unwraps the message with the master key. Throws NotInvertibleError when the
// transported K^-1 is singular (a corrupted or tampered message).
SessionSecrets recover(const MasterKey& master, const DistributionMessage& msg);

// Incremental per-block state. The recurrence needs K^(n+i) and K·V·K^i at
// block i; both advance by one multiplication per block instead of a fresh
// pow. Strictly sequential: one owner, blocks in index order.
struct CipherState {
    CipherState(const SessionSecrets& s, Direction dir);

    Direction direction;
    std::uint64_t i; // index of the next block, starting at 1
    BoolMatrix k;
    BoolMatrix k_inv;
    BoolMatrix e;     // K^(n+i)
    BoolMatrix m;     // K·V·K^i
    BoolMatrix e_inv; // K^-(n+i)
};

// C_i = K·(P_i + K·V·K^i)·K^(n+i) + K·V·K^i, then the state advances.
BoolMatrix encrypt_block(CipherState& st, const BoolMatrix& p);
// P_i = K^-1·(C_i + K·V·K^i)·K^-(n+i) + K·V·K^i, then the state advances.
BoolMatrix decrypt_block(CipherState& st, const BoolMatrix& c);

// Byte framing: 4-byte little-endian n header, then ceil(n^2/8)-byte blocks.
// The plaintext bit stream (LSB-first per byte) is padded with a single 1 bit
// then 0s to the block boundary; input ending exactly on a boundary gains one
// full padding block. Each call runs a fresh CipherState from index 1.
std::vector<std::uint8_t> encrypt_stream(const SessionSecrets& s,
                                         std::span<const std::uint8_t> plain);
// Throws BadLength on framing errors, BadPadding when pad removal fails, and
// std::invalid_argument when the stream dimension does not match the session.
std::vector<std::uint8_t> decrypt_stream(const SessionSecrets& s,
                                         std::span<const std::uint8_t> cipher);

// Session key file: a K record followed by a V record.
std::vector<std::uint8_t> session_to_bytes(const SessionSecrets& s);
SessionSecrets session_from_bytes(std::span<const std::uint8_t> data);

} // namespace feam
