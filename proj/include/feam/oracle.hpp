#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "feam/cipher.hpp"

namespace feam {

// A seed was supplied to an oracle that does not honor seed control.
struct TamperRejected : std::runtime_error {
    TamperRejected() : std::runtime_error("TamperRejected") {}
};

// insecure: session secrets come from a deterministic generator whose seed a
//   caller may supply — the flawed deployment where sessions can be forced to
//   share keys. Without a supplied seed, the oracle draws one itself.
// secure: fresh secrets every session; supplying a seed is rejected.
// resumable: a restarted session silently reuses the previous session's
//   secrets with the block index reset — key reuse with no seed control.
enum class OracleMode { insecure, secure, resumable };

struct OracleConfig {
    std::size_t n;
    OracleMode mode;
    MasterKey master;
    // Seeds the oracle's own entropy draws so whole campaigns replay
    // bit-for-bit; leave empty for nondeterministic operation.
    std::optional<std::uint64_t> system_seed;
};

struct QueryRecord {
    std::uint64_t index; // block index, 1-based, consecutive
    BoolMatrix input;
    BoolMatrix output;
};

// One encryption or decryption session. Single-owner, strictly sequential;
// every query is appended to the transcript.
class Session {
public:
    std::uint64_t id() const { return id_; }
    Direction direction() const { return state_.direction; }
    const std::vector<QueryRecord>& transcript() const { return transcript_; }
    // White-box access for harnesses that compare against planted secrets.
    const SessionSecrets& secrets() const { return secrets_; }

    BoolMatrix query_encrypt(const BoolMatrix& p);
    BoolMatrix query_decrypt(const BoolMatrix& c);

private:
    friend class Oracle;
    Session(std::uint64_t id, Direction dir, SessionSecrets s)
        : id_(id), secrets_(std::move(s)), state_(secrets_, dir) {}

    std::uint64_t id_;
    SessionSecrets secrets_;
    CipherState state_;
    std::vector<QueryRecord> transcript_;
};

// Simulated deployment of the cryptosystem. Every session runs the full key
// handshake: secrets are generated sender-side, wrapped under the master key,
// and unwrapped receiver-side, so the simulation stays protocol-complete.
class Oracle {
public:
    explicit Oracle(OracleConfig cfg);

    const OracleConfig& config() const { return cfg_; }

    // Throws TamperRejected if a seed is supplied in any mode but insecure.
    Session open_session(Direction dir, std::optional<std::uint64_t> tamper_seed = {});

private:
    std::uint64_t entropy_next();

    OracleConfig cfg_;
    std::optional<DetPrng> entropy_;
    std::uint64_t next_id_ = 1;
    std::optional<SessionSecrets> resumable_secrets_;
};

// One line per query: `session=<id> i=<index> dir=<e|d> in=<hex> out=<hex>`.
std::string format_transcript(const Session& s);

} // namespace feam
