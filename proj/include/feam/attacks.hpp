#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feam/oracle.hpp"

namespace feam::attacks {

// Four chosen blocks across two sessions: both sessions see the same
// differential delta at two consecutive indices. With shared (K,V) that pins
// the session key via dC_i^-1 * dC_{i+1} = K.
struct ChosenPlaintextPlan {
    std::uint64_t i; // first of the two consecutive target indices
    BoolMatrix p1_i;
    BoolMatrix p1_next;
    BoolMatrix p2_i;
    BoolMatrix p2_next;
    BoolMatrix delta; // invertible by construction
};

// Draw order (delta, then the two session-1 blocks) is fixed so seeded runs
// replay exactly. Throws ExhaustedError if no invertible delta turns up.
ChosenPlaintextPlan make_plan(DetPrng& prng, std::size_t n, std::uint64_t i = 1);

// K = (dC_i)^-1 * dC_{i+1}; empty when dC_i is singular, which means the
// chosen differential was singular or the sessions did not share secrets.
std::optional<BoolMatrix> recover_session_key(const BoolMatrix& dc_i, const BoolMatrix& dc_next);

// Decryption-oracle dual: with a constant chosen ciphertext differential,
// dP_{i+1} = dP_i * K^-1, so K falls out of the plaintext differentials.
// Empty when dP_i or the implied K^-1 is singular.
std::optional<BoolMatrix> recover_session_key_cca(const BoolMatrix& dp_i, const BoolMatrix& dp_next);

// One observed (plaintext, ciphertext) pair at a known block index.
struct BlockRecord {
    std::uint64_t index;
    BoolMatrix p;
    BoolMatrix c;
};

// Closed-form V from two records at distinct indices of one session:
// V = (R_i + R_j) * (I + K^(j-i))^-1 * K^-(n+i). Empty when I + K^(j-i) is
// singular (always, for K = I). Throws NotInvertibleError on singular k.
std::optional<BoolMatrix> recover_v_direct(const BoolMatrix& k, const BlockRecord& ri,
                                           const BlockRecord& rj);

struct VSolveResult {
    enum class Status { unique, underdetermined, inconsistent };
    Status status;
    std::optional<BoolMatrix> v; // present iff status == unique
};

// General path: each record lifts to n^2 linear equations in the entries of
// V via vec/Kronecker, all records are stacked, and the system is solved.
// Underdetermined means more records (or a different K) are needed;
// inconsistent means the records do not come from one (K,V).
VSolveResult recover_v_sylvester(const BoolMatrix& k, std::span<const BlockRecord> records);

enum class VPath { direct, fallback, failed };

struct AttackTranscript {
    std::optional<BoolMatrix> recovered_k;
    std::optional<BoolMatrix> recovered_v;
    VPath v_path = VPath::failed;
    std::uint64_t chosen_bits = 0; // chosen plaintext/ciphertext bits consumed
    int sessions_used = 0;
    // Differential identity re-check of the recovered K alone (no V needed).
    bool k_verified = false;
    // Full verdict: recovered (K,V) reproduces every observed block.
    bool verified = false;
    std::string failure; // empty on full success, otherwise a reason tag
};

struct AttackOptions {
    // Escalation cap when the stacked V solve stays underdetermined: each
    // extra step submits one more chosen block to each session (2n^2 more
    // chosen bits) and adds the new index's equations.
    int max_extra_records = 4;
};

// Chosen-plaintext campaign against an encryption oracle. `tamper_seed` is
// used only against an insecure-mode oracle; other modes are attacked
// seedless (the resumable flaw needs no seed, and a secure oracle would
// reject one). `rng` drives the attacker's own block choices.
AttackTranscript run_cpa(Oracle& oracle, DetPrng& rng,
                         std::optional<std::uint64_t> tamper_seed,
                         const AttackOptions& opt = {});

// Chosen-ciphertext campaign against a decryption oracle; same shape.
AttackTranscript run_cca(Oracle& oracle, DetPrng& rng,
                         std::optional<std::uint64_t> tamper_seed,
                         const AttackOptions& opt = {});

// key=value lines consumed by the CLI report writer and the test harness.
std::string transcript_to_text(const AttackTranscript& t);

} // namespace feam::attacks
