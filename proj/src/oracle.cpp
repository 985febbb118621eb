#include "feam/oracle.hpp"

#include <random>
#include <sstream>

#include "feam/io.hpp"

namespace feam {

BoolMatrix Session::query_encrypt(const BoolMatrix& p) {
    const std::uint64_t idx = state_.i;
    auto c = encrypt_block(state_, p);
    transcript_.push_back({idx, p, c});
    return c;
}

BoolMatrix Session::query_decrypt(const BoolMatrix& c) {
    const std::uint64_t idx = state_.i;
    auto p = decrypt_block(state_, c);
    transcript_.push_back({idx, c, p});
    return p;
}

Oracle::Oracle(OracleConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.n != cfg_.master.k0.dim())
        throw std::invalid_argument("oracle dimension does not match master key");
    if (cfg_.system_seed) entropy_.emplace(*cfg_.system_seed);
}

std::uint64_t Oracle::entropy_next() {
    if (entropy_) return entropy_->next();
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

Session Oracle::open_session(Direction dir, std::optional<std::uint64_t> tamper_seed) {
    if (tamper_seed && cfg_.mode != OracleMode::insecure) throw TamperRejected();

    std::optional<SessionSecrets> secrets;
    if (cfg_.mode == OracleMode::resumable && resumable_secrets_) {
        // The restart flaw: the second stage comes back up with the previous
        // session's secrets and the block index rewound to 1.
        secrets = *resumable_secrets_;
    } else {
        const std::uint64_t seed = tamper_seed ? *tamper_seed : entropy_next();
        DetPrng prng(seed);
        auto sender_side = keygen_session(prng, cfg_.n);
        // Full handshake: wrap under the master key and unwrap again, so the
        // session uses exactly what a receiver would reconstruct.
        secrets = recover(cfg_.master, distribute(cfg_.master, sender_side));
    }
    if (cfg_.mode == OracleMode::resumable) resumable_secrets_ = secrets;
    return Session(next_id_++, dir, *std::move(secrets));
}

std::string format_transcript(const Session& s) {
    std::ostringstream out;
    const char dir = s.direction() == Direction::encrypt ? 'e' : 'd';
    for (const auto& q : s.transcript()) {
        out << "session=" << s.id() << " i=" << q.index << " dir=" << dir
            << " in=" << io::to_hex(io::pack_block(q.input))
            << " out=" << io::to_hex(io::pack_block(q.output)) << '\n';
    }
    return out.str();
}

} // namespace feam
