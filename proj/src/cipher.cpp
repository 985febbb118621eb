#include "feam/cipher.hpp"

#include "feam/io.hpp"

namespace feam {

namespace {

void advance(CipherState& st) {
    st.e = gf2::mul(st.e, st.k);
    st.m = gf2::mul(st.m, st.k);
    st.e_inv = gf2::mul(st.k_inv, st.e_inv);
    ++st.i;
}

bool stream_bit(std::span<const std::uint8_t> bytes, std::size_t t) {
    return (bytes[t >> 3] >> (t & 7)) & 1u;
}

} // namespace

MasterKey MasterKey::create(DetPrng& prng, std::size_t n) {
    auto k0 = gf2::random_invertible(prng, n);
    if (!k0) throw ExhaustedError();
    return {*k0, *gf2::inverse(*k0)};
}

MasterKey MasterKey::from_matrix(const BoolMatrix& k0) {
    auto inv = gf2::inverse(k0);
    if (!inv) throw gf2::NotInvertibleError();
    return {k0, *std::move(inv)};
}

SessionSecrets keygen_session(DetPrng& prng, std::size_t n) {
    auto k = gf2::random_invertible(prng, n);
    if (!k) throw ExhaustedError();
    auto v = gf2::random_matrix(prng, n);
    return {*k, *gf2::inverse(*k), std::move(v)};
}

SessionSecrets secrets_from_matrices(const BoolMatrix& k, const BoolMatrix& v) {
    if (k.dim() != v.dim()) throw std::invalid_argument("session matrices differ in dimension");
    auto inv = gf2::inverse(k);
    if (!inv) throw gf2::NotInvertibleError();
    return {k, *std::move(inv), v};
}

DistributionMessage distribute(const MasterKey& master, const SessionSecrets& s) {
    if (master.k0.dim() != s.k.dim())
        throw std::invalid_argument("master and session dimensions differ");
    return {gf2::mul(gf2::mul(master.k0, s.k_inv), master.k0),
            gf2::mul(gf2::mul(master.k0, s.v), master.k0)};
}

SessionSecrets recover(const MasterKey& master, const DistributionMessage& msg) {
    if (master.k0.dim() != msg.k_star.dim() || msg.k_star.dim() != msg.v_star.dim())
        throw std::invalid_argument("master and message dimensions differ");
    auto k_inv = gf2::mul(gf2::mul(master.k0_inv, msg.k_star), master.k0_inv);
    auto v = gf2::mul(gf2::mul(master.k0_inv, msg.v_star), master.k0_inv);
    auto k = gf2::inverse(k_inv);
    if (!k) throw gf2::NotInvertibleError();
    return {*std::move(k), std::move(k_inv), std::move(v)};
}

CipherState::CipherState(const SessionSecrets& s, Direction dir)
    : direction(dir),
      i(1),
      k(s.k),
      k_inv(s.k_inv),
      e(gf2::pow(s.k, s.k.dim() + 1)),
      m(gf2::mul(gf2::mul(s.k, s.v), s.k)),
      e_inv(gf2::pow(s.k_inv, s.k.dim() + 1)) {}

BoolMatrix encrypt_block(CipherState& st, const BoolMatrix& p) {
    if (st.direction != Direction::encrypt)
        throw std::logic_error("cipher state was opened for decryption");
    auto c = gf2::add(gf2::mul(gf2::mul(st.k, gf2::add(p, st.m)), st.e), st.m);
    advance(st);
    return c;
}

BoolMatrix decrypt_block(CipherState& st, const BoolMatrix& c) {
    if (st.direction != Direction::decrypt)
        throw std::logic_error("cipher state was opened for encryption");
    auto p = gf2::add(gf2::mul(gf2::mul(st.k_inv, gf2::add(c, st.m)), st.e_inv), st.m);
    advance(st);
    return p;
}

std::vector<std::uint8_t> encrypt_stream(const SessionSecrets& s,
                                         std::span<const std::uint8_t> plain) {
    const std::size_t n = s.k.dim();
    const std::size_t bpb = n * n;
    const std::size_t msg_bits = plain.size() * 8;
    // +1 for the pad marker; rounding up then guarantees at least one block.
    const std::size_t nblocks = (msg_bits + 1 + bpb - 1) / bpb;

    std::vector<std::uint8_t> out;
    out.reserve(4 + nblocks * io::block_size(n));
    for (int sh = 0; sh < 32; sh += 8)
        out.push_back(static_cast<std::uint8_t>(static_cast<std::uint32_t>(n) >> sh));

    CipherState st(s, Direction::encrypt);
    for (std::size_t b = 0; b < nblocks; ++b) {
        BoolMatrix p(n);
        for (std::size_t kbit = 0; kbit < bpb; ++kbit) {
            const std::size_t t = b * bpb + kbit;
            const bool bit = t < msg_bits ? stream_bit(plain, t) : t == msg_bits;
            if (bit) p.set(kbit / n, kbit % n, true);
        }
        auto cblk = io::pack_block(encrypt_block(st, p));
        out.insert(out.end(), cblk.begin(), cblk.end());
    }
    return out;
}

std::vector<std::uint8_t> decrypt_stream(const SessionSecrets& s,
                                         std::span<const std::uint8_t> cipher) {
    if (cipher.size() < 4) throw BadLength();
    std::uint32_t n32 = 0;
    for (int b = 0; b < 4; ++b) n32 |= std::uint32_t{cipher[b]} << (b * 8);
    if (n32 < 1 || n32 > gf2::kMaxDim) throw BadLength();
    const std::size_t n = n32;
    if (n != s.k.dim()) throw std::invalid_argument("stream dimension does not match session key");

    const std::size_t bs = io::block_size(n);
    const auto payload = cipher.subspan(4);
    if (payload.empty() || payload.size() % bs != 0) throw BadLength();
    const std::size_t nblocks = payload.size() / bs;
    const std::size_t bpb = n * n;

    std::vector<std::uint8_t> bits((nblocks * bpb + 7) / 8, 0);
    CipherState st(s, Direction::decrypt);
    for (std::size_t b = 0; b < nblocks; ++b) {
        auto p = decrypt_block(st, io::unpack_block(payload.subspan(b * bs, bs), n));
        for (std::size_t kbit = 0; kbit < bpb; ++kbit)
            if (p.get(kbit / n, kbit % n)) {
                const std::size_t t = b * bpb + kbit;
                bits[t >> 3] |= std::uint8_t(1u << (t & 7));
            }
    }

    // The pad marker is the last set bit of the recovered bit stream.
    std::size_t total = nblocks * bpb;
    std::size_t marker = total;
    for (std::size_t t = total; t-- > 0;) {
        if (stream_bit(bits, t)) {
            marker = t;
            break;
        }
    }
    if (marker == total) throw BadPadding(); // all-zero stream has no marker
    if (marker % 8 != 0) throw BadPadding(); // message must be whole bytes

    bits.resize(marker / 8);
    return bits;
}

std::vector<std::uint8_t> session_to_bytes(const SessionSecrets& s) {
    auto out = io::matrix_to_bytes(s.k);
    auto v = io::matrix_to_bytes(s.v);
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

SessionSecrets session_from_bytes(std::span<const std::uint8_t> data) {
    std::size_t offset = 0;
    auto k = io::read_matrix(data, offset);
    auto v = io::read_matrix(data, offset);
    if (offset != data.size()) throw io::FormatError("trailing bytes after session records");
    if (k.dim() != v.dim()) throw io::FormatError("session records differ in dimension");
    return secrets_from_matrices(k, v);
}

} // namespace feam
