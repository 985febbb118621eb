#include "feam/keyspace.hpp"

#include <stdexcept>

namespace feam::keyspace {

namespace {

// Square-and-multiply with an arbitrary-precision exponent; pow_big(k, 0) = I.
gf2::BoolMatrix pow_big(const gf2::BoolMatrix& k, const BigInt& e) {
    gf2::BoolMatrix result = gf2::BoolMatrix::identity(k.dim());
    if (e == 0) return result;
    gf2::BoolMatrix base = k;
    const unsigned top = boost::multiprecision::msb(e);
    for (unsigned b = 0;; ++b) {
        if (boost::multiprecision::bit_test(e, b)) result = gf2::mul(result, base);
        if (b == top) break;
        base = gf2::mul(base, base);
    }
    return result;
}

void require_invertible(const gf2::BoolMatrix& k) {
    if (gf2::rank(k) != k.dim()) throw gf2::NotInvertibleError();
}

} // namespace

BigInt group_order(std::size_t n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    const BigInt two_n = BigInt(1) << n;
    BigInt order = 1;
    for (std::size_t i = 0; i < n; ++i) order *= two_n - (BigInt(1) << i);
    return order;
}

std::map<std::uint64_t, int> factor_group_order(std::size_t n) {
    if (n < 1 || n > kExactOrderMaxDim)
        throw std::invalid_argument("factored group order only supported for small dimensions");
    // prod (2^n - 2^i) = 2^(n(n-1)/2) * prod_{j=1..n} (2^j - 1); the Mersenne
    // parts are < 2^16 here, so trial division settles them instantly.
    std::map<std::uint64_t, int> factors;
    factors[2] = static_cast<int>(n * (n - 1) / 2);
    if (factors[2] == 0) factors.erase(2);
    for (std::size_t j = 1; j <= n; ++j) {
        std::uint64_t v = (std::uint64_t{1} << j) - 1;
        for (std::uint64_t p = 3; p * p <= v; p += 2)
            while (v % p == 0) {
                ++factors[p];
                v /= p;
            }
        if (v > 1) ++factors[v];
    }
    return factors;
}

std::optional<std::uint64_t> element_order(const gf2::BoolMatrix& k, std::uint64_t bound) {
    if (bound < 1) throw std::invalid_argument("order bound must be >= 1");
    require_invertible(k);
    const std::size_t n = k.dim();

    if (n <= kExactOrderMaxDim) {
        // Divisor descent: start from the full group order and strip every
        // prime factor that keeps K^e == I. What survives is the exact order.
        BigInt e = group_order(n);
        for (const auto& [p, mult] : factor_group_order(n)) {
            for (int t = 0; t < mult; ++t) {
                const BigInt reduced = e / p;
                if (pow_big(k, reduced) == gf2::BoolMatrix::identity(n))
                    e = reduced;
                else
                    break;
            }
        }
        return static_cast<std::uint64_t>(e);
    }

    gf2::BoolMatrix acc = k;
    const auto ident = gf2::BoolMatrix::identity(n);
    for (std::uint64_t e = 1; e <= bound; ++e) {
        if (acc == ident) return e;
        acc = gf2::mul(acc, k);
    }
    return std::nullopt;
}

ScreenResult screen_key(const gf2::BoolMatrix& k, std::uint64_t min_order) {
    auto order = element_order(k, min_order);
    if (!order) return {true, std::nullopt, true};
    return {*order > min_order, order, false};
}

KeyAnalysis analyze_key(const gf2::BoolMatrix& k, std::uint64_t min_order) {
    auto order = element_order(k, min_order);
    return {order, group_order(k.dim()), min_order, order.has_value() && *order <= min_order};
}

} // namespace feam::keyspace
