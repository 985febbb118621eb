#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "feam/gf2.hpp"

namespace feam::keyspace {

using BigInt = boost::multiprecision::cpp_int;

// Default "sufficiently large" threshold for weak-key screening. Arbitrary
// but documented; the screening mechanism, not the constant, is the contract.
inline constexpr std::uint64_t kDefaultMinOrder = std::uint64_t{1} << 16;

// Dimensions up to this get exact orders via the factored group order;
// beyond it the group order is infeasible to factor reliably, so the order
// search falls back to bounded iteration.
inline constexpr std::size_t kExactOrderMaxDim = 16;

// |GL(n,2)| = prod_{i=0}^{n-1} (2^n - 2^i), exact.
BigInt group_order(std::size_t n);

// Prime factorization of group_order(n); only for n <= kExactOrderMaxDim.
std::map<std::uint64_t, int> factor_group_order(std::size_t n);

// Smallest e >= 1 with K^e == I. Exact via divisor descent when
// n <= kExactOrderMaxDim; otherwise iterative, and nullopt means the order
// exceeds `bound`. Throws NotInvertibleError on singular input.
std::optional<std::uint64_t> element_order(const gf2::BoolMatrix& k, std::uint64_t bound);

struct ScreenResult {
    bool accepted;
    // Exact order when the computation resolved; empty when the iterative
    // search ran past its bound (which itself proves order > min_order).
    std::optional<std::uint64_t> order;
    bool order_exceeds_bound;
};

// Rejects keys whose order is <= min_order. A bound-exceeded order search is
// an accept: the order is provably larger than the threshold.
ScreenResult screen_key(const gf2::BoolMatrix& k, std::uint64_t min_order);

struct KeyAnalysis {
    std::optional<std::uint64_t> order; // empty: exceeds the search bound
    BigInt group_order;
    std::uint64_t min_order;
    bool weak; // order known and <= min_order
};

KeyAnalysis analyze_key(const gf2::BoolMatrix& k, std::uint64_t min_order = kDefaultMinOrder);

} // namespace feam::keyspace
