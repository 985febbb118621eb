#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"

#include "feam/gf2.hpp"
#include "naive.hpp"

using feam::DetPrng;
using feam::gf2::BitVec;
using feam::gf2::BoolMatrix;

namespace {

BoolMatrix random_mat(DetPrng& prng, std::size_t n) {
    return feam::gf2::random_matrix(prng, n);
}

// Words past the last column must stay zero after every operation, or
// equality checks and row XORs silently corrupt.
bool padding_clean(const BoolMatrix& m) {
    const std::uint64_t mask = m.tail_mask();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const auto row = m.row_words(i);
        if ((row[row.size() - 1] & ~mask) != 0) return false;
    }
    return true;
}

} // namespace

TEST_CASE("add and mul agree with the reference implementation") {
    DetPrng prng(2024);
    int checked = 0;
    while (checked < 1000) {
        for (std::size_t n = 1; n <= 8 && checked < 1000; ++n, ++checked) {
            const BoolMatrix a = random_mat(prng, n);
            const BoolMatrix b = random_mat(prng, n);
            CHECK(feam::gf2::add(a, b) == naive::to_bool(
                      naive::add(naive::from_bool(a), naive::from_bool(b))));
            CHECK(feam::gf2::mul(a, b) == naive::to_bool(
                      naive::mul(naive::from_bool(a), naive::from_bool(b))));
        }
    }
}

TEST_CASE("mul handles dimensions spanning multiple words") {
    DetPrng prng(7);
    for (std::size_t n : {63, 64, 65, 130}) {
        const BoolMatrix a = random_mat(prng, n);
        const BoolMatrix b = random_mat(prng, n);
        const BoolMatrix ab = feam::gf2::mul(a, b);
        CHECK(padding_clean(ab));
        // Spot-check entries against the dot-product definition.
        DetPrng pick(n);
        for (int t = 0; t < 50; ++t) {
            const std::size_t i = pick.next() % n, j = pick.next() % n;
            int dot = 0;
            for (std::size_t k = 0; k < n; ++k)
                dot ^= (a.get(i, k) & b.get(k, j));
            CHECK(ab.get(i, j) == (dot != 0));
        }
    }
}

TEST_CASE("rank and inverse agree with the reference implementation") {
    DetPrng prng(99);
    int invertible_seen = 0, singular_seen = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + t % 8;
        const BoolMatrix a = random_mat(prng, n);
        const naive::Mat ref = naive::from_bool(a);
        CHECK(feam::gf2::rank(a) == naive::rank(ref));

        const auto inv = feam::gf2::inverse(a);
        const auto ref_inv = naive::inverse(ref);
        CHECK(inv.has_value() == ref_inv.has_value());
        if (inv) {
            ++invertible_seen;
            CHECK(*inv == naive::to_bool(*ref_inv));
            CHECK(feam::gf2::mul(a, *inv) == BoolMatrix::identity(n));
            CHECK(feam::gf2::mul(*inv, a) == BoolMatrix::identity(n));
        } else {
            ++singular_seen;
        }
    }
    // Both branches must actually have been exercised.
    CHECK(invertible_seen > 100);
    CHECK(singular_seen > 100);
}

TEST_CASE("pow is multiplicative in the exponent") {
    DetPrng prng(31337);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + t % 7;
        const BoolMatrix a = random_mat(prng, n);
        CHECK(feam::gf2::pow(a, 0) == BoolMatrix::identity(n));
        CHECK(feam::gf2::pow(a, 1) == a);
        const std::uint64_t i = prng.next() % 50, j = prng.next() % 50;
        CHECK(feam::gf2::pow(a, i + j) ==
              feam::gf2::mul(feam::gf2::pow(a, i), feam::gf2::pow(a, j)));
    }
}

TEST_CASE("transpose reverses products") {
    DetPrng prng(5);
    for (std::size_t n : {3, 8, 64, 65}) {
        const BoolMatrix a = random_mat(prng, n);
        const BoolMatrix b = random_mat(prng, n);
        CHECK(feam::gf2::transpose(feam::gf2::transpose(a)) == a);
        CHECK(feam::gf2::transpose(feam::gf2::mul(a, b)) ==
              feam::gf2::mul(feam::gf2::transpose(b), feam::gf2::transpose(a)));
        CHECK(padding_clean(feam::gf2::transpose(a)));
    }
}

TEST_CASE("kron agrees with the reference implementation") {
    DetPrng prng(404);
    for (int t = 0; t < 30; ++t) {
        const std::size_t na = 1 + prng.next() % 5, nb = 1 + prng.next() % 5;
        const BoolMatrix a = random_mat(prng, na);
        const BoolMatrix b = random_mat(prng, nb);
        CHECK(feam::gf2::kron(a, b) == naive::to_bool(
                  naive::kron(naive::from_bool(a), naive::from_bool(b))));
    }
    // Block layouts that land exactly on and straddle word boundaries.
    for (auto [na, nb] : {std::pair<std::size_t, std::size_t>{8, 8},
                          {9, 8}, {8, 9}, {13, 5}}) {
        const BoolMatrix a = random_mat(prng, na);
        const BoolMatrix b = random_mat(prng, nb);
        const BoolMatrix k = feam::gf2::kron(a, b);
        CHECK(padding_clean(k));
        CHECK(k == naive::to_bool(
                  naive::kron(naive::from_bool(a), naive::from_bool(b))));
    }
}

TEST_CASE("vec_col flattening matches the kron identity") {
    DetPrng prng(777);
    int done = 0;
    while (done < 100) {
        const std::size_t n = 2 + prng.next() % 5;
        const BoolMatrix a = random_mat(prng, n);
        const BoolMatrix x = random_mat(prng, n);
        const BoolMatrix b = random_mat(prng, n);

        // vec(A X B) = (B^T (x) A) vec(X), column-major convention.
        const BoolMatrix coef = feam::gf2::kron(feam::gf2::transpose(b), a);
        const BitVec vx = feam::gf2::vec_col(x);
        BitVec want = feam::gf2::vec_col(
            feam::gf2::mul(feam::gf2::mul(a, x), b));

        BitVec got(n * n);
        for (std::size_t r = 0; r < n * n; ++r) {
            int bit = 0;
            for (std::size_t c = 0; c < n * n; ++c)
                bit ^= (coef.get(r, c) & vx.get(c));
            got.set(r, bit != 0);
        }
        CHECK(got == want);
        CHECK(feam::gf2::unvec_col(vx, n) == x);
        ++done;
    }
}

TEST_CASE("vec_col uses column-major order") {
    BoolMatrix x(3);
    x.set(1, 2, true); // bit j*n+i = 2*3+1 = 7
    const BitVec v = feam::gf2::vec_col(x);
    for (std::size_t k = 0; k < 9; ++k) CHECK(v.get(k) == (k == 7));
}

TEST_CASE("linear solver classifies and solves") {
    using feam::gf2::LinearSystem;
    using feam::gf2::SolveResult;
    DetPrng prng(808);

    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + t % 7;
        // Build an invertible coefficient matrix and a known solution.
        const auto a = feam::gf2::random_invertible(prng, n);
        REQUIRE(a.has_value());
        BitVec x(n);
        for (std::size_t i = 0; i < n; ++i) x.set(i, prng.next() & 1);

        LinearSystem sys;
        sys.unknowns = n;
        sys.rhs = BitVec(n);
        for (std::size_t i = 0; i < n; ++i) {
            BitVec row(n);
            int b = 0;
            for (std::size_t j = 0; j < n; ++j) {
                row.set(j, a->get(i, j));
                b ^= (a->get(i, j) & x.get(j));
            }
            sys.rows.push_back(row);
            sys.rhs.set(i, b != 0);
        }
        const SolveResult res = feam::gf2::solve(sys);
        REQUIRE(res.status == SolveResult::Status::unique);
        CHECK(*res.solution == x);

        // Dropping an equation leaves the system consistent but
        // underdetermined; contradicting one makes it inconsistent.
        LinearSystem under = sys;
        under.rows.pop_back();
        BitVec short_rhs(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) short_rhs.set(i, sys.rhs.get(i));
        under.rhs = short_rhs;
        CHECK(feam::gf2::solve(under).status ==
              SolveResult::Status::underdetermined);

        LinearSystem bad = sys;
        bad.rows.push_back(sys.rows[0]);
        BitVec long_rhs(n + 1);
        for (std::size_t i = 0; i < n; ++i) long_rhs.set(i, sys.rhs.get(i));
        long_rhs.set(n, !sys.rhs.get(0));
        bad.rhs = long_rhs;
        CHECK(feam::gf2::solve(bad).status == SolveResult::Status::inconsistent);
    }
}

TEST_CASE("zero-row contradictions are reported as inconsistent") {
    feam::gf2::LinearSystem sys;
    sys.unknowns = 2;
    sys.rows.emplace_back(2); // 0 == 1: no solution no matter the rest
    sys.rhs = BitVec(1);
    sys.rhs.set(0, true);
    CHECK(feam::gf2::solve(sys).status ==
          feam::gf2::SolveResult::Status::inconsistent);
}

TEST_CASE("random matrices have unbiased bits") {
    DetPrng prng(1234);
    std::size_t ones = 0, total = 0;
    for (int t = 0; t < 500; ++t) {
        const BoolMatrix m = random_mat(prng, 64);
        CHECK(padding_clean(m));
        for (std::size_t i = 0; i < 64; ++i)
            for (std::size_t j = 0; j < 64; ++j) ones += m.get(i, j);
        total += 64 * 64;
    }
    const double density = double(ones) / double(total);
    CHECK(density > 0.45);
    CHECK(density < 0.55);
}

TEST_CASE("invertibility rate matches the group density") {
    // The fraction of invertible 16x16 bit matrices is
    // prod_{i>=1} (1 - 2^-i) ~= 0.2888.
    DetPrng prng(5150);
    int invertible = 0;
    const int draws = 2000;
    for (int t = 0; t < draws; ++t)
        if (feam::gf2::rank(random_mat(prng, 16)) == 16) ++invertible;
    const double rate = double(invertible) / draws;
    CHECK(rate > 0.26);
    CHECK(rate < 0.32);
}

TEST_CASE("random_invertible returns invertible matrices and counts tries") {
    DetPrng prng(2);
    int tries = 0;
    const auto m = feam::gf2::random_invertible(prng, 32, 256, &tries);
    REQUIRE(m.has_value());
    CHECK(tries >= 1);
    CHECK(feam::gf2::inverse(*m).has_value());
}

TEST_CASE("from_rows and identity behave") {
    const BoolMatrix m = BoolMatrix::from_rows({{1, 0}, {1, 1}});
    CHECK(m.get(0, 0));
    CHECK_FALSE(m.get(0, 1));
    CHECK(m.get(1, 0));
    CHECK(BoolMatrix::identity(3).is_identity());
    CHECK_FALSE(m.is_identity());
    CHECK(BoolMatrix(4).is_zero());
    CHECK_FALSE(m.is_zero());
}

TEST_CASE("operations preserve padding at awkward dimensions") {
    DetPrng prng(11);
    for (std::size_t n : {1, 63, 65, 127}) {
        const BoolMatrix a = random_mat(prng, n);
        const BoolMatrix b = random_mat(prng, n);
        CHECK(padding_clean(feam::gf2::add(a, b)));
        CHECK(padding_clean(feam::gf2::mul(a, b)));
        CHECK(padding_clean(feam::gf2::pow(a, 5)));
        const auto inv = feam::gf2::inverse(a);
        if (inv) CHECK(padding_clean(*inv));
    }
}
