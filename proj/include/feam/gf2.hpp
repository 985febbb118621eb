#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "feam/prng.hpp"

namespace feam::gf2 {

// Hard cap on matrix dimension; the n^2-unknown solver is quadratic in memory.
inline constexpr std::size_t kMaxDim = 4096;

// Thrown where an operation requires an invertible matrix and the caller
// promised one (master keys, order computation). Expected singularity is a
// return value, not an exception.
struct NotInvertibleError : std::runtime_error {
    NotInvertibleError() : std::runtime_error("NotInvertible") {}
};

// Packed bit vector, LSB-first within each 64-bit word. Padding bits beyond
// size() are kept zero so word-wise equality and XOR are exact.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void xor_with(const BitVec& other) {
        if (other.size_ != size_) throw std::invalid_argument("BitVec size mismatch");
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Square bit matrix over GF(2). Rows are packed LSB-first into 64-bit words
// (bit j of row i = element (i,j)); addition is XOR, scalar product is AND.
// Values are immutable in spirit: every operation returns a fresh matrix.
class BoolMatrix {
public:
    explicit BoolMatrix(std::size_t n);

    static BoolMatrix identity(std::size_t n);
    // Row-major 0/1 initializer, mainly for tests and small fixtures.
    static BoolMatrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t dim() const { return n_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t i, std::size_t j) const {
        return (words_[i * wpr_ + (j >> 6)] >> (j & 63)) & 1u;
    }

    void set(std::size_t i, std::size_t j, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (j & 63);
        if (v)
            words_[i * wpr_ + (j >> 6)] |= mask;
        else
            words_[i * wpr_ + (j >> 6)] &= ~mask;
    }

    std::span<const std::uint64_t> row_words(std::size_t i) const {
        return {words_.data() + i * wpr_, wpr_};
    }
    std::span<std::uint64_t> row_words(std::size_t i) {
        return {words_.data() + i * wpr_, wpr_};
    }

    bool is_zero() const;
    bool is_identity() const;

    // Word mask covering the valid bits of the last word of a row.
    std::uint64_t tail_mask() const {
        const std::size_t tail = n_ & 63;
        return tail ? ((std::uint64_t{1} << tail) - 1) : ~std::uint64_t{0};
    }

    friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

BoolMatrix add(const BoolMatrix& a, const BoolMatrix& b);
BoolMatrix mul(const BoolMatrix& a, const BoolMatrix& b);
// Square-and-multiply; pow(a, 0) is the identity.
BoolMatrix pow(const BoolMatrix& a, std::uint64_t e);
BoolMatrix transpose(const BoolMatrix& a);
// Kronecker product, dimension a.dim()*b.dim(); still subject to kMaxDim.
BoolMatrix kron(const BoolMatrix& a, const BoolMatrix& b);

std::size_t rank(const BoolMatrix& a);
// Gauss-Jordan inverse; nullopt when rank < n.
std::optional<BoolMatrix> inverse(const BoolMatrix& a);

// m equations over `unknowns` variables: rows[e] are the coefficients of
// equation e, rhs bit e its right-hand side.
struct LinearSystem {
    std::size_t unknowns = 0;
    std::vector<BitVec> rows;
    BitVec rhs;
};

struct SolveResult {
    enum class Status { unique, underdetermined, inconsistent };
    Status status;
    std::optional<BitVec> solution; // present iff status == unique
};

SolveResult solve(const LinearSystem& sys);

// Column-major flattening: bit j*n+i of the result is element (i,j). This is
// the one vec convention used everywhere; kron(transpose(B), A) * vec_col(X)
// equals vec_col(A*X*B) under it.
BitVec vec_col(const BoolMatrix& x);
BoolMatrix unvec_col(const BitVec& v, std::size_t n);

// Every bit drawn from the generator: one 64-bit draw per word of each row,
// row-major, high bits of the last word masked off. The draw layout is a
// compatibility contract; reorder it and every seeded fixture breaks.
BoolMatrix random_matrix(DetPrng& prng, std::size_t n);

// Rejection-samples random_matrix until invertible; nullopt after max_tries.
// tries_out, when given, receives the number of candidates drawn.
std::optional<BoolMatrix> random_invertible(DetPrng& prng, std::size_t n,
                                            int max_tries = 256, int* tries_out = nullptr);

} // namespace feam::gf2
