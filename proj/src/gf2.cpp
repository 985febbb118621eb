#include "feam/gf2.hpp"

#include <bit>
#include <cassert>

namespace feam::gf2 {

namespace {

void check_dim(std::size_t n) {
    if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    if (n > kMaxDim) throw std::invalid_argument("matrix dimension exceeds cap");
}

void check_same_dim(const BoolMatrix& a, const BoolMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
}

#ifndef NDEBUG
void assert_padding_clear(const BoolMatrix& m) {
    const std::uint64_t mask = m.tail_mask();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        auto row = m.row_words(i);
        assert((row[m.words_per_row() - 1] & ~mask) == 0);
    }
}
#define FEAM_CHECK_PADDING(m) assert_padding_clear(m)
#else
#define FEAM_CHECK_PADDING(m) ((void)0)
#endif

void xor_row(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

} // namespace

BoolMatrix::BoolMatrix(std::size_t n) : n_(n), wpr_((n + 63) / 64), words_(n * wpr_, 0) {
    check_dim(n);
}

BoolMatrix BoolMatrix::identity(std::size_t n) {
    BoolMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BoolMatrix BoolMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    BoolMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::invalid_argument("from_rows: ragged input");
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, rows[i][j] != 0);
    }
    return m;
}

bool BoolMatrix::is_zero() const {
    for (std::uint64_t w : words_)
        if (w) return false;
    return true;
}

bool BoolMatrix::is_identity() const {
    return *this == identity(n_);
}

BoolMatrix add(const BoolMatrix& a, const BoolMatrix& b) {
    check_same_dim(a, b);
    BoolMatrix out = a;
    for (std::size_t i = 0; i < out.dim(); ++i) xor_row(out.row_words(i), b.row_words(i));
    FEAM_CHECK_PADDING(out);
    return out;
}

// Row-by-row accumulation: for each set bit k of row i of a, XOR row k of b
// into row i of the result. O(n^2) word XORs, no unpacking.
BoolMatrix mul(const BoolMatrix& a, const BoolMatrix& b) {
    check_same_dim(a, b);
    const std::size_t n = a.dim();
    const std::size_t wpr = a.words_per_row();
    BoolMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto a_row = a.row_words(i);
        auto out_row = out.row_words(i);
        for (std::size_t w = 0; w < wpr; ++w) {
            std::uint64_t bits = a_row[w];
            while (bits) {
                const std::size_t k = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                xor_row(out_row, b.row_words(k));
            }
        }
    }
    FEAM_CHECK_PADDING(out);
    return out;
}

BoolMatrix pow(const BoolMatrix& a, std::uint64_t e) {
    BoolMatrix result = BoolMatrix::identity(a.dim());
    BoolMatrix base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

BoolMatrix transpose(const BoolMatrix& a) {
    const std::size_t n = a.dim();
    BoolMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = a.row_words(i);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) {
            std::uint64_t bits = row[w];
            while (bits) {
                const std::size_t j = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                out.set(j, i, true);
            }
        }
    }
    FEAM_CHECK_PADDING(out);
    return out;
}

BoolMatrix kron(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    if (na > kMaxDim / nb) throw std::invalid_argument("kron result exceeds dimension cap");
    BoolMatrix out(na * nb);
    for (std::size_t ia = 0; ia < na; ++ia) {
        auto a_row = a.row_words(ia);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) {
            std::uint64_t bits = a_row[w];
            while (bits) {
                const std::size_t ja = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                // Splice b's rows into the (ia,ja) block at bit offset ja*nb.
                const std::size_t bit_off = ja * nb;
                const std::size_t word_off = bit_off >> 6;
                const unsigned shift = bit_off & 63;
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    auto src = b.row_words(ib);
                    auto dst = out.row_words(ia * nb + ib);
                    for (std::size_t bw = 0; bw < b.words_per_row(); ++bw) {
                        const std::uint64_t v = src[bw];
                        if (!v) continue;
                        dst[word_off + bw] |= v << shift;
                        // The spill word may lie past the row end when the
                        // block ends on a word boundary; only touch it when
                        // there are actual bits to carry over.
                        const std::uint64_t hi = shift ? (v >> (64 - shift)) : 0;
                        if (hi) dst[word_off + bw + 1] |= hi;
                    }
                }
            }
        }
    }
    FEAM_CHECK_PADDING(out);
    return out;
}

namespace {

// Shared Gauss-Jordan over a row-packed working copy. Pivot choice is the
// first row at or below the cursor with the pivot bit set; ties break by
// lowest row index so results are identical across platforms.
struct Elimination {
    std::size_t n;
    std::vector<std::uint64_t> work; // n rows, each `stride` words
    std::size_t stride;

    bool get(std::size_t r, std::size_t c) const {
        return (work[r * stride + (c >> 6)] >> (c & 63)) & 1u;
    }
    void xor_rows(std::size_t dst, std::size_t src, std::size_t from_word) {
        std::uint64_t* d = work.data() + dst * stride;
        const std::uint64_t* s = work.data() + src * stride;
        for (std::size_t w = from_word; w < stride; ++w) d[w] ^= s[w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::uint64_t* pa = work.data() + a * stride;
        std::uint64_t* pb = work.data() + b * stride;
        for (std::size_t w = 0; w < stride; ++w) std::swap(pa[w], pb[w]);
    }
};

} // namespace

std::size_t rank(const BoolMatrix& a) {
    const std::size_t n = a.dim();
    Elimination e{n, {}, a.words_per_row()};
    e.work.resize(n * e.stride);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = a.row_words(i);
        std::copy(row.begin(), row.end(), e.work.begin() + i * e.stride);
    }
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < n; ++col) {
        std::size_t piv = r;
        while (piv < n && !e.get(piv, col)) ++piv;
        if (piv == n) continue;
        e.swap_rows(r, piv);
        for (std::size_t row = r + 1; row < n; ++row)
            if (e.get(row, col)) e.xor_rows(row, r, col >> 6);
        ++r;
    }
    return r;
}

std::optional<BoolMatrix> inverse(const BoolMatrix& a) {
    const std::size_t n = a.dim();
    const std::size_t wpr = a.words_per_row();
    // Augmented [A | I], 2*wpr words per row.
    Elimination e{n, {}, 2 * wpr};
    e.work.assign(n * e.stride, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = a.row_words(i);
        std::copy(row.begin(), row.end(), e.work.begin() + i * e.stride);
        e.work[i * e.stride + wpr + (i >> 6)] |= std::uint64_t{1} << (i & 63);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && !e.get(piv, col)) ++piv;
        if (piv == n) return std::nullopt;
        e.swap_rows(col, piv);
        for (std::size_t row = 0; row < n; ++row)
            if (row != col && e.get(row, col)) e.xor_rows(row, col, col >> 6);
    }
    BoolMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto dst = out.row_words(i);
        const std::uint64_t* src = e.work.data() + i * e.stride + wpr;
        std::copy(src, src + wpr, dst.begin());
    }
    FEAM_CHECK_PADDING(out);
    return out;
}

SolveResult solve(const LinearSystem& sys) {
    const std::size_t m = sys.rows.size();
    const std::size_t u = sys.unknowns;
    if (m < 1 || u < 1) throw std::invalid_argument("empty linear system");
    if (sys.rhs.size() != m) throw std::invalid_argument("rhs length mismatch");
    for (const auto& row : sys.rows)
        if (row.size() != u) throw std::invalid_argument("coefficient row length mismatch");

    const std::size_t wpr = (u + 63) / 64;
    Elimination e{m, {}, wpr};
    e.work.resize(m * wpr);
    for (std::size_t i = 0; i < m; ++i) {
        auto row = sys.rows[i].words();
        std::copy(row.begin(), row.end(), e.work.begin() + i * wpr);
    }
    BitVec rhs = sys.rhs;

    std::vector<std::size_t> pivot_col;
    pivot_col.reserve(std::min(m, u));
    std::size_t r = 0;
    for (std::size_t col = 0; col < u && r < m; ++col) {
        std::size_t piv = r;
        while (piv < m && !e.get(piv, col)) ++piv;
        if (piv == m) continue;
        e.swap_rows(r, piv);
        if (piv != r) {
            const bool t = rhs.get(r);
            rhs.set(r, rhs.get(piv));
            rhs.set(piv, t);
        }
        for (std::size_t row = 0; row < m; ++row) {
            if (row == r || !e.get(row, col)) continue;
            e.xor_rows(row, r, col >> 6);
            rhs.set(row, rhs.get(row) ^ rhs.get(r));
        }
        pivot_col.push_back(col);
        ++r;
    }

    // Rows past the last pivot are all-zero on the left after full Jordan
    // elimination; a set rhs bit there means no solution exists.
    for (std::size_t row = r; row < m; ++row)
        if (rhs.get(row)) return {SolveResult::Status::inconsistent, std::nullopt};
    if (r < u) return {SolveResult::Status::underdetermined, std::nullopt};

    BitVec x(u);
    for (std::size_t row = 0; row < r; ++row) x.set(pivot_col[row], rhs.get(row));
    return {SolveResult::Status::unique, std::move(x)};
}

BitVec vec_col(const BoolMatrix& x) {
    const std::size_t n = x.dim();
    BitVec v(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (x.get(i, j)) v.set(j * n + i, true);
    return v;
}

BoolMatrix unvec_col(const BitVec& v, std::size_t n) {
    if (v.size() != n * n) throw std::invalid_argument("unvec_col: size is not n^2");
    BoolMatrix x(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (v.get(j * n + i)) x.set(i, j, true);
    return x;
}

BoolMatrix random_matrix(DetPrng& prng, std::size_t n) {
    check_dim(n);
    BoolMatrix m(n);
    const std::uint64_t mask = m.tail_mask();
    for (std::size_t i = 0; i < n; ++i) {
        auto row = m.row_words(i);
        for (std::size_t w = 0; w < m.words_per_row(); ++w) row[w] = prng.next();
        row[m.words_per_row() - 1] &= mask;
    }
    FEAM_CHECK_PADDING(m);
    return m;
}

std::optional<BoolMatrix> random_invertible(DetPrng& prng, std::size_t n,
                                            int max_tries, int* tries_out) {
    if (max_tries < 1) throw std::invalid_argument("max_tries must be >= 1");
    for (int t = 1; t <= max_tries; ++t) {
        BoolMatrix cand = random_matrix(prng, n);
        if (rank(cand) == n) {
            if (tries_out) *tries_out = t;
            return cand;
        }
    }
    if (tries_out) *tries_out = max_tries;
    return std::nullopt;
}

} // namespace feam::gf2
