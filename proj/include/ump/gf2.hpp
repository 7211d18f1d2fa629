#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ump {

/// Dense bit vector over GF(2), packed into 64-bit words.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static BitVector from_string(std::string_view s) {
        BitVector v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v.set(i, true);
            else if (s[i] != '0')
                throw std::invalid_argument("BitVector::from_string: expected '0' or '1'");
        }
        return v;
    }

    static BitVector from_bits(std::initializer_list<int> bits) {
        BitVector v(bits.size());
        std::size_t i = 0;
        for (int b : bits) v.set(i++, b != 0);
        return v;
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const {
        check_index(i);
        return (w_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { set(i, !get(i)); }

    BitVector& operator^=(const BitVector& o) {
        check_same_size(o);
        for (std::size_t j = 0; j < w_.size(); ++j) w_[j] ^= o.w_[j];
        return *this;
    }

    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BitVector& o) const = default;

    std::size_t weight() const {
        std::size_t s = 0;
        for (std::uint64_t w : w_) s += std::popcount(w);
        return s;
    }

    bool any() const {
        for (std::uint64_t w : w_)
            if (w) return true;
        return false;
    }

    /// GF(2) inner product <this, o>.
    int dot(const BitVector& o) const {
        check_same_size(o);
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < w_.size(); ++j) acc ^= w_[j] & o.w_[j];
        return std::popcount(acc) & 1;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    /// First n bits of a 64-bit word, bit i of the word at position i (n <= 64).
    static BitVector from_word(std::uint64_t w, std::size_t n) {
        if (n > 64) throw std::invalid_argument("BitVector::from_word: n > 64");
        BitVector v(n);
        if (n > 0) v.w_[0] = n == 64 ? w : (w & ((std::uint64_t{1} << n) - 1));
        return v;
    }

    /// Inverse of from_word (n <= 64).
    std::uint64_t to_word() const {
        if (n_ > 64) throw std::invalid_argument("BitVector::to_word: size > 64");
        return w_.empty() ? 0 : w_[0];
    }

  private:
    void check_index(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("BitVector: index out of range");
    }
    void check_same_size(const BitVector& o) const {
        if (n_ != o.n_) throw std::invalid_argument("BitVector: size mismatch");
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Dense GF(2) matrix, one packed BitVector per row.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    static BitMatrix from_rows(std::initializer_list<std::string_view> rows) {
        BitMatrix m;
        for (auto r : rows) m.append_row(BitVector::from_string(r));
        return m;
    }

    static BitMatrix from_rows(const std::vector<BitVector>& rows, std::size_t cols) {
        BitMatrix m(0, cols);
        for (const auto& r : rows) m.append_row(r);
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return row_at(r).get(c); }
    void set(std::size_t r, std::size_t c, bool v) { row_at(r).set(c, v); }

    const BitVector& row(std::size_t r) const { return row_at(r); }

    void append_row(const BitVector& r) {
        if (rows_.empty() && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
        rows_.push_back(r);
    }

    void swap_rows(std::size_t a, std::size_t b) { std::swap(row_at(a), row_at(b)); }

    /// rows[dst] ^= rows[src]
    void xor_row_into(std::size_t src, std::size_t dst) { row_at(dst) ^= row_at(src); }

    /// A x^T as a column, returned with length rows(). Computes syndromes s = v H^T.
    BitVector mul(const BitVector& x) const {
        if (x.size() != cols_) throw std::invalid_argument("BitMatrix::mul: dimension mismatch");
        BitVector out(rows());
        for (std::size_t i = 0; i < rows(); ++i) out.set(i, rows_[i].dot(x) != 0);
        return out;
    }

    /// u A (row vector times matrix), returned with length cols(). Encodes u G.
    BitVector left_mul(const BitVector& u) const {
        if (u.size() != rows()) throw std::invalid_argument("BitMatrix::left_mul: dimension mismatch");
        BitVector out(cols_);
        for (std::size_t i = 0; i < rows(); ++i)
            if (u.get(i)) out ^= rows_[i];
        return out;
    }

    static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
        if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
            throw std::invalid_argument("BitMatrix::vstack: column mismatch");
        BitMatrix m(0, a.rows() != 0 ? a.cols() : b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) m.append_row(a.row(i));
        for (std::size_t i = 0; i < b.rows(); ++i) m.append_row(b.row(i));
        return m;
    }

    bool operator==(const BitMatrix& o) const = default;

  private:
    BitVector& row_at(std::size_t r) {
        if (r >= rows_.size()) throw std::out_of_range("BitMatrix: row out of range");
        return rows_[r];
    }
    const BitVector& row_at(std::size_t r) const {
        if (r >= rows_.size()) throw std::out_of_range("BitMatrix: row out of range");
        return rows_[r];
    }

    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

namespace detail {

struct Rref {
    BitMatrix m;
    std::vector<std::size_t> pivot_cols;  // one per pivot row, increasing
};

/// Reduced row echelon form. Pivoting is by first nonzero entry in scan
/// order, so the result is deterministic for a given input.
inline Rref rref(BitMatrix m) {
    Rref out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t pivot = r;
        while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
        if (pivot == m.rows()) continue;
        m.swap_rows(pivot, r);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.xor_row_into(r, i);
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.m = std::move(m);
    return out;
}

}  // namespace detail

inline std::size_t gf2_rank(const BitMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    return detail::rref(m).pivot_cols.size();
}

/// Solution set of a x^T = b^T: one particular solution plus a nullspace
/// basis, or an inconsistency flag.
struct AffineSolution {
    bool consistent = false;
    BitVector particular;
    std::vector<BitVector> nullspace;

    std::size_t dimension() const { return nullspace.size(); }
};

inline AffineSolution solve_affine(const BitMatrix& a, const BitVector& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_affine: rows(a) != length(b)");
    const std::size_t n = a.cols();

    BitMatrix aug(0, n + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        BitVector r(n + 1);
        for (std::size_t c = 0; c < n; ++c) r.set(c, a.get(i, c));
        r.set(n, b.get(i));
        aug.append_row(r);
    }
    auto re = detail::rref(std::move(aug));

    AffineSolution sol;
    for (std::size_t p : re.pivot_cols)
        if (p == n) return sol;  // pivot in the rhs column: inconsistent
    sol.consistent = true;

    // Particular solution: free variables fixed to zero.
    sol.particular = BitVector(n);
    for (std::size_t j = 0; j < re.pivot_cols.size(); ++j)
        sol.particular.set(re.pivot_cols[j], re.m.get(j, n));

    // Nullspace basis: one vector per free column.
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : re.pivot_cols) is_pivot[p] = true;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVector v(n);
        v.set(f, true);
        for (std::size_t j = 0; j < re.pivot_cols.size(); ++j)
            v.set(re.pivot_cols[j], re.m.get(j, f));
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

/// Parity-check matrix of a full-row-rank generator: H has n-k rows,
/// full row rank and g H^T = 0. Columns come back in the original order
/// even when the pivot columns of g are not the leading ones.
inline BitMatrix parity_check_from_generator(const BitMatrix& g) {
    const std::size_t k = g.rows();
    const std::size_t n = g.cols();
    if (k > n) throw std::invalid_argument("parity_check_from_generator: more rows than columns");
    auto re = detail::rref(g);
    if (re.pivot_cols.size() != k)
        throw std::invalid_argument("parity_check_from_generator: generator is rank deficient");

    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : re.pivot_cols) is_pivot[p] = true;

    BitMatrix h(0, n);
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVector row(n);
        row.set(f, true);
        for (std::size_t j = 0; j < k; ++j) row.set(re.pivot_cols[j], re.m.get(j, f));
        h.append_row(row);
    }
    return h;
}

/// dim(C0 ∩ C1) for linear codes given by their parity checks: the common
/// codewords satisfy both checks, so the dimension is n minus the rank of
/// the stacked matrix.
inline std::size_t linear_intersection_dim(const BitMatrix& h0, const BitMatrix& h1) {
    if (h0.cols() != h1.cols()) throw std::invalid_argument("linear_intersection_dim: column mismatch");
    const std::size_t n = h0.cols();
    return n - gf2_rank(BitMatrix::vstack(h0, h1));
}

struct CosetIntersection {
    bool empty = false;
    std::size_t dim = 0;  // meaningful only when !empty

    bool operator==(const CosetIntersection&) const = default;
};

/// Intersection of two coset codes with syndromes s_i = v_i H_i^T. The
/// cosets are disjoint exactly when the stacked affine system has no
/// solution; otherwise the intersection is a coset of dimension
/// n - rank([H0; H1]).
inline CosetIntersection coset_intersection(const BitMatrix& h0, const BitVector& s0,
                                            const BitMatrix& h1, const BitVector& s1) {
    if (h0.cols() != h1.cols()) throw std::invalid_argument("coset_intersection: column mismatch");
    if (s0.size() != h0.rows() || s1.size() != h1.rows())
        throw std::invalid_argument("coset_intersection: syndrome length mismatch");

    BitVector rhs(h0.rows() + h1.rows());
    for (std::size_t i = 0; i < s0.size(); ++i) rhs.set(i, s0.get(i));
    for (std::size_t i = 0; i < s1.size(); ++i) rhs.set(h0.rows() + i, s1.get(i));

    auto sol = solve_affine(BitMatrix::vstack(h0, h1), rhs);
    if (!sol.consistent) return {.empty = true, .dim = 0};
    return {.empty = false, .dim = sol.dimension()};
}

}  // namespace ump
