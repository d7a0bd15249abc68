#include "twk/bits.hpp"

#include <bit>

#include "twk/error.hpp"

namespace twk {

std::size_t BitVec::count() const {
    std::size_t total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
}

std::vector<std::size_t> BitVec::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) out.push_back(i);
    return out;
}

namespace {

struct Echelon {
    BitMatrix m;                  // row-reduced copy of [A|b] or A
    std::vector<std::size_t> pivot_cols;
};

// Row reduction, columns processed left to right, full elimination above and
// below each pivot.
Echelon reduce_rows(BitMatrix m, std::size_t ncols) {
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        if (p != r) std::swap(m.row(p), m.row(r));
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.row(i) ^= m.row(r);
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.m = std::move(m);
    return e;
}

} // namespace

std::size_t rank(const BitMatrix& a) { return reduce_rows(a, a.cols()).pivot_cols.size(); }

std::optional<BitVec> solve_linear(const BitMatrix& a, const BitVec& b) {
    if (a.rows() != b.size())
        fail(ErrorKind::DimensionMismatch, "solve_linear: rows(A) != size(b)");
    BitMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        aug.row(r) = BitVec(a.cols() + 1);
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) aug.set(r, c);
        if (b.get(r)) aug.set(r, a.cols());
    }
    Echelon e = reduce_rows(std::move(aug), a.cols());
    // Inconsistent iff some row is (0 ... 0 | 1).
    for (std::size_t r = e.pivot_cols.size(); r < e.m.rows(); ++r)
        if (e.m.get(r, a.cols())) return std::nullopt;
    BitVec x(a.cols());
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
        if (e.m.get(r, a.cols())) x.set(e.pivot_cols[r]);
    return x;
}

std::vector<BitVec> nullspace(const BitMatrix& a) {
    Echelon e = reduce_rows(a, a.cols());
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;
    std::vector<BitVec> basis;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        if (is_pivot[c]) continue;
        BitVec v(a.cols());
        v.set(c);
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
            if (e.m.get(r, c)) v.set(e.pivot_cols[r]);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace twk
