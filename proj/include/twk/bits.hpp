#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace twk {

/// Fixed-length bit vector over the two-element field. Addition is XOR.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }
    std::size_t count() const;

    /// Indices of set bits, ascending.
    std::vector<std::size_t> ones() const;

    friend bool operator==(const BitVec&, const BitVec&) = default;
    bool operator<(const BitVec& o) const { return words_ < o.words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Matrix over the two-element field; rows are BitVecs.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { data_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { data_[r].flip(c); }

    BitVec& row(std::size_t r) { return data_[r]; }
    const BitVec& row(std::size_t r) const { return data_[r]; }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVec> data_;
};

std::size_t rank(const BitMatrix& a);

/// Solves A x = b. Deterministic: free variables are assigned zero, so the
/// returned solution is the lexicographically least one. Empty optional when
/// the system is inconsistent.
std::optional<BitVec> solve_linear(const BitMatrix& a, const BitVec& b);

/// Basis of the solution space of A x = 0, one vector per free column.
std::vector<BitVec> nullspace(const BitMatrix& a);

} // namespace twk
