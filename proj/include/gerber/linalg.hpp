#pragma once

#include "gerber/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gerber {

/// Dense matrix of exact rationals; just enough for chain-complex ranks.
class RationalMatrix {
public:
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    const Rational& at(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    /// Exact rank via fraction-free (Bareiss) elimination: rows are first
    /// scaled integral, then eliminated with the two-determinant update
    /// divided by the previous pivot, which stays exact in BigInt.
    std::size_t rank() const {
        if (rows_ == 0 || cols_ == 0) return 0;
        std::vector<std::vector<BigInt>> m(rows_, std::vector<BigInt>(cols_));
        for (std::size_t r = 0; r < rows_; ++r) {
            BigInt scale = 1;
            for (std::size_t c = 0; c < cols_; ++c)
                scale = boost::multiprecision::lcm(scale, at(r, c).den());
            for (std::size_t c = 0; c < cols_; ++c)
                m[r][c] = at(r, c).num() * (scale / at(r, c).den());
        }
        std::size_t rank = 0;
        BigInt prev = 1;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t pivot = rank;
            while (pivot < rows_ && m[pivot][col] == 0) ++pivot;
            if (pivot == rows_) continue;
            std::swap(m[rank], m[pivot]);
            for (std::size_t i = rank + 1; i < rows_; ++i) {
                for (std::size_t j = col + 1; j < cols_; ++j)
                    m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
                m[i][col] = 0;
            }
            prev = m[rank][col];
            ++rank;
        }
        return rank;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> data_;
};

}  // namespace gerber
