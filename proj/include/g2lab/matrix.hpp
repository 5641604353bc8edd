#pragma once

#include "g2lab/scalar.hpp"

#include <bit>
#include <string>
#include <vector>

namespace g2lab {

/// Small dense row-major matrix over a scalar ring.
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<S>::zero()) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorKind::DegreeMismatch, "matrix shape mismatch in product");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (ScalarTraits<S>::is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (ScalarTraits<S>::is_zero(b(k, j))) continue;
                    out(i, j) = out(i, j) + aik * b(k, j);
                }
            }
        return out;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) {
        a.require_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] + b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        a.require_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] = a.data_[i] - b.data_[i];
        return a;
    }
    friend Matrix operator*(Matrix a, const S& s) {
        for (auto& x : a.data_) x = x * s;
        return a;
    }
    friend Matrix operator*(const S& s, Matrix a) { return std::move(a) * s; }
    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!ScalarTraits<S>::is_zero(x)) return false;
        return true;
    }
    double max_abs() const {
        double best = 0;
        for (const auto& x : data_) best = std::max(best, std::abs(ScalarTraits<S>::to_double(x)));
        return best;
    }
    /// Square submatrix on the given row/column index lists.
    Matrix sub(const std::vector<int>& rows, const std::vector<int>& cols) const {
        Matrix out(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                out(i, j) = (*this)(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(cols[j]));
        return out;
    }

    template <class T, class F>
    Matrix<T> map(F&& f) const {
        Matrix<T> out(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = f((*this)(r, c));
        return out;
    }

private:
    void require_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw Error(ErrorKind::DegreeMismatch, "matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> data_;
};

/// Division-free determinant by Laplace expansion over column subsets,
/// O(n 2^n) ring operations; exact over every ring and meant for n <= 8.
template <class S>
S determinant(const Matrix<S>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw Error(ErrorKind::DegreeMismatch, "determinant of a non-square matrix");
    if (n == 0) return ScalarTraits<S>::one();
    // minors[set] = det of rows 0..|set|-1 restricted to columns in `set`
    std::vector<S> minors(std::size_t{1} << n, ScalarTraits<S>::zero());
    minors[0] = ScalarTraits<S>::one();
    for (std::size_t set = 1; set < minors.size(); ++set) {
        const std::size_t row = static_cast<std::size_t>(std::popcount(set)) - 1;
        S acc = ScalarTraits<S>::zero();
        int position = 0;  // number of chosen columns left of c
        for (std::size_t c = 0; c < n; ++c) {
            if (!(set & (std::size_t{1} << c))) continue;
            const std::size_t rest = set & ~(std::size_t{1} << c);
            // column c is the `position`-th of the set; the sign follows from
            // expanding the last row.
            const int sign = ((static_cast<int>(row) + position) % 2) ? -1 : 1;
            ++position;
            if (ScalarTraits<S>::is_zero(a(row, c)) || ScalarTraits<S>::is_zero(minors[rest])) continue;
            S term = a(row, c) * minors[rest];
            acc = sign > 0 ? S(acc + term) : S(acc - term);
        }
        minors[set] = acc;
    }
    return minors.back();
}

/// Inverse via the adjugate. Requires det to be a unit of the ring.
template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
    const std::size_t n = a.rows();
    const S det = determinant(a);
    const S inv_det = ScalarTraits<S>::inverse(det);
    Matrix<S> out(n, n);
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> rows, cols;
            for (int r : all)
                if (r != static_cast<int>(j)) rows.push_back(r);
            for (int c : all)
                if (c != static_cast<int>(i)) cols.push_back(c);
            S cof = determinant(a.sub(rows, cols));
            if ((i + j) % 2) cof = -cof;
            out(i, j) = cof * inv_det;
        }
    }
    return out;
}

template <class S>
S trace(const Matrix<S>& a) {
    S t = ScalarTraits<S>::zero();
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t = t + a(i, i);
    return t;
}

} // namespace g2lab
