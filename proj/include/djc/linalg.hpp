#pragma once

#include <optional>
#include <vector>

#include "djc/scalar.hpp"

namespace djc {

// Dense matrix over the fraction field QQ(i)(chart coordinates).
class Mat {
public:
    Mat() = default;
    Mat(const Chart& chart, int rows, int cols)
        : chart_(chart), rows_(rows), cols_(cols),
          a_(static_cast<size_t>(rows) * static_cast<size_t>(cols), Scalar(chart)) {}

    static Mat identity(const Chart& chart, int n) {
        Mat m(chart, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Scalar(chart, 1);
        return m;
    }

    const Chart& chart() const { return chart_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Scalar& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    Mat transposed() const {
        Mat t(chart_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Mat operator*(const Mat& o) const {
        require_same_chart(chart_, o.chart_);
        if (cols_ != o.rows_) throw Error("Shape", "matrix product shape mismatch");
        Mat r(chart_, rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Scalar& aik = (*this)(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    if (o(k, j).is_zero()) continue;
                    r(i, j) += aik * o(k, j);
                }
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) += o(i, j);
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r = *this;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) -= o(i, j);
        return r;
    }
    Mat operator-() const {
        Mat r = *this;
        for (auto& s : r.a_) s = -s;
        return r;
    }
    Mat scaled(const Scalar& s) const {
        Mat r = *this;
        for (auto& x : r.a_) x *= s;
        return r;
    }

    bool is_zero() const {
        for (const auto& s : a_)
            if (!s.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw Error("Shape", "matrix-vector shape mismatch");
        std::vector<Scalar> out(static_cast<size_t>(rows_), Scalar(chart_));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !v[static_cast<size_t>(j)].is_zero())
                    out[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
        return out;
    }

private:
    Chart chart_;
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> a_;
};

namespace linalg {

struct Echelon {
    Mat m;                    // reduced row echelon form
    std::vector<int> pivots;  // pivot column per pivot row
    int rank = 0;
};

// Exact Gauss-Jordan over the fraction field. Pivot selection prefers simple
// entries (fewest terms) to limit expression swell; pivot_order, when given,
// is the column visit order (used to test solution independence of varpi).
inline Echelon rref(Mat m, const std::vector<int>* pivot_order = nullptr) {
    Echelon e;
    std::vector<int> cols;
    if (pivot_order)
        cols = *pivot_order;
    else
        for (int c = 0; c < m.cols(); ++c) cols.push_back(c);

    int row = 0;
    for (int c : cols) {
        if (row >= m.rows()) break;
        int best = -1;
        size_t best_w = 0;
        for (int r = row; r < m.rows(); ++r) {
            if (m(r, c).is_zero()) continue;
            size_t w = m(r, c).weight();
            if (best < 0 || w < best_w) {
                best = r;
                best_w = w;
            }
        }
        if (best < 0) continue;
        if (best != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
        Scalar inv = Scalar(m.chart(), 1) / m(row, c);
        for (int j = 0; j < m.cols(); ++j) m(row, j) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, c).is_zero()) continue;
            Scalar f = m(r, c);
            for (int j = 0; j < m.cols(); ++j) m(r, j) -= f * m(row, j);
        }
        e.pivots.push_back(c);
        ++row;
    }
    e.rank = row;
    e.m = std::move(m);
    return e;
}

inline int rank(const Mat& m) { return rref(m).rank; }

// Basis of the right kernel.
inline std::vector<std::vector<Scalar>> kernel(const Mat& m) {
    Echelon e = rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int c : e.pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[static_cast<size_t>(c)]) continue;
        std::vector<Scalar> v(static_cast<size_t>(m.cols()), Scalar(m.chart()));
        v[static_cast<size_t>(c)] = Scalar(m.chart(), 1);
        for (int r = 0; r < e.rank; ++r) v[static_cast<size_t>(e.pivots[static_cast<size_t>(r)])] = -e.m(r, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of m x = rhs over the fraction field; throws when inconsistent.
inline std::vector<Scalar> solve(const Mat& m, const std::vector<Scalar>& rhs,
                                 const std::vector<int>* pivot_order = nullptr) {
    Mat aug(m.chart(), m.rows(), m.cols() + 1);
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = rhs[static_cast<size_t>(r)];
    }
    std::vector<int> cols;
    if (pivot_order)
        cols = *pivot_order;
    else
        for (int c = 0; c < m.cols(); ++c) cols.push_back(c);
    Echelon e = rref(std::move(aug), &cols);
    // consistency: no pivot may sit in the rhs column, i.e. a nonzero rhs row
    // with zero coefficient part
    for (int r = 0; r < m.rows(); ++r) {
        bool coeffs_zero = true;
        for (int c = 0; c < m.cols(); ++c)
            if (!e.m(r, c).is_zero()) {
                coeffs_zero = false;
                break;
            }
        if (coeffs_zero && !e.m(r, m.cols()).is_zero())
            throw InconsistentSystem("linear system has no solution over the fraction field");
    }
    std::vector<Scalar> x(static_cast<size_t>(m.cols()), Scalar(m.chart()));
    for (size_t r = 0; r < e.pivots.size(); ++r)
        x[static_cast<size_t>(e.pivots[r])] = e.m(static_cast<int>(r), m.cols());
    return x;
}

inline Mat invert(const Mat& m) {
    if (m.rows() != m.cols()) throw SingularMatrix("only square matrices can be inverted");
    int n = m.rows();
    Mat aug(m.chart(), n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = Scalar(m.chart(), 1);
    }
    std::vector<int> cols;
    for (int c = 0; c < n; ++c) cols.push_back(c);
    Echelon e = rref(std::move(aug), &cols);
    if (e.rank < n) throw SingularMatrix("matrix is generically rank-deficient");
    Mat inv(m.chart(), n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv(r, c) = e.m(r, n + c);
    return inv;
}

// Rank of the matrix evaluated at an exact sample point.
inline int rank_at(const Mat& m, const SamplePoint& pt) {
    std::vector<std::vector<CRat>> a(static_cast<size_t>(m.rows()),
                                     std::vector<CRat>(static_cast<size_t>(m.cols())));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) a[static_cast<size_t>(r)][static_cast<size_t>(c)] = m(r, c).evaluate(pt);
    int rank = 0;
    int rows = m.rows(), cols = m.cols();
    for (int c = 0; c < cols && rank < rows; ++c) {
        int p = -1;
        for (int r = rank; r < rows; ++r)
            if (!a[static_cast<size_t>(r)][static_cast<size_t>(c)].is_zero()) {
                p = r;
                break;
            }
        if (p < 0) continue;
        std::swap(a[static_cast<size_t>(p)], a[static_cast<size_t>(rank)]);
        CRat inv = inverse(a[static_cast<size_t>(rank)][static_cast<size_t>(c)]);
        for (int j = c; j < cols; ++j) a[static_cast<size_t>(rank)][static_cast<size_t>(j)] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            CRat f = a[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (f.is_zero()) continue;
            for (int j = c; j < cols; ++j)
                a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(rank)][static_cast<size_t>(j)];
        }
        ++rank;
    }
    return rank;
}

} // namespace linalg
} // namespace djc
