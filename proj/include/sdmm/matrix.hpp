/*
 * matrix.hpp
 *
 * Copyright 2026 the sdmm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "sdmm/galois.hpp"
#include "sdmm/rng.hpp"

namespace sdmm {

/// Dense matrix over a Field.  Entries are stored as canonical raw values;
/// the field travels with the matrix, and mixing matrices over distinct
/// fields throws FieldMismatch like the scalar layer does.
class Matrix {
  public:
    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(const Field& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one().value();
        return m;
    }

    static Matrix uniform_random(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
        Matrix m(f, rows, cols);
        for (auto& v : m.a_) v = rng.field_element(f);
        return m;
    }

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    FieldElement operator()(std::size_t i, std::size_t j) const { return field_.element(at(i, j)); }
    void set(std::size_t i, std::size_t j, const FieldElement& e) {
        require_same_field(field_, e.field());
        at(i, j) = e.value();
    }

    bool is_zero() const {
        for (auto v : a_) {
            if (v != 0) return false;
        }
        return true;
    }

    bool operator==(const Matrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.add(a_[i], o.a_[i]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.sub(a_[i], o.a_[i]);
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const std::uint64_t aik = at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    r.at(i, j) = field_.add(r.at(i, j), field_.mul(aik, o.at(k, j)));
                }
            }
        }
        return r;
    }

    Matrix scaled(std::uint64_t c) const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.mul(a_[i], c);
        return r;
    }

    /// *this += c * other (the workhorse of share encoding).
    void axpy(std::uint64_t c, const Matrix& other) {
        check_same_shape(other);
        if (c == 0) return;
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] = field_.add(a_[i], field_.mul(c, other.a_[i]));
    }

    Matrix transposed() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::vector<std::uint64_t> row(std::size_t i) const {
        return std::vector<std::uint64_t>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    void set_row(std::size_t i, const std::vector<std::uint64_t>& v) {
        if (v.size() != cols_) throw ShapeError("row length mismatch");
        for (std::size_t j = 0; j < cols_; ++j) at(i, j) = field_.canonical(v[j]);
    }

    Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
        if (row0 + nrows > rows_ || col0 + ncols > cols_) throw ShapeError("block out of range");
        Matrix r(field_, nrows, ncols);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j) r.at(i, j) = at(row0 + i, col0 + j);
        return r;
    }

    void place_block(std::size_t row0, std::size_t col0, const Matrix& b) {
        require_same_field(field_, b.field_);
        if (row0 + b.rows_ > rows_ || col0 + b.cols_ > cols_) throw ShapeError("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) at(row0 + i, col0 + j) = b.at(i, j);
    }

    Matrix select_columns(const std::vector<std::size_t>& idx) const {
        Matrix r(field_, rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (idx[j] >= cols_) throw ShapeError("column index out of range");
            for (std::size_t i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
        }
        return r;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const {
        Matrix r(field_, idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= rows_) throw ShapeError("row index out of range");
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(idx[i], j);
        }
        return r;
    }

    static Matrix vstack(const Matrix& top, const Matrix& bottom) {
        require_same_field(top.field_, bottom.field_);
        if (top.cols_ != bottom.cols_) throw ShapeError("vstack width mismatch");
        Matrix r(top.field_, top.rows_ + bottom.rows_, top.cols_);
        r.place_block(0, 0, top);
        r.place_block(top.rows_, 0, bottom);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            for (std::size_t j = 0; j < m.cols_; ++j) {
                if (j) os << ' ';
                os << m.at(i, j);
            }
            os << '\n';
        }
        return os;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
    }

    Field field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> a_;
};

/// Reduced row echelon form; optionally reports the pivot columns.
inline Matrix rref(const Matrix& m, std::vector<std::size_t>* pivots = nullptr) {
    const Field& f = m.field();
    Matrix r = m;
    if (pivots) pivots->clear();
    std::size_t lead = 0;
    for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
        std::size_t sel = lead;
        while (sel < r.rows() && r.at(sel, col) == 0) ++sel;
        if (sel == r.rows()) continue;
        if (sel != lead) {
            for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r.at(sel, j), r.at(lead, j));
        }
        const std::uint64_t piv_inv = f.inv(r.at(lead, col));
        for (std::size_t j = col; j < r.cols(); ++j) r.at(lead, j) = f.mul(r.at(lead, j), piv_inv);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == lead || r.at(i, col) == 0) continue;
            const std::uint64_t factor = r.at(i, col);
            for (std::size_t j = col; j < r.cols(); ++j)
                r.at(i, j) = f.sub(r.at(i, j), f.mul(factor, r.at(lead, j)));
        }
        if (pivots) pivots->push_back(col);
        ++lead;
    }
    return r;
}

inline std::size_t rank(const Matrix& m) {
    std::vector<std::size_t> piv;
    rref(m, &piv);
    return piv.size();
}

inline Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("only square matrices invert");
    const std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    aug.place_block(0, 0, m);
    aug.place_block(0, n, Matrix::identity(m.field(), n));
    std::vector<std::size_t> piv;
    Matrix red = rref(aug, &piv);
    if (piv.size() != n || (n > 0 && piv[n - 1] >= n)) throw SingularMatrix("matrix is singular");
    return red.block(0, n, n, n);
}

/// Rows span the right null space: every row v satisfies m v^T = 0.
inline Matrix nullspace(const Matrix& m) {
    const Field& f = m.field();
    std::vector<std::size_t> piv;
    Matrix red = rref(m, &piv);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }
    Matrix ns(f, free_cols.size(), m.cols());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t fc = free_cols[k];
        ns.at(k, fc) = f.one().value();
        for (std::size_t pi = 0; pi < piv.size(); ++pi) ns.at(k, piv[pi]) = f.neg(red.at(pi, fc));
    }
    return ns;
}

/// Canonical solution of A X = B (free variables set to zero), or nullopt if
/// any right-hand side is inconsistent.  X has shape A.cols() x B.cols().
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
    require_same_field(a.field(), b.field());
    if (a.rows() != b.rows()) throw ShapeError("solve: row count mismatch");
    const Field& f = a.field();
    Matrix aug(f, a.rows(), a.cols() + b.cols());
    aug.place_block(0, 0, a);
    aug.place_block(0, a.cols(), b);
    std::vector<std::size_t> piv;
    Matrix red = rref(aug, &piv);
    // pivots that land in the RHS block mean 0 = nonzero for some column
    for (auto c : piv) {
        if (c >= a.cols()) return std::nullopt;
    }
    Matrix x(f, a.cols(), b.cols());
    for (std::size_t pi = 0; pi < piv.size(); ++pi) {
        for (std::size_t j = 0; j < b.cols(); ++j) x.at(piv[pi], j) = red.at(pi, a.cols() + j);
    }
    return x;
}

}  // namespace sdmm
