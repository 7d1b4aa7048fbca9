#include "isoindex/matrix.hpp"

#include <algorithm>

namespace isoindex {

Matrix::Matrix(RingSpec ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      entries_(rows * cols, Scalar::zero(ring_)) {}

Matrix Matrix::from_rows(const RingSpec& ring,
                         const std::vector<std::vector<long>>& rows,
                         std::size_t cols_hint) {
    std::size_t cols = cols_hint;
    if (!rows.empty()) cols = rows[0].size();
    Matrix m(ring, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("ragged row list");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Scalar(ring, rows[i][j]);
    }
    return m;
}

Matrix Matrix::identity(const RingSpec& ring, std::size_t n) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(ring);
    return m;
}

Vec Matrix::row(std::size_t i) const {
    Vec v;
    v.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v.push_back(at(i, j));
    return v;
}

void Matrix::set_row(std::size_t i, const Vec& v) {
    if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

Matrix Matrix::transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matmul shape mismatch");
    Matrix r(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

bool Matrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Scalar& s) { return s.is_zero(); });
}

Matrix Matrix::convert(const RingSpec& target) const {
    Matrix r(target, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Scalar& s = at(i, j);
            switch (ring_.kind()) {
                case RingKind::Integers: {
                    if (target.kind() == RingKind::ExtField)
                        throw std::invalid_argument("illegal ring conversion from Z");
                    BigRat v = s.rational();
                    r.at(i, j) = Scalar::from_int(target, numerator(v));
                    break;
                }
                case RingKind::Rationals:
                    if (target.kind() != RingKind::Rationals)
                        throw std::invalid_argument("illegal ring conversion from Q");
                    r.at(i, j) = s;
                    break;
                case RingKind::PrimeField:
                    if (!(target.kind() == RingKind::ExtField && target.p() == ring_.p()) &&
                        target != ring_)
                        throw std::invalid_argument("illegal ring conversion from GF(p)");
                    r.at(i, j) = Scalar::from_int(target, BigInt(s.index()));
                    break;
                case RingKind::ExtField:
                    if (target != ring_)
                        throw std::invalid_argument("illegal ring conversion from GF(p,k)");
                    r.at(i, j) = s;
                    break;
            }
        }
    return r;
}

RrefResult rref(const Matrix& input) {
    Matrix m = input.ring().kind() == RingKind::Integers
                   ? input.convert(RingSpec::rationals())
                   : input;
    if (!m.ring().is_field()) throw std::invalid_argument("rref: field required");
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t pivot_row = r;
        while (pivot_row < m.rows() && m.at(pivot_row, c).is_zero()) ++pivot_row;
        if (pivot_row == m.rows()) continue;
        if (pivot_row != r)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m.at(r, j), m.at(pivot_row, j));
        Scalar inv = m.at(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = inv * m.at(r, j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), r, std::move(pivots)};
}

Matrix kernel_basis(const Matrix& input) {
    RrefResult rr = rref(input);
    const Matrix& m = rr.reduced;
    const RingSpec& ring = m.ring();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    Matrix basis(ring, free_cols.size(), m.cols());
    for (std::size_t b = 0; b < free_cols.size(); ++b) {
        std::size_t f = free_cols[b];
        basis.at(b, f) = Scalar::one(ring);
        for (std::size_t r = 0; r < rr.rank; ++r)
            basis.at(b, rr.pivots[r]) = -m.at(r, f);
    }
    // canonicalize: leading entries of the free-column basis need not be in
    // echelon position
    return rref(basis).reduced;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Vec zero_vec(const RingSpec& ring, std::size_t n) { return Vec(n, Scalar::zero(ring)); }

bool vec_is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    Vec r;
    r.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    Vec r;
    r.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
    return r;
}

Vec vec_scale(const Scalar& a, const Vec& v) {
    Vec r;
    r.reserve(v.size());
    for (const Scalar& s : v) r.push_back(a * s);
    return r;
}

Vec apply(const Matrix& m, const Vec& x) {
    if (x.size() != m.cols()) throw std::invalid_argument("apply shape mismatch");
    Vec r = zero_vec(m.ring(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) r[i] = r[i] + m.at(i, j) * x[j];
    return r;
}

Vec tensor_pair(const Vec& u, const Vec& v) {
    Vec r;
    r.reserve(u.size() * v.size());
    for (const Scalar& a : u)
        for (const Scalar& b : v) r.push_back(a * b);
    return r;
}

std::optional<Scalar> rank_one_match(const Vec& x, const Vec& v, const Vec& u, const Vec& y) {
    if (vec_is_zero(x) || vec_is_zero(y))
        throw std::invalid_argument("rank_one_match: x, y must be nonzero");
    if (tensor_pair(x, v) != tensor_pair(u, y)) return std::nullopt;
    // x (x) v = u (x) y with x, y != 0 forces u = a x, v = a y
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) return u[i] / x[i];
    return std::nullopt;  // unreachable: x != 0
}

}  // namespace isoindex
