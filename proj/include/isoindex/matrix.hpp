#pragma once

#include <optional>
#include <vector>

#include "isoindex/ring.hpp"

namespace isoindex {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix of exact scalars. 0xN and Nx0 shapes are legal.
class Matrix {
public:
    Matrix(RingSpec ring, std::size_t rows, std::size_t cols);
    static Matrix from_rows(const RingSpec& ring,
                            const std::vector<std::vector<long>>& rows,
                            std::size_t cols_hint = 0);
    static Matrix identity(const RingSpec& ring, std::size_t n);

    const RingSpec& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    Vec row(std::size_t i) const;
    void set_row(std::size_t i, const Vec& v);

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool is_zero() const;

    /// Entry-wise ring conversion; legal pairs are Z->Q, Z->GF(p),
    /// GF(p)->GF(p,k).
    Matrix convert(const RingSpec& target) const;

private:
    RingSpec ring_;
    std::size_t rows_, cols_;
    std::vector<Scalar> entries_;
};

struct RrefResult {
    Matrix reduced;
    std::size_t rank;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over a field; Z inputs are promoted to Q first.
/// Pivot choice is the first nonzero entry in column order.
RrefResult rref(const Matrix& m);

/// RREF basis (as rows) of the right null space {x : m x = 0}.
Matrix kernel_basis(const Matrix& m);

std::size_t rank(const Matrix& m);

// Vector helpers used throughout the isotropy code.
Vec zero_vec(const RingSpec& ring, std::size_t n);
bool vec_is_zero(const Vec& v);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Scalar& a, const Vec& v);
Vec apply(const Matrix& m, const Vec& x);  // m * x

/// Kronecker pair: coordinate i*dim(v)+j equals u_i * v_j.
Vec tensor_pair(const Vec& u, const Vec& v);

/// Decides x (x) v = u (x) y; when equal the vectors are proportional and the
/// unique scale a with u = a x, v = a y is returned.
std::optional<Scalar> rank_one_match(const Vec& x, const Vec& v, const Vec& u, const Vec& y);

}  // namespace isoindex
