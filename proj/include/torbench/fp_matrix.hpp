#pragma once

// Dense exact linear algebra over a prime field GF(p), p < 2^16.
//
// Conventions: matrices are row-major. kernel_basis/solve/image_basis use the
// column-vector convention (m * v). Module code elsewhere uses row vectors
// (v * m); left_kernel_basis and row_space_basis serve that side.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace torbench {

using Scalar = std::uint32_t;
using Vec = std::vector<Scalar>;

/// Raised when operands disagree on modulus or shape.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

bool is_prime(std::uint32_t p);

/// Arithmetic in GF(p). Cheap to copy; holds only the modulus.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t modulus() const noexcept { return p_; }

    Scalar reduce(long long v) const noexcept {
        long long r = v % static_cast<long long>(p_);
        return static_cast<Scalar>(r < 0 ? r + p_ : r);
    }
    Scalar add(Scalar a, Scalar b) const noexcept {
        Scalar s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Scalar sub(Scalar a, Scalar b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const noexcept {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Scalar inv(Scalar a) const;

    bool operator==(const PrimeField&) const = default;

private:
    std::uint32_t p_;
};

/// A field element bundled with its modulus.
struct FpScalar {
    Scalar value = 0;
    std::uint32_t p = 2;
    bool operator==(const FpScalar&) const = default;
};

class FpMatrix {
public:
    FpMatrix() : FpMatrix(0, 0, 2) {}
    FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);

    static FpMatrix identity(std::size_t n, std::uint32_t p);
    /// Entries are reduced mod p.
    static FpMatrix from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols,
                              std::uint32_t p);
    static FpMatrix from_row_vectors(const std::vector<Vec>& rows, std::size_t cols, std::uint32_t p);
    static FpMatrix row_vector(const Vec& v, std::uint32_t p);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t modulus() const noexcept { return p_; }
    PrimeField field() const { return PrimeField(p_); }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    Vec row_vec(std::size_t r) const { return Vec(row(r).begin(), row(r).end()); }
    const std::vector<Scalar>& data() const noexcept { return data_; }

    bool is_zero() const;

    bool operator==(const FpMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::uint32_t p_;
    std::vector<Scalar> data_;
};

void require_same_modulus(const FpMatrix& a, const FpMatrix& b);

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
FpMatrix operator+(const FpMatrix& a, const FpMatrix& b);
FpMatrix operator-(const FpMatrix& a, const FpMatrix& b);
FpMatrix scale(const FpMatrix& a, Scalar s);

FpMatrix transpose(const FpMatrix& m);
FpMatrix hstack(const FpMatrix& a, const FpMatrix& b);
FpMatrix vstack(const FpMatrix& a, const FpMatrix& b);
FpMatrix vstack(const std::vector<FpMatrix>& blocks, std::size_t cols, std::uint32_t p);
FpMatrix block_diag(const std::vector<FpMatrix>& blocks, std::uint32_t p);
FpMatrix kron(const FpMatrix& a, const FpMatrix& b);
FpMatrix select_rows(const FpMatrix& m, std::span<const std::size_t> idx);
FpMatrix select_cols(const FpMatrix& m, std::span<const std::size_t> idx);
FpMatrix slice(const FpMatrix& m, std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc);

/// Row vector times matrix.
Vec vec_mul(std::span<const Scalar> v, const FpMatrix& m);
Vec mat_vec(const FpMatrix& m, std::span<const Scalar> v);
bool is_zero(std::span<const Scalar> v);

struct Rref {
    FpMatrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

Rref rref(const FpMatrix& m);
std::size_t rank(const FpMatrix& m);

/// Rows span {v : m v = 0}; rows returned in RREF.
FpMatrix kernel_basis(const FpMatrix& m);
/// Rows span {v : v m = 0}; rows returned in RREF.
FpMatrix left_kernel_basis(const FpMatrix& m);

/// Some x with m x = b, free variables zero; nullopt when b is outside the column space.
std::optional<Vec> solve(const FpMatrix& m, std::span<const Scalar> b);

/// Rows form the RREF basis of the column space of m.
FpMatrix image_basis(const FpMatrix& m);
/// Rows form the RREF basis of the row space of m.
FpMatrix row_space_basis(const FpMatrix& m);

struct QuotientSpace {
    FpMatrix projection;  // q x n; projection * v == 0 iff v in span(sub)
    FpMatrix section;     // q x n; rows lift the standard basis of the quotient
    std::size_t dim = 0;
};

QuotientSpace quotient_space(std::size_t ambient_dim, const FpMatrix& sub_basis);

/// X with x * m == I (m has full column rank); nullopt otherwise.
std::optional<FpMatrix> left_inverse(const FpMatrix& m);
std::optional<FpMatrix> inverse(const FpMatrix& m);

/// True when every row of `sub` lies in the row space of `space`.
bool row_space_contains(const FpMatrix& space, const FpMatrix& sub);

/// Incrementally maintained echelon basis for a growing subspace of GF(p)^n.
class EchelonBasis {
public:
    EchelonBasis(std::size_t n, std::uint32_t p);

    /// Inserts v; returns true when it enlarged the span.
    bool insert(std::span<const Scalar> v);
    bool contains(std::span<const Scalar> v) const;
    std::size_t dim() const noexcept { return rows_.size(); }
    std::size_t ambient() const noexcept { return n_; }
    /// RREF basis of the span.
    FpMatrix basis() const;

private:
    Vec reduce(std::span<const Scalar> v) const;

    std::size_t n_;
    PrimeField f_;
    std::vector<Vec> rows_;               // each row has a leading 1 at pivots_[i]
    std::vector<std::size_t> pivots_;
};

std::string to_string(const FpMatrix& m);

}  // namespace torbench
