#pragma once

// Finite-dimensional unital associative algebras over GF(p), given by
// structure constants in a fixed basis b_0..b_{d-1}.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torbench/fp_matrix.hpp"

namespace torbench {

class Algebra {
public:
    /// mul[i][j] holds the coordinates of b_i * b_j. Entries are reduced mod p.
    Algebra(std::string name, std::uint32_t p, std::vector<std::vector<Vec>> mul, Vec unit);

    const std::string& name() const noexcept { return name_; }
    std::uint32_t modulus() const noexcept { return p_; }
    std::size_t dim() const noexcept { return dim_; }
    const Vec& unit() const noexcept { return unit_; }
    const Vec& product(std::size_t i, std::size_t j) const { return mul_[i][j]; }
    const std::vector<std::vector<Vec>>& table() const noexcept { return mul_; }

    /// Coordinates of x * y.
    Vec multiply(std::span<const Scalar> x, std::span<const Scalar> y) const;
    Vec basis_vector(std::size_t i) const;

    /// Same multiplication table and unit (names are ignored).
    bool same_structure(const Algebra& other) const;

    /// Basis indices whose elements, together with 1, generate the algebra.
    const std::vector<std::size_t>& generators() const noexcept { return generators_; }

private:
    std::string name_;
    std::uint32_t p_;
    std::size_t dim_;
    std::vector<std::vector<Vec>> mul_;
    Vec unit_;
    std::vector<std::size_t> generators_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct AlgebraValidation {
    bool valid = true;
    std::string message;  // names the first violated identity
};

AlgebraValidation validate_algebra(const Algebra& a);

/// mul_op[i][j] = mul[j][i].
Algebra opposite(const Algebra& a);

bool is_commutative(const Algebra& a);

/// GF(p)[x]/(x^n) with basis 1, x, ..., x^{n-1}.
Algebra build_truncated_poly(std::uint32_t p, std::size_t n);
/// n x n upper triangular matrices; basis E_ij (i <= j) in row-major order.
Algebra build_upper_triangular(std::uint32_t p, std::size_t n);
/// Group algebra of the cyclic group of order n; basis g^0..g^{n-1}.
Algebra build_group_algebra_cyclic(std::uint32_t p, std::size_t n);

}  // namespace torbench
