#pragma once

// Finite-dimensional modules as action matrices.
//
// Row-vector convention throughout: for a right module, m . a = m * rho(a) and
// rho(ab) = rho(a) rho(b). A left module over A is stored as a right module
// over opposite(A); its action matrices satisfy the same law with respect to
// the opposite multiplication. Module maps are matrices dim(source) x
// dim(target) acting on row vectors.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "torbench/algebra.hpp"

namespace torbench {

enum class Side { Left, Right };

constexpr Side flip(Side s) noexcept { return s == Side::Left ? Side::Right : Side::Left; }
std::string to_string(Side s);

class ModuleRep {
public:
    /// action[i] is the dim x dim matrix of basis element b_i.
    ModuleRep(AlgebraPtr algebra, Side side, std::vector<FpMatrix> action);
    static ModuleRep zero(AlgebraPtr algebra, Side side);

    /// The algebra the module is declared over.
    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    /// The algebra acting from the right in storage: algebra() or its opposite.
    const AlgebraPtr& acting() const noexcept { return acting_; }
    Side side() const noexcept { return side_; }
    std::size_t dim() const noexcept { return dim_; }
    std::uint32_t modulus() const noexcept { return algebra_->modulus(); }
    const std::vector<FpMatrix>& action() const noexcept { return action_; }
    const FpMatrix& action(std::size_t i) const { return action_.at(i); }

    /// Matrix of the algebra element with coordinates `a`.
    FpMatrix act(std::span<const Scalar> a) const;

    /// Same algebra and side, new action matrices.
    ModuleRep with_action(std::vector<FpMatrix> action) const;
    /// Same algebra structure; flipped side; caller supplies matching action.
    ModuleRep flipped(std::vector<FpMatrix> action) const;

    bool compatible_with(const ModuleRep& other) const;

    bool operator==(const ModuleRep& other) const;

private:
    ModuleRep(AlgebraPtr algebra, AlgebraPtr acting, Side side, std::vector<FpMatrix> action);

    AlgebraPtr algebra_;
    AlgebraPtr acting_;
    Side side_;
    std::size_t dim_;
    std::vector<FpMatrix> action_;
};

struct ModuleMap {
    ModuleRep source;
    ModuleRep target;
    FpMatrix matrix;  // dim(source) x dim(target)
};

struct ShortExactSeq {
    ModuleMap incl;  // A -> B
    ModuleMap proj;  // B -> C

    const ModuleRep& left() const { return incl.source; }
    const ModuleRep& middle() const { return incl.target; }
    const ModuleRep& right() const { return proj.target; }
};

struct Check {
    bool ok = true;
    std::string message;
    explicit operator bool() const noexcept { return ok; }
};

Check validate_module(const ModuleRep& m);
Check validate_map(const ModuleMap& f);
Check validate_ses(const ShortExactSeq& s);

/// Throws UsageError if the modules live over different algebras or sides.
void require_compatible(const ModuleRep& a, const ModuleRep& b, const char* what);

ModuleMap identity_map(const ModuleRep& m);
ModuleMap zero_map(const ModuleRep& source, const ModuleRep& target);
/// f then g.
ModuleMap compose(const ModuleMap& f, const ModuleMap& g);

ModuleRep free_module(const AlgebraPtr& a, Side side, std::size_t rank);
ModuleRep regular_module(const AlgebraPtr& a, Side side);

struct Submodule {
    ModuleRep module;
    ModuleMap inclusion;
    FpMatrix basis() const { return inclusion.matrix; }  // RREF rows in ambient coordinates
};

struct Quotient {
    ModuleRep module;
    ModuleMap projection;
    FpMatrix section;  // linear (not equivariant) lift of the quotient basis
};

/// Smallest submodule containing the rows of `gens`.
Submodule submodule(const ModuleRep& m, const FpMatrix& gens);
/// Submodule on a subspace already known to be action-closed.
Submodule submodule_from_closed_basis(const ModuleRep& m, const FpMatrix& basis);
Quotient quotient(const ModuleRep& m, const FpMatrix& sub_basis);
Quotient quotient(const ModuleRep& m, const Submodule& sub);

Submodule kernel(const ModuleMap& f);
Submodule image(const ModuleMap& f);
Quotient cokernel(const ModuleMap& f);

/// A/Ax for left modules, A/xA for right modules.
ModuleRep cyclically_presented(const AlgebraPtr& a, Side side, std::span<const Scalar> x);

struct DirectSum {
    ModuleRep module;
    std::vector<ModuleMap> injections;
    std::vector<ModuleMap> projections;
};

DirectSum direct_sum(const std::vector<ModuleRep>& parts, const AlgebraPtr& algebra, Side side);
ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b);
ModuleRep power(const ModuleRep& m, std::size_t copies);

/// Basis of Hom(M, N), each element an equivariant matrix.
std::vector<FpMatrix> hom_basis_matrices(const ModuleRep& m, const ModuleRep& n);
std::vector<ModuleMap> hom_basis(const ModuleRep& m, const ModuleRep& n);
std::size_t hom_dim(const ModuleRep& m, const ModuleRep& n);

struct Pushout {
    ModuleRep module;
    ModuleMap from_first;   // P -> Q
    ModuleMap from_second;  // F -> Q
};

/// Pushout of P <-f- K -j-> F: Q = (P + F) / {(f(k), -j(k))}.
Pushout pushout(const ModuleMap& f, const ModuleMap& j);

/// Field dual Hom_k(M, k), side flipped.
ModuleRep dual(const ModuleRep& m);

enum class Verdict { Yes, No, Unknown };

struct IsoVerdict {
    Verdict verdict = Verdict::Unknown;
    std::optional<FpMatrix> witness;  // invertible equivariant M -> N when Yes
    std::string reason;
};

IsoVerdict is_isomorphic(const ModuleRep& m, const ModuleRep& n, std::uint64_t seed = 0);
/// Verifies invertibility and equivariance of an isomorphism witness.
bool verify_isomorphism(const ModuleRep& m, const ModuleRep& n, const FpMatrix& witness);

/// Quotient of a free module of random rank in [1, max_rank] by a submodule
/// generated by at most max_gens random elements. max_rank = 0 gives zero.
ModuleRep random_module(const AlgebraPtr& a, Side side, std::mt19937_64& rng, std::size_t max_gens,
                        std::size_t max_rank);
ModuleRep random_module(const AlgebraPtr& a, Side side, std::uint64_t seed, std::size_t max_gens,
                        std::size_t max_rank);

/// Random vector with entries in [0, p).
Vec random_vector(std::mt19937_64& rng, std::size_t n, std::uint32_t p);

/// Pairwise non-isomorphic simple modules, found as composition factors of
/// the regular module by exhaustive search for minimal cyclic submodules.
std::vector<ModuleRep> simple_modules(const AlgebraPtr& a, Side side);

}  // namespace torbench
