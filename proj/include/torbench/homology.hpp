#pragma once

// Tensor products, free resolutions, syzygies, Tor and Ext.
//
// A free resolution is stored by the images of its free generators: at degree
// n >= 1, row j of generators(n) is the image of e_j in P_{n-1}, written in
// block coordinates (block i holds the algebra coefficient a_ij). Tor and Ext
// complexes are assembled from those coefficients without forming Hom or
// tensor spaces of free modules explicitly.

#include <optional>
#include <vector>

#include "torbench/module.hpp"

namespace torbench {

struct TensorProduct {
    std::size_t dim = 0;
    FpMatrix projection;  // (dim M * dim N) x dim, row convention
    FpMatrix section;     // dim x (dim M * dim N)
};

/// M right, N left over the same algebra.
TensorProduct tensor(const ModuleRep& m, const ModuleRep& n);
/// Matrix of f (x) N between the tensor quotients.
FpMatrix tensor_map(const ModuleMap& f, const ModuleRep& n, const TensorProduct& src, const TensorProduct& dst);

class FreeResolution {
public:
    explicit FreeResolution(ModuleRep m);

    /// Ensures P_0 .. P_length and d_1 .. d_length exist.
    void extend_to(std::size_t length);

    const ModuleRep& module() const noexcept { return module_; }
    std::size_t computed_length() const noexcept { return gens_.size() - 1; }
    const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
    std::size_t rank(std::size_t n) const { return ranks_.at(n); }

    /// Row j: image of the j-th free generator of P_n in P_{n-1} (M when n = 0).
    const FpMatrix& generators(std::size_t n) const { return gens_.at(n); }
    /// Coefficient a_ij of d_n(e_j) = sum_i e_i a_ij, n >= 1.
    Vec coefficient(std::size_t n, std::size_t j, std::size_t i) const;

    ModuleRep free(std::size_t n) const;
    ModuleMap differential(std::size_t n) const;  // d_n : P_n -> P_{n-1}, n >= 1
    ModuleMap augmentation() const;               // P_0 -> M

    /// syzygy(0) = M; syzygy(n) = ker(P_{n-1} -> P_{n-2}) as a submodule of P_{n-1}.
    Submodule syzygy(std::size_t n);

    /// Rank identities at every computed degree.
    Check verify_exactness() const;

private:
    ModuleRep module_;
    ModuleRep regular_;
    std::vector<std::size_t> ranks_;
    std::vector<FpMatrix> gens_;
    std::vector<FpMatrix> kernels_;  // kernels_[n]: basis of ker(P_n -> P_{n-1}) in P_n coordinates
};

/// Irredundant generating set: RREF basis rows of the subspace, then each row
/// dropped in order if the remaining rows still generate, then pairs replaced
/// by their sum while the set still generates.
FpMatrix select_generators(const ModuleRep& ambient, const FpMatrix& subspace);

/// Matrix of the free-module map whose generator images are `gens`.
FpMatrix free_map_matrix(const Algebra& acting, const FpMatrix& gens, std::size_t target_rank);

ModuleRep syzygy(const ModuleRep& m, std::size_t n);

enum class Resolve { First, Second };

struct TorResult {
    std::size_t degree = 0;
    std::size_t dim = 0;
    FpMatrix cycles;  // representatives of a homology basis in the tensored complex
};

/// Tor_n(M, N) for M right and N left. Resolve::Second resolves N instead of M.
TorResult tor(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod, Resolve which = Resolve::First);
/// dim Tor_k(X, Y) for k = 0..max_degree from an existing resolution of X.
/// Y must be a module over the opposite of X's acting algebra.
std::vector<std::size_t> tor_dims(FreeResolution& res, const ModuleRep& y, std::size_t max_degree);

struct ExtResult {
    std::size_t degree = 0;
    std::size_t dim = 0;
    /// Maps from syzygy(M, degree) to N representing a basis (filled on request).
    std::vector<ModuleMap> representatives;
};

ExtResult ext(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod, bool with_representatives = false);
std::vector<std::size_t> ext_dims(FreeResolution& res, const ModuleRep& y, std::size_t max_degree);

/// Ext^n classes as maps syzygy(M, n) -> N modulo restrictions from P_{n-1}.
/// The returned syzygy embedding is the one the maps are defined on.
struct ExtClasses {
    Submodule syzygy;
    std::vector<ModuleMap> representatives;
};
ExtClasses ext_classes(FreeResolution& res, const ModuleRep& y, std::size_t n);

struct LongExactWindow {
    std::size_t degree = 0;
    std::size_t tor_a = 0, tor_b = 0, tor_c = 0;
    std::size_t rank_alpha = 0;      // Tor_n(A) -> Tor_n(B)
    std::size_t rank_beta = 0;       // Tor_n(B) -> Tor_n(C)
    std::size_t rank_connecting = 0; // Tor_n(C) -> Tor_{n-1}(A)
    bool exact = true;
};

struct ConnectingReport {
    std::size_t bound = 0;
    std::vector<LongExactWindow> windows;
    bool ok = true;
    std::string message;
};

/// Checks exactness of the long Tor sequence of 0 -> A -> B -> C -> 0 against S
/// at every position up to degree `bound`, with the connecting map computed
/// by the snake construction.
ConnectingReport connecting_check(const ShortExactSeq& ses, const ModuleRep& s, std::size_t bound);

struct ProductComparison {
    std::size_t source_dim = 0;
    std::size_t target_dim = 0;
    std::size_t rank = 0;
    bool injective = false;
    bool surjective = false;
    FpMatrix matrix;
};

/// The canonical map (prod X_i) (x) M -> prod (X_i (x) M) for a finite family.
ProductComparison product_comparison(const std::vector<ModuleRep>& family, const ModuleRep& m);

struct DualityCheck {
    std::size_t degree = 0;
    std::size_t ext_dim = 0;
    std::size_t tor_dim = 0;
    bool ok = false;
};

/// dim Ext^n(M, dual(N)) == dim Tor_n(M, N).
DualityCheck ext_tor_duality_check(std::size_t n, const ModuleRep& m, const ModuleRep& n_mod);

}  // namespace torbench
