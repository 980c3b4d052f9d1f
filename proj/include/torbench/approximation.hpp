#pragma once

// Traces, filtrations, approximation certificates, the small-object
// completion 0 -> K -> P -> N -> 0 and the precover/preenvelope builders.

#include <optional>
#include <string>
#include <vector>

#include "torbench/torpair.hpp"

namespace torbench {

/// Layer a of a filtration: G_{a+1}/G_a is isomorphic to generator `tag`.
/// Row v of `lift` is the image of basis vector v of the generator in
/// G_{a+1}; the isomorphism is v -> v * lift modulo G_a.
struct FiltrationLayer {
    std::size_t tag = 0;
    FpMatrix lift;
};

struct FiltrationWitness {
    ModuleRep module;
    std::vector<FpMatrix> chain;  // chain[0] = 0, chain.back() spans module; RREF rows
    std::vector<FiltrationLayer> layers;
};

/// 0 <= g, the single-layer witness of a generator.
FiltrationWitness trivial_filtration(const ModuleRep& g, std::size_t tag);
/// Concatenated witness of a direct sum, parts in order.
FiltrationWitness sum_filtration(const std::vector<FiltrationWitness>& parts, const DirectSum& sum);
Check filtration_verify(const FiltrationWitness& w, const std::vector<ModuleRep>& gens);

Submodule trace(const std::vector<ModuleRep>& xs, const ModuleRep& m);
bool gen_membership(const ModuleRep& m, const std::vector<ModuleRep>& xs);

enum class ApproxKind { Precover, Preenvelope };

struct TestRecord {
    std::size_t induced_rank = 0;
    std::size_t required = 0;  // dim of the Hom space that must be reached
    bool ok = false;
};

struct OrthogonalityReport {
    std::vector<std::size_t> ext1_dims;  // Ext^1(X, kernel) per test module
    bool ok = true;
};

struct ApproxCertificate {
    ApproxKind kind = ApproxKind::Precover;
    ModuleMap map;
    std::vector<ModuleRep> test_set;
    std::vector<TestRecord> records;
    std::optional<OrthogonalityReport> kernel_orthogonality;
    bool ok = true;
    std::string message;
};

/// Every map X' -> M from a test module factors through f.
ApproxCertificate precover_verify(const ModuleMap& f, const std::vector<ModuleRep>& test_set);
/// Every map M -> Y into a test module factors through h.
ApproxCertificate preenvelope_verify(const ModuleMap& h, const std::vector<ModuleRep>& test_set);

struct CompletionStage {
    std::size_t generator = 0;
    std::size_t multiplicity = 0;  // dim Ext^1(g, K_t)
    std::size_t dim = 0;           // dim K_{t+1}
};

/// Outcome of the small-object iteration. On Capped, `ses` and the
/// filtration describe the last stage reached.
struct Completion {
    Status status = Status::Pass;
    ShortExactSeq ses;              // 0 -> K -> P -> N -> 0
    FiltrationWitness filtration;   // of N
    /// The same chain lifted to P: p_chain[0] = image of K.
    std::vector<FpMatrix> p_chain;
    std::vector<FiltrationLayer> p_layers;
    std::vector<CompletionStage> stages;
    std::string message;
};

inline constexpr std::size_t kCompletionDimCap = 4096;

Completion et_completion(const ModuleRep& k, const std::vector<ModuleRep>& gens, std::size_t cap = 32,
                         std::size_t dim_cap = kCompletionDimCap);

/// G-filtered test modules: generators, pairwise sums, extensions realised
/// from Ext^1 classes between generators, and completions of generators.
struct Battery {
    std::vector<ModuleRep> modules;
    std::vector<FiltrationWitness> witnesses;
};

inline constexpr std::size_t kBatteryCap = 24;

Battery filtered_battery(const std::vector<ModuleRep>& gens, std::size_t cap = 32, std::size_t limit = kBatteryCap);

/// The extension 0 -> b -> E -> a -> 0 classified by an Ext^1(a, b) class
/// given as a map from the first syzygy of a.
ShortExactSeq extension_from_class(FreeResolution& res_a, const ModuleMap& cls);

struct Cover {
    ModuleMap map;                 // F -> M
    FiltrationWitness filtration;  // of F
};

/// F = sum over the battery of X^{dim Hom(X, M)} with the Hom bases as
/// components; its image is the trace of the battery in M.
Cover battery_cover(const ModuleRep& m, const Battery& battery);

struct PrecoverResult {
    Status status = Status::Pass;
    ModuleMap map;                 // Q -> M
    FiltrationWitness filtration;  // of Q
    Completion completion;         // of ker f
    ApproxCertificate certificate;
    std::string message;
};

/// Completes ker f to P in gens-perp and pushes out along ker f -> F.
/// The certificate checks factoring against `test_set` and Ext^1(X, ker g) = 0
/// for every X in `test_set`.
PrecoverResult deconstructible_precover(const ModuleRep& m, const std::vector<ModuleRep>& gens, const Cover& cover,
                                        const std::vector<ModuleRep>& test_set, std::size_t cap = 32);

/// h : M -> sum over G of G^{dim Hom(M, G)}, assembled from the Hom bases.
ModuleMap preenvelope_candidate(const ModuleRep& m, const std::vector<ModuleRep>& gset);

}  // namespace torbench
