#pragma once

// Tor-pairs presented by a finite set X of left modules. The left class is
// T = {M right : Tor_1(M, x) = 0 for all x in X}. The right class is never
// materialised; every statement is tested against the generators.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "torbench/homology.hpp"

namespace torbench {

struct TorPairGen {
    std::string name;
    AlgebraPtr algebra;
    std::vector<ModuleRep> gens;  // left modules
};

Check validate_torpair(const TorPairGen& tp);

/// A natural number, "exceeds(bound)", or omega. exceeds and omega are
/// reported distinctly and not ordered against each other.
class ExtNat {
public:
    enum class Kind { Finite, Exceeds, Omega };

    static ExtNat finite(std::size_t n) { return ExtNat(Kind::Finite, n); }
    static ExtNat exceeds(std::size_t bound) { return ExtNat(Kind::Exceeds, bound); }
    static ExtNat omega() { return ExtNat(Kind::Omega, 0); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    /// The value for Finite, the bound for Exceeds.
    std::size_t value() const noexcept { return value_; }

    std::string to_string() const;
    bool operator==(const ExtNat&) const = default;

private:
    ExtNat(Kind k, std::size_t v) : kind_(k), value_(v) {}
    Kind kind_;
    std::size_t value_;
};

/// Maximum where Exceeds(b) dominates every finite value <= b.
ExtNat max(const ExtNat& a, const ExtNat& b);

bool in_T(const ModuleRep& m, const TorPairGen& tp);

struct RelPd {
    ExtNat by_tor;      // least n with Tor_{n+1}(M, x) = 0 for all gens x
    ExtNat by_syzygy;   // least n with syzygy(M, n) in T
    bool agree() const { return by_tor == by_syzygy; }
};

/// Both computations of the relative projective dimension.
RelPd rel_pd_both(const ModuleRep& m, const TorPairGen& tp, std::size_t bound);
/// The Tor-vanishing value.
ExtNat rel_pd(const ModuleRep& m, const TorPairGen& tp, std::size_t bound);

struct DimensionPrediction {
    enum class Kind { Exact, UpperBound, Unknown };
    Kind kind = Kind::Unknown;
    std::size_t value = 0;
    int rule_case = 0;  // 1, 2, 3; 0 when unknown
    std::string to_string() const;
};

/// Predicted relative dimension of C in 0 -> A -> B -> C -> 0.
DimensionPrediction ses_dimension_rule(const ExtNat& pd_a, const ExtNat& pd_b);

enum class Status { Pass, Fail, Inconclusive, Capped };
std::string to_string(Status s);

struct SesDimensionReport {
    Status status = Status::Pass;
    ExtNat pd_a = ExtNat::finite(0), pd_b = ExtNat::finite(0), pd_c = ExtNat::finite(0);
    DimensionPrediction prediction;
    std::string message;
};

SesDimensionReport ses_dimension_check(const ShortExactSeq& ses, const TorPairGen& tp, std::size_t bound);

/// 0 -> A -> B -> B/A -> 0 for A generated by the rows of `gens`.
ShortExactSeq ses_from_submodule(const ModuleRep& b, const FpMatrix& gens);
/// Random B, random submodule A, C = B/A.
ShortExactSeq random_ses(const AlgebraPtr& a, Side side, std::mt19937_64& rng, std::size_t max_gens,
                         std::size_t max_rank);
ShortExactSeq split_ses(const ModuleRep& a, const ModuleRep& c);

/// Tensoring with each x in X keeps A (x) x -> B (x) x injective.
bool xpure_check(const ShortExactSeq& ses, const std::vector<ModuleRep>& xs);

struct ProbeReport {
    Status status = Status::Pass;
    std::size_t trials = 0;
    std::size_t fired = 0;       // assertions that applied
    std::size_t violations = 0;
    std::uint64_t seed = 0;
    std::size_t bound = 0;
    std::string witness;         // first violation, if any
};

/// Random epis T -> T'' with T in T(tp); whenever the kernel inclusion is
/// gens-pure the quotient must lie in T(tp).
ProbeReport xpure_quotient_closure_probe(const TorPairGen& tp, std::uint64_t seed, std::size_t trials);

/// Syzygy closure and higher Tor vanishing on random members of T(tp).
ProbeReport hereditary_probe(const TorPairGen& tp, std::uint64_t seed, std::size_t trials, std::size_t bound);

struct FiniteProductReport {
    Status status = Status::Pass;
    ExtNat sum_pd = ExtNat::finite(0);
    ExtNat max_pd = ExtNat::finite(0);
    std::vector<ExtNat> individual;
    /// pd of the sum of the members with pd <= m, for m = 0..bound.
    std::vector<ExtNat> layered;
    std::string message;
};

/// rel_pd of a finite direct sum equals the maximum, plus the layered
/// inequality chain and the summed syzygy sequences.
FiniteProductReport finite_product_pd(const std::vector<ModuleRep>& modules, const TorPairGen& tp, std::size_t bound);

/// A random member of T(tp): free modules, sums, and sampled modules that pass in_T.
ModuleRep random_member(const TorPairGen& tp, std::mt19937_64& rng, std::size_t max_rank);

}  // namespace torbench
