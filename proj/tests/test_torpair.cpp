#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "torbench/approximation.hpp"
#include "torbench/corpus.hpp"
#include "torbench/torpair.hpp"

using namespace torbench;

namespace {

AlgebraPtr alg(const char* name) { return corpus_algebra(name); }

TorPairGen free_pair(const char* name) {
    return {std::string(name) + "<free>", alg(name), {regular_module(alg(name), Side::Left)}};
}

// 0 -> E12 A -> E11 A -> S -> 0 over T2: the projective presentation of the
// simple right module that is not projective.
ShortExactSeq t2_presentation() {
    const ModuleRep reg = regular_module(alg("T2"), Side::Right);  // basis E11, E12, E22
    const Submodule p0 = submodule(reg, FpMatrix::from_rows({{1, 0, 0}}, 3, 2));
    REQUIRE(p0.basis() == FpMatrix::from_rows({{1, 0, 0}, {0, 1, 0}}, 3, 2));
    return ses_from_submodule(p0.module, FpMatrix::from_rows({{0, 1}}, 2, 2));
}

}  // namespace

TEST_CASE("corpus Tor-pairs are valid") {
    for (const auto& tp : corpus_torpairs()) {
        CAPTURE(tp.name);
        CHECK(validate_torpair(tp).ok);
        for (const auto& x : tp.gens) CHECK(x.side() == Side::Left);
    }
    TorPairGen mixed = corpus_torpair("D<k>");
    mixed.gens.push_back(simple_modules(alg("T2"), Side::Left)[0]);
    CHECK_FALSE(validate_torpair(mixed).ok);
    CHECK_THROWS_AS(corpus_torpair("nope"), UsageError);
}

TEST_CASE("ExtNat") {
    CHECK(ExtNat::finite(3).to_string() == "3");
    CHECK(ExtNat::exceeds(8).to_string() == "exceeds(8)");
    CHECK(ExtNat::omega().to_string() == "omega");
    CHECK(max(ExtNat::finite(1), ExtNat::finite(4)) == ExtNat::finite(4));
    CHECK(max(ExtNat::finite(1), ExtNat::exceeds(8)) == ExtNat::exceeds(8));
    CHECK(max(ExtNat::exceeds(8), ExtNat::omega()) == ExtNat::omega());
    CHECK_FALSE(ExtNat::exceeds(8) == ExtNat::omega());
}

TEST_CASE("membership examples") {
    const TorPairGen dk = corpus_torpair("D<k>");
    for (const auto& tp : corpus_torpairs()) CHECK(in_T(free_module(tp.algebra, Side::Right, 2), tp));
    CHECK_FALSE(in_T(simple_modules(alg("D"), Side::Right)[0], dk));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) CHECK(in_T(random_module(alg("D"), Side::Right, rng, 2, 2), free_pair("D")));
}

TEST_CASE("relative dimension examples") {
    const TorPairGen dk = corpus_torpair("D<k>");
    const ModuleRep k = simple_modules(alg("D"), Side::Right)[0];
    CHECK(rel_pd(k, dk, 8) == ExtNat::exceeds(8));
    CHECK(rel_pd(regular_module(alg("D"), Side::Right), dk, 8) == ExtNat::finite(0));
    const RelPd both = rel_pd_both(k, dk, 8);
    CHECK(both.agree());

    const TorPairGen t2 = corpus_torpair("T2<simples>");
    std::mt19937_64 rng(2);
    for (int t = 0; t < 30; ++t) {
        const ExtNat pd = rel_pd(random_module(alg("T2"), Side::Right, rng, 3, 2), t2, 8);
        REQUIRE(pd.is_finite());
        CHECK(pd.value() <= 1);
    }
}

TEST_CASE("Tor and syzygy routes agree on every corpus pair") {
    std::mt19937_64 rng(3);
    for (const auto& tp : corpus_torpairs()) {
        for (int t = 0; t < 15; ++t) {
            const ModuleRep m = random_module(tp.algebra, Side::Right, rng, 3, 2);
            const RelPd r = rel_pd_both(m, tp, 8);
            CAPTURE(tp.name);
            CHECK(r.agree());
            CHECK(r.by_tor == rel_pd(m, tp, 8));
            CHECK((r.by_tor == ExtNat::finite(0)) == in_T(m, tp));
        }
    }
}

TEST_CASE("dimension rule values") {
    const DimensionPrediction c1 = ses_dimension_rule(ExtNat::finite(1), ExtNat::finite(0));
    CHECK(c1.kind == DimensionPrediction::Kind::Exact);
    CHECK(c1.value == 2);
    CHECK(c1.rule_case == 1);
    const DimensionPrediction c2 = ses_dimension_rule(ExtNat::finite(0), ExtNat::finite(3));
    CHECK(c2.kind == DimensionPrediction::Kind::Exact);
    CHECK(c2.value == 3);
    CHECK(c2.rule_case == 2);
    const DimensionPrediction c3 = ses_dimension_rule(ExtNat::finite(2), ExtNat::finite(2));
    CHECK(c3.kind == DimensionPrediction::Kind::UpperBound);
    CHECK(c3.value == 3);
    CHECK(c3.rule_case == 3);
    CHECK(ses_dimension_rule(ExtNat::exceeds(8), ExtNat::finite(0)).kind == DimensionPrediction::Kind::Unknown);
    CHECK(ses_dimension_rule(ExtNat::finite(0), ExtNat::omega()).kind == DimensionPrediction::Kind::Unknown);
}

TEST_CASE("dimension check examples") {
    const TorPairGen t2 = corpus_torpair("T2<simples>");
    const ShortExactSeq pres = t2_presentation();
    REQUIRE(validate_ses(pres).ok);
    const SesDimensionReport r = ses_dimension_check(pres, t2, 8);
    CHECK(r.status == Status::Pass);
    CHECK(r.pd_a == ExtNat::finite(0));
    CHECK(r.pd_b == ExtNat::finite(0));
    CHECK(r.pd_c == ExtNat::finite(1));
    CHECK(r.prediction.rule_case == 3);

    const ModuleRep a = random_module(alg("T2"), Side::Right, 4, 2, 2);
    const ModuleRep c = random_module(alg("T2"), Side::Right, 5, 2, 2);
    const SesDimensionReport split = ses_dimension_check(split_ses(a, c), t2, 8);
    CHECK(split.status == Status::Pass);
    CHECK(split.pd_c == rel_pd(c, t2, 8));

    // k inside D: pd(k) exceeds the bound, so the check cannot decide.
    const ShortExactSeq soc =
        ses_from_submodule(regular_module(alg("D"), Side::Right), FpMatrix::from_rows({{0, 1}}, 2, 2));
    CHECK(ses_dimension_check(soc, corpus_torpair("D<k>"), 8).status == Status::Inconclusive);
}

TEST_CASE("random exact sequences never violate the rule") {
    std::mt19937_64 rng(5);
    const auto pairs = corpus_torpairs();
    std::size_t decided = 0;
    for (int t = 0; t < 120; ++t) {
        const TorPairGen& tp = pairs[t % pairs.size()];
        const ShortExactSeq s = random_ses(tp.algebra, Side::Right, rng, 3, 2);
        REQUIRE(validate_ses(s).ok);
        const SesDimensionReport r = ses_dimension_check(s, tp, 8);
        CAPTURE(r.message);
        CHECK(r.status != Status::Fail);
        decided += r.status == Status::Pass;
    }
    CHECK(decided > 0);
}

TEST_CASE("purity examples") {
    const ModuleRep kl = simple_modules(alg("D"), Side::Left)[0];
    const ShortExactSeq soc =
        ses_from_submodule(regular_module(alg("D"), Side::Right), FpMatrix::from_rows({{0, 1}}, 2, 2));
    CHECK_FALSE(xpure_check(soc, {kl}));
    CHECK(xpure_check(soc, {regular_module(alg("D"), Side::Left)}));
    CHECK(xpure_check(split_ses(soc.right(), soc.right()), {kl}));
    CHECK(xpure_check(soc, {}));

    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const AlgebraPtr a = corpus_algebra(corpus_algebra_names()[t % 5]);
        const ShortExactSeq s = random_ses(a, Side::Right, rng, 2, 2);
        CHECK(xpure_check(s, {free_module(a, Side::Left, 2)}));
        const ModuleRep x = random_module(a, Side::Left, rng, 2, 2);
        CHECK(xpure_check(split_ses(s.left(), s.right()), {x}));
    }
}

TEST_CASE("purity through Tor: a pure sequence has A (x) x -> B (x) x injective") {
    // Pure iff the connecting map Tor_1(C, x) -> A (x) x is zero, i.e. iff
    // dim B (x) x = dim A (x) x + dim C (x) x.
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        const AlgebraPtr a = corpus_algebra(corpus_algebra_names()[t % 5]);
        const ShortExactSeq s = random_ses(a, Side::Right, rng, 2, 2);
        const ModuleRep x = random_module(a, Side::Left, rng, 2, 2);
        const bool additive = tensor(s.middle(), x).dim == tensor(s.left(), x).dim + tensor(s.right(), x).dim;
        CHECK(xpure_check(s, {x}) == additive);
    }
}

TEST_CASE("probes pass on the corpus") {
    for (const auto& tp : corpus_torpairs()) {
        CAPTURE(tp.name);
        const ProbeReport q = xpure_quotient_closure_probe(tp, 11, 40);
        CHECK(q.status == Status::Pass);
        CHECK(q.violations == 0);
        CHECK(q.trials == 40);
        const ProbeReport h = hereditary_probe(tp, 11, 20, 6);
        CHECK(h.status == Status::Pass);
        CHECK(h.fired > 0);
    }
    CHECK(hereditary_probe(free_pair("N3"), 1, 10, 4).status == Status::Pass);
    // D<k>: a free module onto k has a non-pure kernel, so no assertion fires.
    const ShortExactSeq onto_k =
        ses_from_submodule(regular_module(alg("D"), Side::Right), FpMatrix::from_rows({{0, 1}}, 2, 2));
    CHECK_FALSE(xpure_check(onto_k, corpus_torpair("D<k>").gens));
}

TEST_CASE("probes are reproducible") {
    const TorPairGen tp = corpus_torpair("T2<simples>");
    const ProbeReport a = xpure_quotient_closure_probe(tp, 99, 30);
    const ProbeReport b = xpure_quotient_closure_probe(tp, 99, 30);
    CHECK(a.fired == b.fired);
    CHECK(a.witness == b.witness);
    CHECK(a.seed == 99);
}

TEST_CASE("random members lie in T") {
    std::mt19937_64 rng(8);
    for (const auto& tp : corpus_torpairs())
        for (int t = 0; t < 10; ++t) CHECK(in_T(random_member(tp, rng, 2), tp));
}

TEST_CASE("finite sums: dimension of the sum is the maximum") {
    const TorPairGen t2 = corpus_torpair("T2<simples>");
    const ShortExactSeq pres = t2_presentation();
    const ModuleRep s = pres.right();
    const ModuleRep p = free_module(alg("T2"), Side::Right, 1);

    const FiniteProductReport single = finite_product_pd({s}, t2, 8);
    CHECK(single.status == Status::Pass);
    CHECK(single.sum_pd == ExtNat::finite(1));

    const FiniteProductReport mix = finite_product_pd({p, s, p}, t2, 8);
    CHECK(mix.status == Status::Pass);
    CHECK(mix.max_pd == ExtNat::finite(1));
    CHECK(mix.sum_pd == ExtNat::finite(1));
    REQUIRE(mix.individual.size() == 3);
    CHECK(mix.individual[0] == ExtNat::finite(0));

    const TorPairGen dk = corpus_torpair("D<k>");
    const ModuleRep k = simple_modules(alg("D"), Side::Right)[0];
    const FiniteProductReport d = finite_product_pd({k, free_module(alg("D"), Side::Right, 1)}, dk, 8);
    CHECK(d.status != Status::Fail);
    CHECK(d.sum_pd == ExtNat::exceeds(8));

    std::mt19937_64 rng(9);
    for (const auto& tp : corpus_torpairs())
        for (int t = 0; t < 8; ++t) {
            std::vector<ModuleRep> fam;
            for (std::size_t i = 0; i < 1 + rng() % 3; ++i) fam.push_back(random_module(tp.algebra, Side::Right, rng, 2, 2));
            const ModuleRep m = fam.front();
            CHECK(rel_pd(direct_sum(m, free_module(tp.algebra, Side::Right, 1)), tp, 8) == rel_pd(m, tp, 8));
            const FiniteProductReport r = finite_product_pd(fam, tp, 8);
            CAPTURE(r.message);
            CHECK(r.status != Status::Fail);
            CHECK(r.sum_pd == r.max_pd);
        }
}

TEST_CASE("T is closed under sums, summands and extensions") {
    std::mt19937_64 rng(10);
    for (const auto& tp : corpus_torpairs()) {
        for (int t = 0; t < 6; ++t) {
            const ModuleRep a = random_member(tp, rng, 2);
            const ModuleRep c = random_member(tp, rng, 2);
            CHECK(in_T(direct_sum(a, c), tp));
            FreeResolution res(c);
            const ExtClasses cls = ext_classes(res, a, 1);
            for (const auto& f : cls.representatives) {
                const ShortExactSeq e = extension_from_class(res, f);
                REQUIRE(validate_ses(e).ok);
                CHECK(in_T(e.middle(), tp));
            }
        }
        // Summands: if M + N is in T then so is M.
        for (int t = 0; t < 6; ++t) {
            const ModuleRep m = random_module(tp.algebra, Side::Right, rng, 2, 2);
            const ModuleRep n = random_module(tp.algebra, Side::Right, rng, 2, 2);
            if (in_T(direct_sum(m, n), tp)) CHECK(in_T(m, tp));
            else CHECK_FALSE((in_T(m, tp) && in_T(n, tp)));
        }
    }
}
