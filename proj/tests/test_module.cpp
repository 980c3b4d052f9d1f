#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "torbench/corpus.hpp"
#include "torbench/module.hpp"

using namespace torbench;

namespace {

AlgebraPtr D() { return corpus_algebra("D"); }
AlgebraPtr T2() { return corpus_algebra("T2"); }

ModuleRep k_right() { return cyclically_presented(D(), Side::Right, Vec{0, 1}); }

}  // namespace

TEST_CASE("free modules") {
    CHECK(free_module(D(), Side::Right, 0).dim() == 0);
    CHECK(free_module(corpus_algebra("GF2"), Side::Right, 1).dim() == 1);
    const ModuleRep f = free_module(T2(), Side::Left, 2);
    CHECK(f.dim() == 6);
    CHECK(validate_module(f).ok);
    CHECK(validate_module(free_module(T2(), Side::Right, 2)).ok);
}

TEST_CASE("validation catches a tampered action") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    std::vector<FpMatrix> action = reg.action();
    action[1](1, 0) = 1;  // x now squares to a nonzero map
    const Check c = validate_module(reg.with_action(action));
    CHECK_FALSE(c.ok);
    CHECK(c.message.find("(1,1)") != std::string::npos);
}

TEST_CASE("cyclically presented modules") {
    const ModuleRep zero_x = cyclically_presented(D(), Side::Right, Vec{0, 0});
    CHECK(zero_x == regular_module(D(), Side::Right));
    CHECK(cyclically_presented(D(), Side::Right, Vec{1, 0}).dim() == 0);
    const ModuleRep k = k_right();
    CHECK(k.dim() == 1);
    CHECK(validate_module(k).ok);
    CHECK(k.action(1).is_zero());
    CHECK(oracle::isomorphic(k, simple_modules(D(), Side::Right)[0]));
}

TEST_CASE("Hom examples") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    CHECK(hom_basis(reg, ModuleRep::zero(D(), Side::Right)).empty());
    CHECK(hom_dim(reg, reg) == 2);
    CHECK(hom_dim(k_right(), reg) == 1);
    CHECK(oracle::hom_dim(k_right(), reg) == 1);
    for (const auto& f : hom_basis(reg, reg)) CHECK(validate_map(f).ok);
}

TEST_CASE("Hom dimensions match enumeration on random modules") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        const AlgebraPtr a = corpus_algebra(corpus_algebra_names()[t % 5]);
        const Side side = t % 2 ? Side::Left : Side::Right;
        const ModuleRep m = random_module(a, side, rng, 2, 2);
        const ModuleRep n = random_module(a, side, rng, 2, 2);
        if (m.dim() * n.dim() > 16) continue;
        CAPTURE(a->name());
        CHECK(hom_dim(m, n) == oracle::hom_dim(m, n));
        for (const auto& f : hom_basis_matrices(m, n)) CHECK(oracle::equivariant(m, n, f));
    }
}

TEST_CASE("submodule examples") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    CHECK(submodule(reg, FpMatrix(0, 2, 2)).module.dim() == 0);
    CHECK(submodule(reg, FpMatrix::identity(2, 2)).module.dim() == 2);
    const Submodule soc = submodule(reg, FpMatrix::from_rows({{0, 1}}, 2, 2));
    CHECK(soc.module.dim() == 1);
    CHECK(validate_map(soc.inclusion).ok);
    CHECK(oracle::isomorphic(soc.module, k_right()));
}

TEST_CASE("submodule closure matches the span of generator translates") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        const AlgebraPtr a = corpus_algebra(corpus_algebra_names()[t % 5]);
        const ModuleRep m = random_module(a, Side::Right, rng, 1, 2);
        if (m.dim() == 0 || m.dim() > 6) continue;
        std::vector<Vec> gens;
        FpMatrix g(1 + rng() % 2, m.dim(), 2);
        for (std::size_t r = 0; r < g.rows(); ++r) {
            gens.push_back(random_vector(rng, m.dim(), 2));
            std::copy(gens.back().begin(), gens.back().end(), g.row(r).begin());
        }
        const Submodule s = submodule(m, g);
        CHECK(s.module.dim() == oracle::submodule_dim(m, gens));
        CHECK(validate_module(s.module).ok);
        CHECK(validate_map(s.inclusion).ok);
        const Quotient q = quotient(m, s);
        CHECK(q.module.dim() + s.module.dim() == m.dim());
        CHECK(validate_map(q.projection).ok);
        CHECK(kernel(q.projection).module.dim() == s.module.dim());
    }
}

TEST_CASE("quotient examples") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    CHECK(quotient(reg, FpMatrix(0, 2, 2)).module == reg);
    CHECK(quotient(reg, FpMatrix::identity(2, 2)).module.dim() == 0);
    const Quotient q = quotient(reg, FpMatrix::from_rows({{0, 1}}, 2, 2));
    CHECK(q.module.dim() == 1);
    CHECK(q.module.action(1).is_zero());
    // The line through 1 is not closed under x.
    CHECK_THROWS_AS(quotient(reg, FpMatrix::from_rows({{1, 0}}, 2, 2)), UsageError);
}

TEST_CASE("kernel, image and cokernel") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    const ModuleMap times_x{reg, reg, FpMatrix::from_rows({{0, 1}, {0, 0}}, 2, 2)};
    REQUIRE(validate_map(times_x).ok);
    CHECK(kernel(times_x).module.dim() == 1);
    CHECK(image(times_x).module.dim() == 1);
    CHECK(cokernel(times_x).module.dim() == 1);
    CHECK(kernel(times_x).basis() == image(times_x).basis());
}

TEST_CASE("pushout examples") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    const ModuleRep k = k_right();
    const ModuleRep zero = ModuleRep::zero(D(), Side::Right);

    const Pushout sum = pushout(zero_map(zero, reg), zero_map(zero, k));
    CHECK(sum.module.dim() == 3);

    const ModuleMap soc{k, reg, FpMatrix::from_rows({{0, 1}}, 2, 2)};
    const Pushout along_iso = pushout(identity_map(k), soc);
    CHECK(oracle::isomorphic(along_iso.module, reg));

    const Pushout q = pushout(soc, identity_map(k));
    CHECK(q.module.dim() == 2);
    CHECK(validate_module(q.module).ok);
    CHECK(oracle::isomorphic(q.module, reg));
    // The square commutes.
    CHECK(soc.matrix * q.from_first.matrix == identity_map(k).matrix * q.from_second.matrix);
    CHECK(validate_map(q.from_first).ok);
    CHECK(validate_map(q.from_second).ok);
}

TEST_CASE("field duals") {
    CHECK(dual(ModuleRep::zero(D(), Side::Right)).dim() == 0);
    const ModuleRep reg = regular_module(D(), Side::Right);
    const ModuleRep dreg = dual(reg);
    CHECK(dreg.side() == Side::Left);
    CHECK(is_isomorphic(dreg, regular_module(D(), Side::Left)).verdict == Verdict::Yes);
    const ModuleRep dk = dual(k_right());
    CHECK(dk.side() == Side::Left);
    CHECK(dk.dim() == 1);
    CHECK(dual(dual(reg)) == reg);
    // T2 is not self-injective: the dual of the regular right module is not free.
    CHECK(is_isomorphic(dual(regular_module(T2(), Side::Right)), regular_module(T2(), Side::Left)).verdict ==
          Verdict::No);
}

TEST_CASE("isomorphism examples") {
    const ModuleRep reg = regular_module(D(), Side::Right);
    const IsoVerdict self = is_isomorphic(reg, reg);
    CHECK(self.verdict == Verdict::Yes);
    REQUIRE(self.witness);
    CHECK(verify_isomorphism(reg, reg, *self.witness));
    CHECK(is_isomorphic(reg, k_right()).verdict == Verdict::No);
    const ModuleRep kk = direct_sum(k_right(), k_right());
    const IsoVerdict v = is_isomorphic(reg, kk);
    CHECK(v.verdict == Verdict::No);
    CHECK_FALSE(v.reason.empty());
}

TEST_CASE("isomorphism verdicts match enumeration") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 80; ++t) {
        const AlgebraPtr a = corpus_algebra(corpus_algebra_names()[t % 5]);
        const ModuleRep m = random_module(a, Side::Right, rng, 2, 2);
        const ModuleRep n = random_module(a, Side::Right, rng, 2, 2);
        if (m.dim() != n.dim() || m.dim() > 4) continue;
        const IsoVerdict v = is_isomorphic(m, n);
        REQUIRE(v.verdict != Verdict::Unknown);
        CHECK((v.verdict == Verdict::Yes) == oracle::isomorphic(m, n));
        if (v.verdict == Verdict::Yes) CHECK(verify_isomorphism(m, n, *v.witness));
        CHECK(is_isomorphic(n, m).verdict == v.verdict);
    }
}

TEST_CASE("random modules") {
    CHECK(random_module(D(), Side::Right, 3, 2, 0).dim() == 0);
    CHECK(random_module(T2(), Side::Left, 17, 2, 2) == random_module(T2(), Side::Left, 17, 2, 2));
    for (std::uint64_t seed = 0; seed < 50; ++seed) CHECK(validate_module(random_module(D(), Side::Right, seed, 2, 2)).ok);
}

TEST_CASE("simple modules are simple and pairwise distinct") {
    const std::map<std::string, std::size_t> counts{{"GF2", 1}, {"D", 1}, {"N3", 1}, {"T2", 2}, {"C3", 2}};
    for (const auto& [name, count] : counts) {
        for (Side side : {Side::Left, Side::Right}) {
            const auto simples = simple_modules(corpus_algebra(name), side);
            CAPTURE(name);
            CHECK(simples.size() == count);
            for (const auto& s : simples) {
                oracle::for_each_vector(s.dim(), 2, [&](const Vec& v) {
                    if (!is_zero(v)) CHECK(oracle::submodule_dim(s, {v}) == s.dim());
                });
            }
            for (std::size_t i = 0; i < simples.size(); ++i)
                for (std::size_t j = i + 1; j < simples.size(); ++j) CHECK_FALSE(oracle::isomorphic(simples[i], simples[j]));
        }
    }
}

TEST_CASE("direct sums") {
    const ModuleRep reg = regular_module(T2(), Side::Right);
    const DirectSum s = direct_sum({reg, reg}, T2(), Side::Right);
    CHECK(s.module.dim() == 6);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(validate_map(s.injections[i]).ok);
        CHECK(validate_map(s.projections[i]).ok);
        CHECK(s.injections[i].matrix * s.projections[i].matrix == FpMatrix::identity(3, 2));
    }
    CHECK(direct_sum({}, T2(), Side::Right).module.dim() == 0);
    CHECK(hom_dim(s.module, reg) == 2 * hom_dim(reg, reg));
    CHECK_THROWS_AS(direct_sum(reg, regular_module(D(), Side::Right)), UsageError);
}
