#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "torbench/algebra.hpp"
#include "torbench/corpus.hpp"

using namespace torbench;

namespace {

// Associativity and unit laws over every basis triple, written out directly.
bool brute_valid(const Algebra& a) {
    const std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i) {
        if (a.multiply(a.unit(), a.basis_vector(i)) != a.basis_vector(i)) return false;
        if (a.multiply(a.basis_vector(i), a.unit()) != a.basis_vector(i)) return false;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                const Vec l = a.multiply(a.product(i, j), a.basis_vector(k));
                const Vec r = a.multiply(a.basis_vector(i), a.product(j, k));
                if (l != r) return false;
            }
    }
    return true;
}

}  // namespace

TEST_CASE("builders produce valid algebras of the right dimension") {
    struct Case {
        Algebra a;
        std::size_t dim;
    };
    const std::vector<Case> cases{
        {build_truncated_poly(2, 1), 1},      {build_truncated_poly(2, 2), 2},
        {build_truncated_poly(3, 3), 3},      {build_upper_triangular(2, 1), 1},
        {build_upper_triangular(2, 2), 3},    {build_upper_triangular(3, 2), 3},
        {build_upper_triangular(5, 3), 6},    {build_group_algebra_cyclic(2, 1), 1},
        {build_group_algebra_cyclic(2, 3), 3}, {build_group_algebra_cyclic(2, 2), 2},
    };
    for (const auto& c : cases) {
        CAPTURE(c.a.name());
        CHECK(c.a.dim() == c.dim);
        CHECK(validate_algebra(c.a).valid);
        CHECK(brute_valid(c.a));
        CHECK(validate_algebra(opposite(c.a)).valid);
        CHECK(opposite(opposite(c.a)).same_structure(c.a));
    }
}

TEST_CASE("truncated polynomial relations") {
    const Algebra d = build_truncated_poly(2, 2);
    const Vec x = d.basis_vector(1);
    CHECK(d.multiply(x, x) == Vec{0, 0});
    CHECK(d.unit() == Vec{1, 0});
    const Algebra n3 = build_truncated_poly(3, 3);
    const Vec y = n3.basis_vector(1);
    CHECK(n3.multiply(y, y) == n3.basis_vector(2));
    CHECK(n3.multiply(y, n3.basis_vector(2)) == Vec{0, 0, 0});
    CHECK_THROWS_AS(build_truncated_poly(2, 0), UsageError);
}

TEST_CASE("cyclic group algebra in characteristic dividing the order is local") {
    const Algebra c2 = build_group_algebra_cyclic(2, 2);
    // (1 + g)^2 = 1 + g^2 = 0 over GF(2).
    const Vec t{1, 1};
    CHECK(c2.multiply(t, t) == Vec{0, 0});
}

TEST_CASE("upper triangular multiplication follows matrix units") {
    const Algebra t = build_upper_triangular(2, 2);  // E11, E12, E22
    CHECK(t.product(0, 1) == t.basis_vector(1));     // E11 E12 = E12
    CHECK(t.product(1, 2) == t.basis_vector(1));     // E12 E22 = E12
    CHECK(t.product(1, 0) == Vec{0, 0, 0});          // E12 E11 = 0
    CHECK(t.unit() == Vec{1, 0, 1});
    CHECK_FALSE(is_commutative(t));
    const Algebra op = opposite(t);
    CHECK(op.product(1, 0) == t.product(0, 1));
    CHECK_FALSE(op.same_structure(t));
}

TEST_CASE("opposite of a commutative algebra has the same table") {
    for (const auto& name : corpus_algebra_names()) {
        const AlgebraPtr a = corpus_algebra(name);
        if (!is_commutative(*a)) continue;
        CHECK(opposite(*a).table() == a->table());
    }
}

TEST_CASE("validation names the failing identity") {
    // GF(2)[C2] table with the unit moved to b_1: b_1 b_1 = b_0, so b_1 is not a unit.
    const std::vector<std::vector<Vec>> table{{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
    const Algebra bad_unit("bad-unit", 2, table, {0, 1});
    const AlgebraValidation v = validate_algebra(bad_unit);
    CHECK_FALSE(v.valid);
    CHECK(v.message.find("unit") != std::string::npos);

    // b_1 b_1 = b_1 + b_2, b_2 b_1 = b_2, everything else zero except the unit:
    // (b_1 b_1) b_1 = b_1 + b_2 + b_2 = b_1 but b_1 (b_1 b_1) = b_1 + b_2 + b_1 b_2 = b_1 + b_2.
    std::vector<std::vector<Vec>> t(3, std::vector<Vec>(3, Vec(3, 0)));
    for (std::size_t i = 0; i < 3; ++i) {
        t[0][i] = Vec(3, 0);
        t[0][i][i] = 1;
        t[i][0] = t[0][i];
    }
    t[1][1] = {0, 1, 1};
    t[2][1] = {0, 0, 1};
    const Algebra bad_assoc("bad-assoc", 2, t, {1, 0, 0});
    const AlgebraValidation w = validate_algebra(bad_assoc);
    CHECK_FALSE(w.valid);
    CHECK(w.message.find("(") != std::string::npos);
    CHECK_FALSE(brute_valid(bad_assoc));
}

TEST_CASE("generators generate") {
    for (const auto& name : corpus_algebra_names()) {
        const AlgebraPtr a = corpus_algebra(name);
        EchelonBasis span(a->dim(), a->modulus());
        span.insert(a->unit());
        bool grew = true;
        while (grew) {
            grew = false;
            const FpMatrix b = span.basis();
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t g : a->generators()) grew = span.insert(a->multiply(b.row(r), a->basis_vector(g))) || grew;
        }
        CHECK(span.dim() == a->dim());
    }
}

TEST_CASE("random elements satisfy associativity over GF(5)") {
    const Algebra t = build_upper_triangular(5, 3);
    std::mt19937_64 rng(1);
    auto rand = [&] {
        Vec v(t.dim());
        for (auto& x : v) x = static_cast<Scalar>(rng() % 5);
        return v;
    };
    for (int i = 0; i < 200; ++i) {
        const Vec x = rand(), y = rand(), z = rand();
        CHECK(t.multiply(t.multiply(x, y), z) == t.multiply(x, t.multiply(y, z)));
    }
}
