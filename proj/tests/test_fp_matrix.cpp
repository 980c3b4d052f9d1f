#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torbench/fp_matrix.hpp"

using namespace torbench;

namespace {

FpMatrix M(const std::vector<std::vector<long long>>& rows, std::size_t cols, std::uint32_t p = 2) {
    return FpMatrix::from_rows(rows, cols, p);
}

FpMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, std::uint32_t p) {
    FpMatrix m(r, c, p);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<Scalar>(rng() % p);
    return m;
}

}  // namespace

TEST_CASE("primality matches trial division") {
    for (std::uint32_t n = 0; n < 2000; ++n) {
        bool prime = n >= 2;
        for (std::uint32_t d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
        CHECK(is_prime(n) == prime);
    }
    CHECK(is_prime(65521));
    CHECK_FALSE(is_prime(65536));
    CHECK_FALSE(is_prime(70001));  // prime, but above the modulus limit
}

TEST_CASE("field arithmetic") {
    PrimeField f(7);
    CHECK(f.reduce(-1) == 6);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    for (Scalar a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK_THROWS_AS(PrimeField(8), UsageError);
    CHECK_THROWS_AS(f.inv(0), UsageError);
}

TEST_CASE("rref examples") {
    const Rref id = rref(FpMatrix::identity(2, 2));
    CHECK(id.reduced == FpMatrix::identity(2, 2));
    CHECK(id.pivots == std::vector<std::size_t>{0, 1});
    CHECK(id.rank == 2);

    const Rref z = rref(FpMatrix(3, 4, 2));
    CHECK(z.reduced == FpMatrix(3, 4, 2));
    CHECK(z.pivots.empty());
    CHECK(z.rank == 0);

    const Rref ones = rref(M({{1, 1}, {1, 1}}, 2));
    CHECK(ones.reduced == M({{1, 1}, {0, 0}}, 2));
    CHECK(ones.pivots == std::vector<std::size_t>{0});
    CHECK(ones.rank == 1);
}

TEST_CASE("kernel examples") {
    CHECK(kernel_basis(FpMatrix::identity(3, 2)).rows() == 0);
    CHECK(kernel_basis(FpMatrix(2, 3, 2)).rows() == 3);
    CHECK(kernel_basis(M({{1, 1}}, 2)) == M({{1, 1}}, 2));
}

TEST_CASE("solve examples") {
    const Vec b{1, 0, 1};
    CHECK(solve(FpMatrix::identity(3, 2), b) == b);
    CHECK_FALSE(solve(FpMatrix(3, 3, 2), b).has_value());
    CHECK(solve(M({{1, 1}}, 2), Vec{1}) == Vec{1, 0});
    CHECK_THROWS_AS(solve(FpMatrix::identity(3, 2), Vec{1}), UsageError);
}

TEST_CASE("image examples") {
    CHECK(image_basis(FpMatrix::identity(2, 3)) == FpMatrix::identity(2, 3));
    CHECK(image_basis(FpMatrix(2, 2, 3)).rows() == 0);
    CHECK(image_basis(M({{1}, {1}}, 1)) == M({{1, 1}}, 2));
}

TEST_CASE("quotient space examples") {
    const QuotientSpace whole0 = quotient_space(3, FpMatrix(0, 3, 2));
    CHECK(whole0.dim == 3);
    CHECK(whole0.projection == FpMatrix::identity(3, 2));
    CHECK(quotient_space(2, FpMatrix::identity(2, 2)).dim == 0);

    const QuotientSpace q = quotient_space(2, M({{1, 1}}, 2));
    CHECK(q.dim == 1);
    // Kernel of the projection is exactly {(0,0),(1,1)}.
    std::size_t in_kernel = 0;
    oracle::for_each_vector(2, 2, [&](const Vec& v) {
        if (is_zero(mat_vec(q.projection, v))) {
            ++in_kernel;
            CHECK(v[0] == v[1]);
        }
    });
    CHECK(in_kernel == 2);
}

TEST_CASE("modulus mismatch is a usage error") {
    CHECK_THROWS_AS(FpMatrix::identity(2, 2) * FpMatrix::identity(2, 3), UsageError);
    CHECK_THROWS_AS(FpMatrix::identity(2, 2) + FpMatrix::identity(3, 2), UsageError);
}

TEST_CASE("rank and kernel agree with enumeration") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 150; ++t) {
        const std::uint32_t p = t % 3 == 0 ? 3 : 2;
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % (p == 2 ? 7 : 5);
        FpMatrix m = random_matrix(rng, r, c, p);
        if (r > 1 && t % 2) {
            for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j);
        }
        const std::size_t nul = oracle::nullity(m);
        CHECK(rank(m) == c - nul);
        CHECK(rank(transpose(m)) == rank(m));
        const FpMatrix k = kernel_basis(m);
        CHECK(k.rows() == nul);
        CHECK((m * transpose(k)).is_zero());
        CHECK(rref(k).reduced == k);
        CHECK(left_kernel_basis(m).rows() == oracle::nullity(transpose(m)));
    }
}

TEST_CASE("solve returns a solution iff one exists") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::uint32_t p = 5;
        const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        const FpMatrix m = random_matrix(rng, r, c, p);
        Vec b(r);
        for (auto& x : b) x = static_cast<Scalar>(rng() % p);
        const auto x = solve(m, b);
        FpMatrix aug = hstack(m, transpose(FpMatrix::row_vector(b, p)));
        if (x) {
            CHECK(mat_vec(m, *x) == b);
        } else {
            CHECK(rank(aug) > rank(m));
        }
    }
}

TEST_CASE("inverse, left inverse and echelon basis") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const std::uint32_t p = 7;
        const std::size_t n = 1 + rng() % 5;
        const FpMatrix m = random_matrix(rng, n, n, p);
        const auto inv = inverse(m);
        CHECK(inv.has_value() == (rank(m) == n));
        if (inv) {
            CHECK(*inv * m == FpMatrix::identity(n, p));
            CHECK(m * *inv == FpMatrix::identity(n, p));
        }
        const FpMatrix tall = random_matrix(rng, n + 2, n, p);
        if (const auto li = left_inverse(tall)) CHECK(*li * tall == FpMatrix::identity(n, p));
        else CHECK(rank(tall) < n);

        EchelonBasis eb(n, p);
        std::size_t inserted = 0;
        for (std::size_t r = 0; r < tall.rows(); ++r) inserted += eb.insert(tall.row(r));
        CHECK(inserted == rank(tall));
        CHECK(eb.dim() == rank(tall));
        for (std::size_t r = 0; r < tall.rows(); ++r) CHECK(eb.contains(tall.row(r)));
        CHECK(row_space_contains(eb.basis(), tall));
    }
}

TEST_CASE("operations are deterministic") {
    std::mt19937_64 rng(3);
    const FpMatrix m = random_matrix(rng, 6, 6, 65521);
    CHECK(rref(m).reduced == rref(m).reduced);
    CHECK(kernel_basis(m) == kernel_basis(m));
    CHECK(row_space_basis(m) == row_space_basis(m));
}

TEST_CASE("kron and block structure") {
    const FpMatrix a = M({{1, 2}, {0, 1}}, 2, 3);
    const FpMatrix b = M({{0, 1}}, 2, 3);
    const FpMatrix k = kron(a, b);
    CHECK(k.rows() == 2);
    CHECK(k.cols() == 4);
    CHECK(k == M({{0, 1, 0, 2}, {0, 0, 0, 1}}, 4, 3));
    const FpMatrix d = block_diag({a, b}, 3);
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 4);
    CHECK(slice(d, 2, 1, 2, 2) == b);
}
