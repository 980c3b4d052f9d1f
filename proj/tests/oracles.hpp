#pragma once

// Brute-force reference computations by enumeration. They touch the library
// only through matrix storage and products, never through elimination,
// Hom solvers or resolutions. Sizes are kept tiny by the callers.

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "torbench/module.hpp"

namespace oracle {

using torbench::FpMatrix;
using torbench::ModuleRep;
using torbench::Vec;

inline std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

inline std::size_t log_p(std::size_t count, std::size_t p) {
    std::size_t e = 0;
    while (count > 1) {
        if (count % p) throw std::logic_error("oracle: count is not a power of p");
        count /= p;
        ++e;
    }
    return e;
}

// Calls f on every vector of GF(p)^n.
template <class F>
void for_each_vector(std::size_t n, std::uint32_t p, F&& f) {
    Vec v(n, 0);
    const std::size_t total = ipow(p, n);
    if (total > (1u << 22)) throw std::logic_error("oracle: enumeration too large");
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t c = k;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = static_cast<torbench::Scalar>(c % p);
            c /= p;
        }
        f(v);
    }
}

inline Vec mul_vec(const Vec& v, const FpMatrix& m) {
    Vec out(m.cols(), 0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        unsigned long long s = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) s += static_cast<unsigned long long>(v[r]) * m(r, c);
        out[c] = static_cast<torbench::Scalar>(s % m.modulus());
    }
    return out;
}

/// dim {v : m v = 0} by counting solutions.
inline std::size_t nullity(const FpMatrix& m) {
    std::size_t count = 0;
    const FpMatrix t = torbench::transpose(m);
    for_each_vector(m.cols(), m.modulus(), [&](const Vec& v) {
        const Vec w = mul_vec(v, t);
        bool zero = true;
        for (auto x : w) zero = zero && x == 0;
        count += zero;
    });
    return log_p(count, m.modulus());
}

inline std::size_t rank(const FpMatrix& m) { return m.cols() - nullity(m); }

/// dim of the span of the rows, by enumerating all combinations.
inline std::size_t span_dim(const std::vector<Vec>& rows, std::size_t n, std::uint32_t p) {
    std::set<Vec> seen;
    for_each_vector(rows.size(), p, [&](const Vec& c) {
        Vec s(n, 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<torbench::Scalar>((s[j] + c[i] * rows[i][j]) % p);
        seen.insert(s);
    });
    return log_p(seen.size(), p);
}

/// dim of the submodule generated by `gens`: span of g * b_i over all i.
inline std::size_t submodule_dim(const ModuleRep& m, const std::vector<Vec>& gens) {
    std::vector<Vec> rows;
    for (const auto& g : gens)
        for (const auto& rho : m.action()) rows.push_back(mul_vec(g, rho));
    return span_dim(rows, m.dim(), m.modulus());
}

inline bool equivariant(const ModuleRep& m, const ModuleRep& n, const FpMatrix& f) {
    for (std::size_t i = 0; i < m.action().size(); ++i)
        if (!(m.action(i) * f == f * n.action(i))) return false;
    return true;
}

inline FpMatrix matrix_from(const Vec& entries, std::size_t rows, std::size_t cols, std::uint32_t p) {
    FpMatrix f(rows, cols, p);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) f(r, c) = entries[r * cols + c];
    return f;
}

/// dim Hom(M, N) by counting equivariant matrices.
inline std::size_t hom_dim(const ModuleRep& m, const ModuleRep& n) {
    const auto p = m.modulus();
    std::size_t count = 0;
    for_each_vector(m.dim() * n.dim(), p, [&](const Vec& e) {
        count += equivariant(m, n, matrix_from(e, m.dim(), n.dim(), p));
    });
    return log_p(count, p);
}

/// dim M (x)_A N through (M (x) N)^* = Hom_A(M, N^*).
inline std::size_t tensor_dim(const ModuleRep& m, const ModuleRep& n) { return oracle::hom_dim(m, torbench::dual(n)); }

/// Whether some invertible equivariant matrix exists.
inline bool isomorphic(const ModuleRep& m, const ModuleRep& n) {
    if (m.dim() != n.dim()) return false;
    const auto p = m.modulus();
    bool found = false;
    for_each_vector(m.dim() * n.dim(), p, [&](const Vec& e) {
        if (found) return;
        const FpMatrix f = matrix_from(e, m.dim(), n.dim(), p);
        if (equivariant(m, n, f) && oracle::rank(f) == m.dim()) found = true;
    });
    return found;
}

}  // namespace oracle
