#pragma once

// The built-in algebras and Tor-pairs the suites run over.
//
//   GF2  the field GF(2)
//   D    GF(2)[x]/(x^2)
//   N3   GF(2)[x]/(x^3)
//   T2   upper triangular 2x2 matrices over GF(2)
//   C3   GF(2)[C_3]

#include <string>
#include <vector>

#include "torbench/torpair.hpp"

namespace torbench {

const std::vector<std::string>& corpus_algebra_names();
/// Throws UsageError for an unknown name.
AlgebraPtr corpus_algebra(const std::string& name);

/// D<k>, N3<k>, T2<simples>, C3<simples>, GF2<k>; generators are left simples.
std::vector<TorPairGen> corpus_torpairs();
TorPairGen corpus_torpair(const std::string& name);

}  // namespace torbench
