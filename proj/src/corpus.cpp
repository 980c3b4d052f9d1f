#include "torbench/corpus.hpp"

#include <map>
#include <mutex>

namespace torbench {

const std::vector<std::string>& corpus_algebra_names() {
    static const std::vector<std::string> names{"GF2", "D", "N3", "T2", "C3"};
    return names;
}

AlgebraPtr corpus_algebra(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, AlgebraPtr> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    AlgebraPtr a;
    if (name == "GF2") a = std::make_shared<const Algebra>(build_truncated_poly(2, 1));
    else if (name == "D") a = std::make_shared<const Algebra>(build_truncated_poly(2, 2));
    else if (name == "N3") a = std::make_shared<const Algebra>(build_truncated_poly(2, 3));
    else if (name == "T2") a = std::make_shared<const Algebra>(build_upper_triangular(2, 2));
    else if (name == "C3") a = std::make_shared<const Algebra>(build_group_algebra_cyclic(2, 3));
    else throw UsageError("unknown corpus algebra '" + name + "'");
    cache.emplace(name, a);
    return a;
}

std::vector<TorPairGen> corpus_torpairs() {
    auto simples = [](const std::string& a) { return simple_modules(corpus_algebra(a), Side::Left); };
    return {
        {"D<k>", corpus_algebra("D"), simples("D")},
        {"N3<k>", corpus_algebra("N3"), simples("N3")},
        {"T2<simples>", corpus_algebra("T2"), simples("T2")},
        {"C3<simples>", corpus_algebra("C3"), simples("C3")},
        {"GF2<k>", corpus_algebra("GF2"), simples("GF2")},
    };
}

TorPairGen corpus_torpair(const std::string& name) {
    for (auto& tp : corpus_torpairs())
        if (tp.name == name) return tp;
    throw UsageError("unknown corpus Tor-pair '" + name + "'");
}

}  // namespace torbench
