#pragma once

// JSON documents, task execution, property suites and reports.
//
// Document layout:
//   {"version": "1",
//    "algebras": {"D": {"builtin": "truncated_poly", "p": 2, "n": 2}, ...},
//    "modules":  {"k": {"algebra": "D", "side": "right", "builtin": "simple", "index": 0}, ...},
//    "torpairs": {"Dk": {"algebra": "D", "gens": ["kl"]}},
//    "tasks":    [{"command": "tor", "M": "k", "N": "kl", "n": 1}, ...]}
//
// Algebras are builtin ("corpus" with "name", or "truncated_poly" /
// "upper_triangular" / "cyclic_group" with "p" and "n") or explicit ("p",
// "unit", "mul" with mul[i][j] the coordinates of b_i b_j). Modules are
// builtin ("simple", "regular", "free", "zero", "dual", "random") or explicit
// ("action": one row-major matrix per algebra basis element). Entries are
// plain integers, reduced mod p on load.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "torbench/approximation.hpp"

namespace torbench {

using Json = nlohmann::ordered_json;

/// Load failure; `path` is a JSON pointer to the offending entry.
class LoadError : public std::runtime_error {
public:
    LoadError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct Document {
    std::string version;
    std::map<std::string, AlgebraPtr> algebras;
    std::map<std::string, ModuleRep> modules;
    std::map<std::string, TorPairGen> torpairs;
    std::vector<Json> tasks;
};

Document load_document(const std::string& text);
Document load_document(const Json& doc);
inline Document load_document(const char* text) { return load_document(std::string(text)); }

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t bound = 8;
    std::size_t cap = 32;
    std::size_t trials = 200;
    bool parallel = false;
};

struct Report {
    Json task;
    Status status = Status::Pass;
    Json payload = Json::object();
    Json witnesses = Json::object();
    std::uint64_t seed = 0;
    std::size_t bound = 0;
    double wall_time_ms = 0;
};

Json to_json(const Report& r, bool with_time = true);
std::string to_text(const Report& r);

/// Task fields "seed", "bound", "cap" and "trials" override the options.
Report run_task(const Document& doc, const Json& task, const RunOptions& opts);
/// Reports in task order.
std::vector<Report> run(const Document& doc, const RunOptions& opts);

/// 0 all pass (inconclusive included), 1 any fail, 3 capped without fail.
int exit_code(const std::vector<Report>& reports);

struct SuiteConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    std::size_t bound = 8;
    std::size_t cap = 32;
};

const std::vector<std::string>& suite_names();
/// Throws UsageError for an unknown suite.
Report run_suite(const std::string& name, const SuiteConfig& cfg);

Json matrix_json(const FpMatrix& m);
Json to_json(const ExtNat& n);
Json to_json(const FiltrationWitness& w);
Json to_json(const ApproxCertificate& c);

}  // namespace torbench
