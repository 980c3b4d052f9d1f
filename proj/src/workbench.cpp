#include "torbench/workbench.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <set>
#include <sstream>

#include "torbench/corpus.hpp"

namespace torbench {

namespace {

const std::set<std::string> kCommands{"validate", "tor",   "ext",       "tensor",      "relpd",
                                      "in-t",     "xpure", "hereditary-probe", "trace", "precover",
                                      "preenvelope", "filtration-verify", "suite"};
const std::set<std::string> kModuleKeys{"M", "N", "B"};
const std::set<std::string> kModuleListKeys{"G", "X"};

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw LoadError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw LoadError(child(path, key), "missing field");
    return *it;
}

std::uint64_t unsigned_field(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw LoadError(child(path, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string string_field(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_string()) throw LoadError(child(path, key), "expected a string");
    return v.get<std::string>();
}

Vec read_vector(const Json& v, std::uint32_t p, const std::string& path) {
    if (!v.is_array()) throw LoadError(path, "expected an array of integers");
    Vec out;
    PrimeField f(p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) throw LoadError(path + "/" + std::to_string(i), "expected an integer");
        out.push_back(f.reduce(v[i].get<long long>()));
    }
    return out;
}

FpMatrix read_matrix(const Json& v, std::size_t cols, std::uint32_t p, const std::string& path) {
    if (!v.is_array()) throw LoadError(path, "expected a matrix (array of rows)");
    FpMatrix m(v.size(), cols, p);
    for (std::size_t r = 0; r < v.size(); ++r) {
        const Vec row = read_vector(v[r], p, path + "/" + std::to_string(r));
        if (row.size() != cols) throw LoadError(path + "/" + std::to_string(r), "expected " + std::to_string(cols) + " entries");
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

Side read_side(const Json& obj, const std::string& path) {
    const std::string s = string_field(obj, "side", path);
    if (s == "right") return Side::Right;
    if (s == "left") return Side::Left;
    throw LoadError(child(path, "side"), "expected \"left\" or \"right\"");
}

AlgebraPtr load_algebra(const std::string& name, const Json& a, const std::string& path) {
    if (!a.is_object()) throw LoadError(path, "expected an object");
    try {
        if (a.contains("builtin")) {
            const std::string kind = string_field(a, "builtin", path);
            if (kind == "corpus") return corpus_algebra(string_field(a, "name", path));
            const auto p = static_cast<std::uint32_t>(unsigned_field(a, "p", path));
            if (!is_prime(p)) throw LoadError(child(path, "p"), "modulus is not a prime below 2^16");
            const auto n = static_cast<std::size_t>(unsigned_field(a, "n", path));
            if (kind == "truncated_poly") return std::make_shared<const Algebra>(build_truncated_poly(p, n));
            if (kind == "upper_triangular") return std::make_shared<const Algebra>(build_upper_triangular(p, n));
            if (kind == "cyclic_group") return std::make_shared<const Algebra>(build_group_algebra_cyclic(p, n));
            throw LoadError(child(path, "builtin"), "unknown builtin algebra '" + kind + "'");
        }
        const auto p = static_cast<std::uint32_t>(unsigned_field(a, "p", path));
        if (!is_prime(p)) throw LoadError(child(path, "p"), "modulus is not a prime below 2^16");
        const Vec unit = read_vector(field(a, "unit", path), p, child(path, "unit"));
        const Json& mul = field(a, "mul", path);
        const std::size_t d = unit.size();
        if (!mul.is_array() || mul.size() != d) throw LoadError(child(path, "mul"), "expected a " + std::to_string(d) + "x" + std::to_string(d) + " table");
        std::vector<std::vector<Vec>> table(d);
        for (std::size_t i = 0; i < d; ++i) {
            const std::string pi = child(path, "mul") + "/" + std::to_string(i);
            if (!mul[i].is_array() || mul[i].size() != d) throw LoadError(pi, "expected " + std::to_string(d) + " products");
            for (std::size_t j = 0; j < d; ++j) {
                Vec v = read_vector(mul[i][j], p, pi + "/" + std::to_string(j));
                if (v.size() != d) throw LoadError(pi + "/" + std::to_string(j), "expected " + std::to_string(d) + " coordinates");
                table[i].push_back(std::move(v));
            }
        }
        auto alg = std::make_shared<const Algebra>(name, p, std::move(table), unit);
        if (auto v = validate_algebra(*alg); !v.valid) throw LoadError(path, "invalid algebra: " + v.message);
        return alg;
    } catch (const UsageError& e) {
        throw LoadError(path, e.what());
    }
}

struct ModuleLoader {
    const Json& entries;
    const std::map<std::string, AlgebraPtr>& algebras;
    std::map<std::string, ModuleRep>& out;
    std::set<std::string> in_progress;

    const ModuleRep& get(const std::string& name, const std::string& from) {
        if (auto it = out.find(name); it != out.end()) return it->second;
        if (!entries.contains(name)) throw LoadError(from, "unresolved module reference '" + name + "'");
        if (!in_progress.insert(name).second) throw LoadError(from, "cyclic module reference '" + name + "'");
        ModuleRep m = load(name, entries.at(name), "/modules/" + name);
        in_progress.erase(name);
        return out.emplace(name, std::move(m)).first->second;
    }

    ModuleRep load(const std::string& name, const Json& m, const std::string& path) {
        (void)name;
        if (!m.is_object()) throw LoadError(path, "expected an object");
        try {
            if (m.contains("builtin") && string_field(m, "builtin", path) == "dual")
                return dual(get(string_field(m, "of", path), child(path, "of")));
            const std::string aname = string_field(m, "algebra", path);
            auto ait = algebras.find(aname);
            if (ait == algebras.end()) throw LoadError(child(path, "algebra"), "unresolved algebra reference '" + aname + "'");
            const AlgebraPtr& a = ait->second;
            const Side side = read_side(m, path);
            if (m.contains("builtin")) {
                const std::string kind = string_field(m, "builtin", path);
                if (kind == "simple") {
                    const auto simples = simple_modules(a, side);
                    const auto idx = unsigned_field(m, "index", path);
                    if (idx >= simples.size())
                        throw LoadError(child(path, "index"), "only " + std::to_string(simples.size()) + " simple modules");
                    return simples[idx];
                }
                if (kind == "regular") return regular_module(a, side);
                if (kind == "free") return free_module(a, side, unsigned_field(m, "rank", path));
                if (kind == "zero") return ModuleRep::zero(a, side);
                if (kind == "random")
                    return random_module(a, side, unsigned_field(m, "seed", path), unsigned_field(m, "max_gens", path),
                                         unsigned_field(m, "max_rank", path));
                throw LoadError(child(path, "builtin"), "unknown builtin module '" + kind + "'");
            }
            const Json& action = field(m, "action", path);
            if (!action.is_array() || action.size() != a->dim())
                throw LoadError(child(path, "action"), "expected " + std::to_string(a->dim()) + " action matrices");
            const std::size_t dim = action[0].size();
            std::vector<FpMatrix> mats;
            for (std::size_t i = 0; i < action.size(); ++i)
                mats.push_back(read_matrix(action[i], dim, a->modulus(), child(path, "action") + "/" + std::to_string(i)));
            ModuleRep rep(a, side, std::move(mats));
            if (auto v = validate_module(rep); !v) throw LoadError(path, "invalid module: " + v.message);
            return rep;
        } catch (const UsageError& e) {
            throw LoadError(path, e.what());
        }
    }
};

void check_task_refs(const Document& doc, const Json& task, const std::string& path) {
    if (!task.is_object()) throw LoadError(path, "expected an object");
    const std::string cmd = string_field(task, "command", path);
    if (!kCommands.count(cmd)) throw LoadError(child(path, "command"), "unknown command '" + cmd + "'");
    for (auto it = task.begin(); it != task.end(); ++it) {
        const std::string p = child(path, it.key());
        if (kModuleKeys.count(it.key())) {
            if (!it->is_string() || !doc.modules.count(it->get<std::string>()))
                throw LoadError(p, "unresolved module reference " + it->dump());
        } else if (kModuleListKeys.count(it.key())) {
            if (!it->is_array()) throw LoadError(p, "expected a list of module references");
            for (std::size_t i = 0; i < it->size(); ++i)
                if (!(*it)[i].is_string() || !doc.modules.count((*it)[i].get<std::string>()))
                    throw LoadError(p + "/" + std::to_string(i), "unresolved module reference " + (*it)[i].dump());
        } else if (it.key() == "torpair") {
            if (!it->is_string() || !doc.torpairs.count(it->get<std::string>()))
                throw LoadError(p, "unresolved Tor-pair reference " + it->dump());
        } else if (it.key() == "module" && cmd == "filtration-verify") {
            if (!it->is_string() || !doc.modules.count(it->get<std::string>()))
                throw LoadError(p, "unresolved module reference " + it->dump());
        }
    }
    if (cmd == "suite") {
        const std::string name = string_field(task, "name", path);
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw LoadError(child(path, "name"), "unknown suite '" + name + "'");
    }
}

}  // namespace

Document load_document(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw LoadError("", std::string("parse error: ") + e.what());
    }
    return load_document(doc);
}

Document load_document(const Json& doc) {
    Document out;
    out.version = string_field(doc, "version", "");
    if (doc.contains("algebras")) {
        const Json& as = doc.at("algebras");
        if (!as.is_object()) throw LoadError("/algebras", "expected an object");
        for (auto it = as.begin(); it != as.end(); ++it)
            out.algebras.emplace(it.key(), load_algebra(it.key(), *it, "/algebras/" + it.key()));
    }
    if (doc.contains("modules")) {
        const Json& ms = doc.at("modules");
        if (!ms.is_object()) throw LoadError("/modules", "expected an object");
        ModuleLoader loader{ms, out.algebras, out.modules, {}};
        for (auto it = ms.begin(); it != ms.end(); ++it) loader.get(it.key(), "/modules/" + it.key());
    }
    if (doc.contains("torpairs")) {
        const Json& ts = doc.at("torpairs");
        if (!ts.is_object()) throw LoadError("/torpairs", "expected an object");
        for (auto it = ts.begin(); it != ts.end(); ++it) {
            const std::string path = "/torpairs/" + it.key();
            const std::string aname = string_field(*it, "algebra", path);
            if (!out.algebras.count(aname)) throw LoadError(child(path, "algebra"), "unresolved algebra reference '" + aname + "'");
            TorPairGen tp{it.key(), out.algebras.at(aname), {}};
            const Json& gens = field(*it, "gens", path);
            if (!gens.is_array()) throw LoadError(child(path, "gens"), "expected a list of module references");
            for (std::size_t i = 0; i < gens.size(); ++i) {
                const std::string gp = child(path, "gens") + "/" + std::to_string(i);
                if (!gens[i].is_string() || !out.modules.count(gens[i].get<std::string>()))
                    throw LoadError(gp, "unresolved module reference " + gens[i].dump());
                tp.gens.push_back(out.modules.at(gens[i].get<std::string>()));
            }
            if (auto v = validate_torpair(tp); !v) throw LoadError(path, "invalid Tor-pair: " + v.message);
            out.torpairs.emplace(it.key(), std::move(tp));
        }
    }
    if (doc.contains("tasks")) {
        const Json& ts = doc.at("tasks");
        if (!ts.is_array()) throw LoadError("/tasks", "expected an array");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            check_task_refs(out, ts[i], "/tasks/" + std::to_string(i));
            out.tasks.push_back(ts[i]);
        }
    }
    return out;
}

Json matrix_json(const FpMatrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(Json(m.row_vec(r)));
    return out;
}

Json to_json(const ExtNat& n) {
    if (n.is_finite()) return n.value();
    return n.to_string();
}

Json to_json(const FiltrationWitness& w) {
    Json chain = Json::array(), dims = Json::array(), layers = Json::array();
    for (const auto& c : w.chain) {
        chain.push_back(matrix_json(c));
        dims.push_back(c.rows());
    }
    for (const auto& l : w.layers) layers.push_back({{"tag", l.tag}, {"lift", matrix_json(l.lift)}});
    return {{"dim", w.module.dim()}, {"chain_dims", dims}, {"chain", chain}, {"layers", layers}};
}

Json to_json(const ApproxCertificate& c) {
    Json records = Json::array();
    for (const auto& r : c.records) records.push_back({{"induced_rank", r.induced_rank}, {"required", r.required}, {"ok", r.ok}});
    Json out{{"kind", c.kind == ApproxKind::Precover ? "precover" : "preenvelope"},
             {"ok", c.ok},
             {"source_dim", c.map.source.dim()},
             {"target_dim", c.map.target.dim()},
             {"tests", records}};
    if (c.kernel_orthogonality) out["kernel_ext1"] = c.kernel_orthogonality->ext1_dims;
    if (!c.message.empty()) out["message"] = c.message;
    return out;
}

Json to_json(const Report& r, bool with_time) {
    Json out{{"task", r.task},       {"status", to_string(r.status)}, {"payload", r.payload},
             {"witnesses", r.witnesses}, {"seed", r.seed},             {"bound", r.bound}};
    if (with_time) out["wall_time_ms"] = r.wall_time_ms;
    return out;
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "[" << to_string(r.status) << "] " << r.task.value("command", std::string("?"));
    for (auto it = r.task.begin(); it != r.task.end(); ++it)
        if (it.key() != "command") os << " " << it.key() << "=" << (it->is_string() ? it->get<std::string>() : it->dump());
    os << " (seed " << r.seed << ", bound " << r.bound << ", " << r.wall_time_ms << " ms)\n  " << r.payload.dump();
    return os.str();
}

namespace {

std::vector<ModuleRep> module_list(const Document& doc, const Json& task, const std::string& key) {
    std::vector<ModuleRep> out;
    for (const auto& n : task.at(key)) out.push_back(doc.modules.at(n.get<std::string>()));
    return out;
}

std::vector<ModuleRep> with_pairwise_sums(const std::vector<ModuleRep>& xs) {
    std::vector<ModuleRep> out = xs;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i; j < xs.size(); ++j) out.push_back(direct_sum(xs[i], xs[j]));
    return out;
}

Json dims_json(const std::vector<std::size_t>& d) { return Json(d); }

void execute(const Document& doc, const Json& task, const RunOptions& o, Report& r) {
    const std::string cmd = task.at("command").get<std::string>();
    auto mod = [&](const char* key) -> const ModuleRep& { return doc.modules.at(task.at(key).get<std::string>()); };
    auto tp = [&]() -> const TorPairGen& { return doc.torpairs.at(task.at("torpair").get<std::string>()); };
    auto has = [&](const char* key) { return task.contains(key); };
    auto degree = [&]() { return task.at("n").get<std::size_t>(); };

    if (cmd == "validate") {
        r.payload = {{"algebras", doc.algebras.size()},
                     {"modules", doc.modules.size()},
                     {"torpairs", doc.torpairs.size()},
                     {"tasks", doc.tasks.size()}};
    } else if (cmd == "tor") {
        const ModuleRep& m = mod("M");
        const ModuleRep& n = mod("N");
        const bool second = task.value("resolve", std::string("first")) == "second";
        if (m.side() != Side::Right || n.side() != Side::Left)
            throw UsageError("tor: M must be a right module and N a left module");
        FreeResolution res(second ? n : m);
        if (has("n")) {
            r.payload = {{"n", degree()}, {"dim", tor_dims(res, second ? m : n, degree())[degree()]}};
        } else {
            r.payload = {{"dims", dims_json(tor_dims(res, second ? m : n, o.bound))}};
        }
    } else if (cmd == "ext") {
        FreeResolution res(mod("M"));
        if (has("n")) {
            r.payload = {{"n", degree()}, {"dim", ext_dims(res, mod("N"), degree())[degree()]}};
        } else {
            r.payload = {{"dims", dims_json(ext_dims(res, mod("N"), o.bound))}};
        }
    } else if (cmd == "tensor") {
        const TensorProduct t = tensor(mod("M"), mod("N"));
        r.payload = {{"dim", t.dim}};
    } else if (cmd == "relpd") {
        const RelPd pd = rel_pd_both(mod("M"), tp(), o.bound);
        r.payload = {{"rel_pd", to_json(pd.by_tor)}, {"by_tor", to_json(pd.by_tor)}, {"by_syzygy", to_json(pd.by_syzygy)},
                     {"agree", pd.agree()}};
        if (!pd.agree()) r.status = Status::Fail;
    } else if (cmd == "in-t") {
        r.payload = {{"member", in_T(mod("M"), tp())}};
    } else if (cmd == "xpure") {
        const ModuleRep& b = mod("B");
        const FpMatrix gens = read_matrix(task.at("elements"), b.dim(), b.modulus(), "/elements");
        const ShortExactSeq ses = ses_from_submodule(b, gens);
        r.payload = {{"pure", xpure_check(ses, tp().gens)},
                     {"dims", {ses.left().dim(), ses.middle().dim(), ses.right().dim()}}};
    } else if (cmd == "hereditary-probe") {
        const ProbeReport p = hereditary_probe(tp(), o.seed, o.trials, o.bound);
        r.status = p.status;
        r.payload = {{"trials", p.trials}, {"fired", p.fired}, {"violations", p.violations}};
        if (!p.witness.empty()) r.witnesses["first_violation"] = p.witness;
    } else if (cmd == "trace") {
        const Submodule t = trace(module_list(doc, task, "X"), mod("M"));
        r.payload = {{"dim", t.module.dim()}, {"gen_membership", t.module.dim() == mod("M").dim()}};
        r.witnesses["basis"] = matrix_json(t.basis());
    } else if (cmd == "precover") {
        const ModuleRep& m = mod("M");
        const auto gens = module_list(doc, task, "G");
        const Battery battery = filtered_battery(gens, o.cap);
        const Cover cover = battery_cover(m, battery);
        const PrecoverResult p = deconstructible_precover(m, gens, cover, battery.modules, o.cap);
        r.status = p.status;
        r.payload = {{"battery", battery.modules.size()},
                     {"cover_dim", cover.map.source.dim()},
                     {"precover_dim", p.map.source.dim()},
                     {"image_dim", rank(p.map.matrix)},
                     {"stages", p.completion.stages.size()}};
        if (!p.message.empty()) r.payload["message"] = p.message;
        r.witnesses["certificate"] = to_json(p.certificate);
        r.witnesses["filtration"] = to_json(p.filtration);
    } else if (cmd == "preenvelope") {
        const auto gset = module_list(doc, task, "G");
        const ModuleMap h = preenvelope_candidate(mod("M"), gset);
        const ApproxCertificate c = preenvelope_verify(h, with_pairwise_sums(gset));
        r.status = c.ok ? Status::Pass : Status::Fail;
        r.payload = {{"envelope_dim", h.target.dim()}, {"ok", c.ok}};
        r.witnesses["map"] = matrix_json(h.matrix);
        r.witnesses["certificate"] = to_json(c);
    } else if (cmd == "filtration-verify") {
        const ModuleRep& m = doc.modules.at(task.at("module").get<std::string>());
        FiltrationWitness w{m, {}, {}};
        for (const auto& c : task.at("chain")) {
            const FpMatrix basis = read_matrix(c, m.dim(), m.modulus(), "/chain");
            w.chain.push_back(row_space_basis(basis));
        }
        const auto gens = module_list(doc, task, "G");
        for (const auto& l : task.at("layers")) {
            const std::size_t tag = l.at("tag").get<std::size_t>();
            if (tag >= gens.size()) throw UsageError("filtration-verify: tag out of range");
            w.layers.push_back({tag, read_matrix(l.at("lift"), m.dim(), m.modulus(), "/layers")});
        }
        const Check c = filtration_verify(w, gens);
        r.status = c.ok ? Status::Pass : Status::Fail;
        r.payload = {{"ok", c.ok}};
        if (!c.ok) r.payload["message"] = c.message;
    } else if (cmd == "suite") {
        Report s = run_suite(task.at("name").get<std::string>(), {o.seed, o.trials, o.bound, o.cap});
        r.status = s.status;
        r.payload = std::move(s.payload);
        r.witnesses = std::move(s.witnesses);
    } else {
        throw UsageError("unknown command '" + cmd + "'");
    }
}

}  // namespace

Report run_task(const Document& doc, const Json& task, const RunOptions& opts) {
    RunOptions o = opts;
    if (task.contains("seed")) o.seed = task.at("seed").get<std::uint64_t>();
    if (task.contains("bound")) o.bound = task.at("bound").get<std::size_t>();
    if (task.contains("cap")) o.cap = task.at("cap").get<std::size_t>();
    if (task.contains("trials")) o.trials = task.at("trials").get<std::size_t>();
    Report r;
    r.task = task;
    r.seed = o.seed;
    r.bound = o.bound;
    const auto start = std::chrono::steady_clock::now();
    try {
        execute(doc, task, o, r);
    } catch (const std::exception& e) {
        r.status = Status::Fail;
        r.payload = {{"error", e.what()}};
    }
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<Report> run(const Document& doc, const RunOptions& opts) {
    std::vector<Report> out;
    if (!opts.parallel) {
        for (const auto& t : doc.tasks) out.push_back(run_task(doc, t, opts));
        return out;
    }
    std::vector<std::future<Report>> pending;
    for (const auto& t : doc.tasks)
        pending.push_back(std::async(std::launch::async, [&doc, &t, &opts] { return run_task(doc, t, opts); }));
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

int exit_code(const std::vector<Report>& reports) {
    bool capped = false;
    for (const auto& r : reports) {
        if (r.status == Status::Fail) return 1;
        capped = capped || r.status == Status::Capped;
    }
    return capped ? 3 : 0;
}

}  // namespace torbench
