// Command-line front end for workbench documents and suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "torbench/workbench.hpp"

using namespace torbench;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TaskArgs {
    std::string doc = "-";
    std::string m, n, b, torpair, resolve, fields;
    std::vector<std::string> g, x;
    long long degree = -1;
};

void add_task_options(CLI::App* sub, TaskArgs& a, bool needs_doc) {
    if (needs_doc) sub->add_option("document", a.doc, "Workbench document (- for stdin)")->required();
    sub->add_option("--M", a.m, "Module M");
    sub->add_option("--N", a.n, "Module N");
    sub->add_option("--B", a.b, "Middle module B");
    sub->add_option("--torpair", a.torpair, "Tor-pair");
    sub->add_option("--n", a.degree, "Degree");
    sub->add_option("--G", a.g, "Generator modules");
    sub->add_option("--X", a.x, "Test modules");
    sub->add_option("--resolve", a.resolve, "Resolved side for tor: first|second");
    sub->add_option("--fields", a.fields, "Extra task fields as a JSON object");
}

Json build_task(const std::string& command, const TaskArgs& a) {
    Json t{{"command", command}};
    if (!a.m.empty()) t["M"] = a.m;
    if (!a.n.empty()) t["N"] = a.n;
    if (!a.b.empty()) t["B"] = a.b;
    if (!a.torpair.empty()) t["torpair"] = a.torpair;
    if (a.degree >= 0) t["n"] = a.degree;
    if (!a.g.empty()) t["G"] = a.g;
    if (!a.x.empty()) t["X"] = a.x;
    if (!a.resolve.empty()) t["resolve"] = a.resolve;
    if (!a.fields.empty()) {
        const Json extra = Json::parse(a.fields);
        if (!extra.is_object()) throw LoadError("/fields", "expected a JSON object");
        for (auto it = extra.begin(); it != extra.end(); ++it) t[it.key()] = *it;
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-dimensional module workbench: Tor, Ext, relative dimensions and approximations"};
    app.require_subcommand(1);
    app.fallthrough();

    RunOptions opts;
    std::string output = "json";
    auto* seed_opt = app.add_option("--seed", opts.seed, "Random seed (default 0, or WORKBENCH_SEED)");
    app.add_option("--bound", opts.bound, "Degree bound for all-degree claims")->capture_default_str();
    app.add_option("--cap", opts.cap, "Stage cap for completions")->capture_default_str();
    app.add_option("--trials", opts.trials, "Trials per randomized check")->capture_default_str();
    app.add_option("--output", output, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--parallel", opts.parallel, "Run independent tasks concurrently");

    std::string doc_path;
    auto* validate = app.add_subcommand("validate", "Load and validate a document");
    validate->add_option("document", doc_path, "Workbench document (- for stdin)")->required();
    auto* run_cmd = app.add_subcommand("run", "Run every task of a document");
    run_cmd->add_option("document", doc_path, "Workbench document (- for stdin)")->required();

    std::string suite_name;
    auto* suite = app.add_subcommand("suite", "Run a property suite over the built-in corpus");
    suite->add_option("name", suite_name, "Suite name")->required()->check(CLI::IsMember(suite_names()));

    const std::vector<std::string> task_commands{"tor",   "ext",      "tensor",      "relpd",
                                                 "in-t",  "xpure",    "hereditary-probe", "trace",
                                                 "precover", "preenvelope", "filtration-verify"};
    std::map<std::string, TaskArgs> task_args;
    for (const auto& c : task_commands) add_task_options(app.add_subcommand(c, "Run a single " + c + " task"), task_args[c], true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (seed_opt->count() == 0) {
        if (const char* env = std::getenv("WORKBENCH_SEED")) {
            try {
                opts.seed = std::stoull(env);
            } catch (const std::exception&) {
                std::cerr << "WORKBENCH_SEED is not an unsigned integer\n";
                return 2;
            }
        }
    }

    std::vector<Report> reports;
    try {
        if (validate->parsed()) {
            const Document doc = load_document(read_input(doc_path));
            Report r;
            r.task = {{"command", "validate"}};
            r.payload = {{"algebras", doc.algebras.size()},
                         {"modules", doc.modules.size()},
                         {"torpairs", doc.torpairs.size()},
                         {"tasks", doc.tasks.size()}};
            r.seed = opts.seed;
            r.bound = opts.bound;
            reports.push_back(r);
        } else if (run_cmd->parsed()) {
            reports = run(load_document(read_input(doc_path)), opts);
        } else if (suite->parsed()) {
            Report r = run_suite(suite_name, {opts.seed, opts.trials, opts.bound, opts.cap});
            reports.push_back(std::move(r));
        } else {
            for (const auto& c : task_commands) {
                if (!app.got_subcommand(c)) continue;
                const TaskArgs& a = task_args[c];
                Json doc = Json::parse(read_input(a.doc));
                doc["tasks"] = Json::array({build_task(c, a)});
                reports = run(load_document(doc), opts);
            }
        }
    } catch (const LoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    for (const auto& r : reports) {
        if (output == "json") std::cout << to_json(r).dump() << "\n";
        else std::cout << to_text(r) << "\n";
    }
    return exit_code(reports);
}
