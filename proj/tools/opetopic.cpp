#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <opetopic/opetopic.hpp>

using namespace opetopic;

namespace {

constexpr int exit_pass = 0, exit_fail = 1, exit_input = 2;

struct Flags {
    SuiteOptions o;
    int max_vertices = 4, max_leaves = 3, level = 2, m = 1, n = 1, dim = 3, size = 0;
    std::string out, tree = "(||)", source, target;
    bool json_report = false;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot write " + path);
    f << text;
}

void copy_bounds(CLI::App& app, Flags& f) {
    if (app.count("--max-vertices")) f.o.max_vertices = f.max_vertices;
    if (app.count("--max-leaves")) f.o.max_leaves = f.max_leaves;
    if (app.count("--level")) f.o.level = f.level;
    if (app.count("--m")) f.o.m = f.m;
    if (app.count("--n")) f.o.n = f.n;
    if (app.count("--dim")) f.o.dim = f.dim;
    if (app.count("--size")) f.o.size = f.size;
}

int run_verify(const std::string& id, CLI::App& app, Flags& f) {
    copy_bounds(app, f);
    std::vector<std::string> ids;
    if (id == "all") {
        for (auto& [k, s] : suites()) ids.push_back(k);
    } else if (suites().count(id)) {
        ids.push_back(id);
    } else {
        std::cerr << "unknown suite '" << id << "'; try: opetopic list\n";
        return exit_input;
    }
    json reports = json::array();
    bool ok = true;
    for (auto& k : ids) {
        auto r = suites().at(k).run(f.o);
        ok = ok && r.pass();
        std::cerr << (r.pass() ? "PASS " : "FAIL ") << k << " (" << r.seconds << " s)\n";
        for (auto& c : r.checks) {
            std::cerr << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  [" << c.instances << "]\n";
            for (auto& x : c.counterexamples) std::cerr << "        " << x << "\n";
        }
        reports.push_back(r.to_json());
    }
    json doc = ids.size() == 1 ? reports[0] : json{{"schema", report_schema_version}, {"reports", reports}};
    if (!f.out.empty() || f.json_report) emit(doc.dump(2) + "\n", f.out);
    return ok ? exit_pass : exit_fail;
}

int run_export(const std::string& kind, const std::string& what, CLI::App& app, Flags& f) {
    if (kind != "dot" && kind != "json") throw input_error("export kind must be dot or json");
    bool dot = kind == "dot";
    std::string text;
    auto tree = [&] { return parse_planar(f.tree); };
    if (what == "c-category") {
        auto c = c_category(f.n);
        text = dot ? to_dot(c, "C[" + std::to_string(f.n) + "]") : to_json(c).dump(2);
    } else if (what == "c-nerve") {
        auto c = c_category(f.n);
        if (dot)
            text = nerve_skeleton_dot(c);
        else
            text = json{{"betti", betti(nerve(c, 4), 3)}}.dump(2);
    } else if (what == "label-category") {
        auto c = label_category(tree()).cat;
        text = dot ? to_dot(c, "C(b)") : json{{"category", to_json(c)}, {"certificate", to_json(certify_contractible(c))}}.dump(2);
    } else if (what == "tree" || what == "trunk") {
        Op t = what == "trunk" ? trunk() : tree();
        text = dot ? planar_dot(t) : to_json(t).dump(2);
    } else if (what == "strata" && !dot) {
        json a = json::array();
        for (auto& s : strata(tree())) a.push_back(to_json(s));
        text = a.dump(2);
    } else if (what == "morphisms" && !dot) {
        json a = json::array();
        for (auto& h : hom(parse_planar(f.source), parse_planar(f.target))) a.push_back(to_json(h));
        text = a.dump(2);
    } else if (what == "base-point" && !dot) {
        text = to_json(base_point(tree(), f.dim)).dump(2);
    } else {
        std::cerr << "cannot export '" << what << "' as " << kind << "\n";
        return exit_input;
    }
    if (text.empty() || text.back() != '\n') text += '\n';
    emit(text, f.out);
    (void)app;
    return exit_pass;
}

int run_enumerate(Flags& f) {
    int size = f.size > 0 ? f.size : f.max_vertices + 3;
    auto ops = enumerate_ops(f.level, f.max_vertices, size);
    std::string text;
    for (auto& o : ops) text += show(o) + "\n";
    emit(text, f.out);
    std::cerr << ops.size() << " operations at level " << f.level << "\n";
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorics of iterated plus constructions: enumeration, verification suites, exports."};
    app.require_subcommand(1);
    Flags f;
    auto bounds = [&](CLI::App* c) {
        c->add_option("--max-vertices,--bound", f.max_vertices, "vertex bound");
        c->add_option("--max-leaves", f.max_leaves, "leaf bound for planar-tree universes");
        c->add_option("--level", f.level, "level n of the opetopic sequence");
        c->add_option("--m", f.m, "bimodule index m");
        c->add_option("--n", f.n, "index n (C[n], chain length)");
        c->add_option("--dim", f.dim, "ambient dimension of the Kontsevich model");
        c->add_option("--size", f.size, "size bound for enumerations");
        c->add_option("--seed", f.o.seed, "seed for sampled checks");
        c->add_option("--samples", f.o.samples, "sample count for sampled checks");
        c->add_option("--out", f.out, "output file");
    };

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite (or 'all')");
    verify->add_option("suite", suite)->required();
    verify->add_flag("--json", f.json_report, "print the JSON report on stdout");
    bounds(verify);

    std::string kind, what;
    auto* exp = app.add_subcommand("export", "export an object as dot or json");
    exp->add_option("kind", kind, "dot or json")->required();
    exp->add_option("object", what, "c-category, c-nerve, label-category, tree, trunk, strata, morphisms, base-point")
        ->required();
    exp->add_option("--tree", f.tree, "planar tree, e.g. ((||)|)");
    exp->add_option("--source", f.source, "source tree for morphisms");
    exp->add_option("--target", f.target, "target tree for morphisms");
    bounds(exp);

    auto* en = app.add_subcommand("enumerate", "list operations of a level");
    bounds(en);

    auto* ls = app.add_subcommand("list", "list verification suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }
    try {
        if (*verify) return run_verify(suite, *verify, f);
        if (*exp) return run_export(kind, what, *exp, f);
        if (*en) return run_enumerate(f);
        if (*ls) {
            for (auto& [k, s] : suites()) std::cout << k << "\t" << s.description << "\n";
            return exit_pass;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_input;
}
