// One line per acceptance criterion. Exits non-zero when any criterion fails.
#include <iostream>
#include <opetopic/opetopic.hpp>

using namespace opetopic;

namespace {

struct Criterion {
    const char* suite;
    const char* title;
    double time_limit;  // seconds, 0 for none
};

const Criterion criteria[] = {
    {"monad-laws", "monad laws for every level and every Bimod(m,n), n <= 3, trees <= 4 vertices", 300},
    {"counting", "level-1 counts k+1 and level-2 Catalan counts", 0},
    {"calibration", "path descriptions of dimension agree with the down construction; worked example", 0},
    {"bijection-chain", "correspondences of m-dimensional instances are bijections", 0},
    {"label-contractibility", "label categories C(b) are acyclic and connected; one vertex gives the cospan", 0},
    {"b03-bijection", "elements of B(0,3) biject with morphisms of planar trees", 0},
    {"factorisation", "inert-active factorisation exists and is unique", 0},
    {"strata", "a tree with n leaves has n+1 strata", 0},
    {"c-category", "C[n] counts, acyclic nerves and the simplex map", 0},
    {"chain-extension", "chain extension is functorial with trunk blowups and trunk at D", 0},
    {"kontsevich", "Kontsevich model: operad laws, base-point multiplicativity, retractions", 120},
};

}  // namespace

int main() {
    int failed = 0;
    for (const auto& c : criteria) {
        VerificationReport r;
        bool ok;
        try {
            r = suites().at(c.suite).run(SuiteOptions{});
            ok = r.pass() && (c.time_limit == 0 || r.seconds <= c.time_limit);
        } catch (const std::exception& e) {
            std::cout << "FAIL " << c.suite << ": " << c.title << "  (exception: " << e.what() << ")\n";
            ++failed;
            continue;
        }
        std::cout << (ok ? "PASS " : "FAIL ") << c.suite << ": " << c.title << "  (" << r.seconds << " s)\n";
        if (!ok) {
            ++failed;
            for (const auto& ch : r.checks) {
                if (ch.pass) continue;
                std::cout << "    failing check: " << ch.name << "\n";
                for (size_t k = 0; k < ch.counterexamples.size() && k < 5; ++k)
                    std::cout << "      " << ch.counterexamples[k] << "\n";
            }
            if (r.pass()) std::cout << "    time limit of " << c.time_limit << " s exceeded\n";
        }
        std::cout.flush();
    }
    std::cout << failed << " of " << std::size(criteria) << " criteria failed\n";
    return failed ? 1 : 0;
}
