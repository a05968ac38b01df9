// Acceptance gate: runs every verification suite with the default
// configuration and prints one pass/fail line per numbered criterion.

#include <cstdio>
#include <map>
#include <vector>

#include "pmech/verify.hpp"

int main() {
    pmech::RunConfig cfg;  // defaults: h = 1, seed = 42, all suites
    auto reports = pmech::verify::run_verification(cfg);

    struct Tally {
        int pass = 0, fail = 0;
        double worst_margin = 0.0;
    };
    std::map<int, Tally> tally;
    bool support_ok = true;
    for (const auto& r : reports)
        for (const auto& c : r.cases) {
            if (c.criterion > 0) {
                auto& t = tally[c.criterion];
                (c.pass ? t.pass : t.fail) += 1;
            } else if (!c.pass) {
                support_ok = false;
                std::printf("  [FAIL] supporting check %s (%s): measured %.3e tol %.3e\n",
                            c.id.c_str(), c.tag.c_str(), c.measured, c.tolerance);
            }
        }

    const auto& titles = pmech::verify::criterion_titles();
    bool all = true;
    for (std::size_t i = 1; i <= titles.size(); ++i) {
        const auto it = tally.find(static_cast<int>(i));
        bool ok = it != tally.end() && it->second.fail == 0 && it->second.pass > 0;
        all = all && ok;
        std::printf("criterion %02zu [%s] %s (%d checks)\n", i, ok ? "PASS" : "FAIL",
                    titles[i - 1].c_str(), it == tally.end() ? 0 : it->second.pass + it->second.fail);
        if (it != tally.end() && it->second.fail > 0) {
            for (const auto& r : reports)
                for (const auto& c : r.cases)
                    if (c.criterion == static_cast<int>(i) && !c.pass)
                        std::printf("  [FAIL] %s (%s): measured %.6e expected %.6e tol %.3e\n",
                                    c.id.c_str(), c.tag.c_str(), c.measured, c.expected, c.tolerance);
        }
    }
    if (!support_ok) std::printf("supporting (non-criterion) checks FAILED\n");
    std::printf("acceptance: %s\n", (all && support_ok) ? "PASS" : "FAIL");
    return (all && support_ok) ? 0 : 1;
}
