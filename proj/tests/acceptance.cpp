// Runs the acceptance criteria given on the command line (all by default)
// and prints one PASS/FAIL line per criterion. Exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lans/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
    if (ids.empty()) ids = lans::criterion_ids();
    try {
        bool ok = true;
        for (int id : ids) {
            const auto r = lans::run_criterion(id);
            std::printf("%s\n", lans::summary_line(r).c_str());
            std::fflush(stdout);
            ok = ok && r.passed;
        }
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
}
