// Acceptance suite runner: one pass/fail line per criterion, nonzero exit if
// any criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "blochlab/accept.hpp"

int main(int argc, char** argv) {
    double tol_scale = 1.0;
    int workers = 1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--tol-scale" && i + 1 < argc)
            tol_scale = std::atof(argv[++i]);
        else if (arg == "--workers" && i + 1 < argc)
            workers = std::atoi(argv[++i]);
        else {
            std::cerr << "usage: " << argv[0] << " [--tol-scale X] [--workers N]\n";
            return 2;
        }
    }
    auto report = blochlab::run_acceptance(std::cout, tol_scale, workers);
    return report.all_passed() ? 0 : 1;
}
