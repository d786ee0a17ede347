#ifndef BLOCHLAB_ACCEPT_HPP
#define BLOCHLAB_ACCEPT_HPP

#include <iosfwd>

#include "blochlab/experiments.hpp"

namespace blochlab {

struct CriterionResult {
    int number = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_passed() const;
};

// Runs the full acceptance suite, printing one pass/fail line per criterion to
// `log`. tol_scale loosens (> 1) or tightens (< 1) every pinned tolerance.
AcceptanceReport run_acceptance(std::ostream& log, double tol_scale = 1.0, int workers = 1);

} // namespace blochlab

#endif
