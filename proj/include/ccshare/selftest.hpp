#pragma once

// Quick correctness checks runnable from the command line: fixture oracles,
// invariances, optimizer accuracy and thread-count determinism.

#include <string>
#include <vector>

namespace ccshare {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestOptions {
    int workers = 0;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions &options = {});

} // namespace ccshare
