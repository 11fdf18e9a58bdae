#pragma once
// Reduced-size invariant checks for every module, used by `semicl selftest`.

#include <string>
#include <vector>

namespace semicl {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;  ///< first failing check, or a short summary
    double seconds = 0;
};

std::vector<SuiteResult> run_selftest();

}  // namespace semicl
