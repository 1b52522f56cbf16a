#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rtgrowth/config.hpp"

namespace rtg {

struct Check {
    int id = 0;
    std::string name;
    double value = 0.0;  // measured
    double limit = 0.0;  // threshold
    std::string relation;  // how value compares with limit when passing
    std::string detail;
    bool pass = false;
    bool skipped = false;
};

struct BatteryOptions {
    int threads = 1;
    // called after each check
    std::function<void(const Check&)> on_check;
};

// The full invariant battery on a configuration. Checks that need sigma > 0
// are skipped (and count as passing) when sigma = 0.
std::vector<Check> run_battery(const RunConfig& cfg, const BatteryOptions& opt = {});

std::string format_check(const Check& c);

}  // namespace rtg
