#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace frif {

struct ConditionWitness {
    std::string label;
    double location = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

struct ConditionReport {
    enum class Kind {
        bounded, continuous, lp, compatibility,
        interpolation, summability, joinup,
    };
    Kind kind = Kind::bounded;
    bool verdict = true;
    double tolerance = 0.0;
    std::vector<ConditionWitness> witnesses;

    double max_gap() const {
        double m = 0.0;
        for (const auto& w : witnesses) m = std::max(m, w.gap);
        return m;
    }
};

}  // namespace frif
