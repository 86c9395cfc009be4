#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "threebox/errors.hpp"

namespace threebox {

/// Weighted list of labeled pure states; the post-measurement mixtures.
/// Weights are Born probabilities and sum to 1.
template <class State>
struct Ensemble {
    struct Member {
        double weight;
        std::string label;
        State state;
    };
    std::vector<Member> members;

    void validate(double tol = 1e-9) const {
        double total = 0.0;
        for (const auto& m : members) {
            if (m.weight < -1e-12) throw ArgumentError("negative ensemble weight");
            if (std::abs(m.state.norm() - 1.0) > 1e-6)
                throw ArgumentError("ensemble member not normalized");
            total += m.weight;
        }
        if (std::abs(total - 1.0) > tol) throw ArgumentError("ensemble weights do not sum to 1");
    }

    double total_weight() const {
        double total = 0.0;
        for (const auto& m : members) total += m.weight;
        return total;
    }
};

}  // namespace threebox
