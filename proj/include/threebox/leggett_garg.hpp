#pragma once

#include <cmath>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "threebox/errors.hpp"
#include "threebox/protocol.hpp"

namespace threebox::leggett_garg {

/// Macrorealist coarse-graining: lambda = +1 when the ball is in Box 3,
/// -1 when it is in any other box.  Fixed preparation lambda_1 = +1.
struct LambdaAssignment {
    std::map<std::string, int> sign;

    static LambdaAssignment threebox() {
        return {{{"1", -1}, {"2", -1}, {"3", +1}}};
    }
    static LambdaAssignment fourbox() {
        return {{{"1", -1}, {"2", -1}, {"3", +1}, {"4", -1}}};
    }
};

/// Q = <l1 l2> + <l2 l3> + <l1 l3>; macrorealism bounds it to [-1, 3].
struct LGResult {
    double Q = 0.0;
    double l12 = 0.0, l23 = 0.0, l13 = 0.0;
    bool violated = false;
    std::map<std::string, double> inputs;
    LambdaAssignment lambda;

    nlohmann::json to_json() const {
        nlohmann::json j{{"Q", Q},
                         {"terms", {{"l1l2", l12}, {"l2l3", l23}, {"l1l3", l13}}},
                         {"violated", violated}};
        for (const auto& [k, v] : inputs) j["inputs"][k] = v;
        for (const auto& [box, s] : lambda.sign) j["lambda"][box] = s;
        return j;
    }
};

namespace detail {

inline LGResult assemble(double p32, double p33, double p3233) {
    LGResult r;
    r.l12 = 2.0 * p32 - 1.0;  // lambda_1 = +1, so <l1 l2> = <l2>
    r.l13 = 2.0 * p33 - 1.0;
    r.l23 = 4.0 * p3233 - 2.0 * p32 - 2.0 * p33 + 1.0;
    r.Q = r.l12 + r.l23 + r.l13;  // = 4 P(3_2,3_3) - 1
    r.violated = r.Q < -1.0 - 1e-12 || r.Q > 3.0 + 1e-12;
    return r;
}

}  // namespace detail

/// Three-box statistic: Q = 4(P(3_3) - P(1_2,3_3) - P(2_2,3_3)) - 1.
inline LGResult lg_threebox(const protocol::ProbabilityTable& t) {
    const double p33 = t.marginal("3", 3);
    const double p32 = t.marginal("3", 2);
    const double j1 = t.joint("1_2", "3_3");
    const double j2 = t.joint("2_2", "3_3");
    const double p3233 = p33 - j1 - j2;  // macrorealist decomposition
    LGResult r = detail::assemble(p32, p33, p3233);
    r.lambda = LambdaAssignment::threebox();
    r.inputs = {{"P(3_2)", p32}, {"P(3_3)", p33}, {"P(1_2,3_3)", j1},
                {"P(2_2,3_3)", j2}, {"P(3_2,3_3)", p3233}};
    return r;
}

/// Four-box statistic:
/// Q = 4(P(3_3) - P({1_2,4_2},3_3) - P({2_2,4_2},3_3) + P(4_2,3_3)) - 1.
inline LGResult lg_fourbox(const protocol::ProbabilityTable& t) {
    const double p33 = t.marginal("3", 3);
    const double p32 = t.marginal("3", 2);
    const double j14 = t.joint("{1_2,4_2}", "3_3");
    const double j24 = t.joint("{2_2,4_2}", "3_3");
    const double j4 = t.joint("4_2", "3_3");
    // P(1_2,3_3) + P(2_2,3_3) + P(4_2,3_3) = J14 + J24 - J4.
    const double p3233 = p33 - (j14 + j24 - j4);
    LGResult r = detail::assemble(p32, p33, p3233);
    r.lambda = LambdaAssignment::fourbox();
    r.inputs = {{"P(3_2)", p32},          {"P(3_3)", p33}, {"P({1_2,4_2},3_3)", j14},
                {"P({2_2,4_2},3_3)", j24}, {"P(4_2,3_3)", j4}, {"P(3_2,3_3)", p3233}};
    return r;
}

}  // namespace threebox::leggett_garg
