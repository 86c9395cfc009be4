#include "threebox/leggett_garg.hpp"

#include <gtest/gtest.h>

#include <random>

#include "threebox/errors.hpp"
#include "threebox/protocol.hpp"

using namespace threebox;
using leggett_garg::lg_fourbox;
using leggett_garg::lg_threebox;
using protocol::ProbabilityTable;

namespace {

/// Table of a deterministic three-box trajectory (b2, b3), prepared in
/// Box 3 at T1, no disturbance.
ProbabilityTable threebox_trajectory(int b2, int b3) {
    ProbabilityTable t;
    for (int box = 1; box <= 3; ++box) {
        t.set_marginal(std::to_string(box), 2, box == b2 ? 1.0 : 0.0);
        t.set_marginal(std::to_string(box), 3, box == b3 ? 1.0 : 0.0);
    }
    t.set_joint("1_2", "3_3", (b2 == 1 && b3 == 3) ? 1.0 : 0.0);
    t.set_joint("2_2", "3_3", (b2 == 2 && b3 == 3) ? 1.0 : 0.0);
    return t;
}

ProbabilityTable fourbox_trajectory(int b2, int b3) {
    ProbabilityTable t;
    for (int box = 1; box <= 4; ++box) {
        t.set_marginal(std::to_string(box), 2, box == b2 ? 1.0 : 0.0);
        t.set_marginal(std::to_string(box), 3, box == b3 ? 1.0 : 0.0);
    }
    const double j1 = (b2 == 1 && b3 == 3) ? 1.0 : 0.0;
    const double j2 = (b2 == 2 && b3 == 3) ? 1.0 : 0.0;
    const double j4 = (b2 == 4 && b3 == 3) ? 1.0 : 0.0;
    t.set_joint("{1_2,4_2}", "3_3", j1 + j4);
    t.set_joint("{2_2,4_2}", "3_3", j2 + j4);
    t.set_joint("4_2", "3_3", j4);
    return t;
}

ProbabilityTable mix_threebox(const std::vector<std::pair<double, std::pair<int, int>>>& mix) {
    ProbabilityTable t;
    double p32 = 0, p33 = 0, j1 = 0, j2 = 0;
    for (const auto& [w, traj] : mix) {
        const auto [b2, b3] = traj;
        p32 += w * (b2 == 3);
        p33 += w * (b3 == 3);
        j1 += w * (b2 == 1 && b3 == 3);
        j2 += w * (b2 == 2 && b3 == 3);
    }
    t.set_marginal("3", 2, p32);
    t.set_marginal("3", 3, p33);
    t.set_joint("1_2", "3_3", j1);
    t.set_joint("2_2", "3_3", j2);
    return t;
}

}  // namespace

TEST(LgThreebox, ParadoxTableViolates) {
    protocol::Scenario s;
    s.variant = protocol::VariantKind::original;
    auto r = lg_threebox(protocol::lg_table(s));
    EXPECT_NEAR(r.Q, -13.0 / 9.0, 1e-12);
    EXPECT_TRUE(r.violated);
    EXPECT_NEAR(r.Q, r.l12 + r.l23 + r.l13, 1e-12);
    EXPECT_EQ(r.lambda.sign.at("3"), 1);
    EXPECT_EQ(r.lambda.sign.at("1"), -1);
}

TEST(LgThreebox, MesoBoxEngineGivesTheSameViolation) {
    protocol::Scenario s;
    s.variant = protocol::VariantKind::mesoscopic;
    s.phi = 0.9;
    s.phi1 = 2.2;
    auto r = lg_threebox(protocol::lg_table(s));
    EXPECT_NEAR(r.Q, -13.0 / 9.0, 1e-12);
}

TEST(LgFourbox, CoherentTableViolates) {
    protocol::Scenario s;
    s.variant = protocol::VariantKind::coherent;
    s.alpha0 = 3.0;
    s.k_exp = 3;
    auto r = lg_fourbox(protocol::lg_table(s));
    EXPECT_NEAR(r.Q, -5.0 / 4.0, 1e-12);
    EXPECT_TRUE(r.violated);
    EXPECT_NEAR(r.Q, r.l12 + r.l23 + r.l13, 1e-12);
}

TEST(LgThreebox, UndisturbedBallInBoxThreeSaturatesTheBound) {
    auto r = lg_threebox(threebox_trajectory(3, 3));
    EXPECT_NEAR(r.Q, 3.0, 1e-15);
    EXPECT_FALSE(r.violated);
}

TEST(LgThreebox, AllDeterministicTrajectoriesRespectTheBound) {
    for (int b2 = 1; b2 <= 3; ++b2)
        for (int b3 = 1; b3 <= 3; ++b3) {
            auto r = lg_threebox(threebox_trajectory(b2, b3));
            EXPECT_GE(r.Q, -1.0 - 1e-15) << b2 << b3;
            EXPECT_LE(r.Q, 3.0 + 1e-15) << b2 << b3;
            EXPECT_FALSE(r.violated);
        }
}

TEST(LgFourbox, AllDeterministicTrajectoriesRespectTheBound) {
    for (int b2 = 1; b2 <= 4; ++b2)
        for (int b3 = 1; b3 <= 4; ++b3) {
            auto r = lg_fourbox(fourbox_trajectory(b2, b3));
            EXPECT_GE(r.Q, -1.0 - 1e-15) << b2 << b3;
            EXPECT_LE(r.Q, 3.0 + 1e-15) << b2 << b3;
            EXPECT_FALSE(r.violated);
        }
}

TEST(LgThreebox, RandomTrajectoryMixturesRespectTheBound) {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<double, std::pair<int, int>>> mix;
        double total = 0.0;
        for (int b2 = 1; b2 <= 3; ++b2)
            for (int b3 = 1; b3 <= 3; ++b3) {
                const double w = u(rng);
                mix.push_back({w, {b2, b3}});
                total += w;
            }
        for (auto& m : mix) m.first /= total;
        auto r = lg_threebox(mix_threebox(mix));
        EXPECT_GE(r.Q, -1.0 - 1e-12);
        EXPECT_LE(r.Q, 3.0 + 1e-12);
        EXPECT_FALSE(r.violated);
    }
}

TEST(LgDecomposition, TermSumMatchesClosedFormOnRandomTables) {
    // Q assembled from the three correlators equals 4 P(3_2,3_3) - 1 on any
    // valid table.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double p33 = u(rng);
        const double j1 = u(rng) * p33;
        const double j2 = u(rng) * (p33 - j1);
        const double p32 = u(rng);
        ProbabilityTable t;
        t.set_marginal("3", 2, p32);
        t.set_marginal("3", 3, p33);
        t.set_joint("1_2", "3_3", j1);
        t.set_joint("2_2", "3_3", j2);
        auto r = lg_threebox(t);
        EXPECT_NEAR(r.Q, 4.0 * (p33 - j1 - j2) - 1.0, 1e-12);
        EXPECT_NEAR(r.Q, r.l12 + r.l23 + r.l13, 1e-12);
    }
}

TEST(LgInputs, MissingEntriesRaiseTableError) {
    ProbabilityTable t;
    t.set_marginal("3", 3, 0.1);
    EXPECT_THROW(lg_threebox(t), TableError);
    EXPECT_THROW(lg_fourbox(t), TableError);
}

TEST(LgResult, JsonCarriesEverything) {
    auto r = lg_threebox(threebox_trajectory(3, 3));
    auto j = r.to_json();
    EXPECT_EQ(j.at("violated").get<bool>(), false);
    EXPECT_NEAR(j.at("Q").get<double>(), 3.0, 1e-15);
    EXPECT_TRUE(j.contains("terms"));
    EXPECT_TRUE(j.contains("inputs"));
    EXPECT_EQ(j.at("lambda").at("3").get<int>(), 1);
}
