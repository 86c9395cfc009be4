// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status 0 only if all criteria pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "threebox/boxalgebra.hpp"
#include "threebox/catstates.hpp"
#include "threebox/dynamics.hpp"
#include "threebox/fock.hpp"
#include "threebox/leggett_garg.hpp"
#include "threebox/phasespace.hpp"
#include "threebox/protocol.hpp"

using namespace threebox;

namespace {

constexpr double kPi = std::numbers::pi;

struct Checker {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void near(double value, double target, double tol, const std::string& what) {
        if (!(std::abs(value - target) <= tol)) {
            ok = false;
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s: got %.12g, want %.12g +- %.1g", what.c_str(),
                          value, target, tol);
            notes.push_back(buf);
        }
    }
};

int g_failures = 0;

void run_criterion(int number, const std::string& title, double time_budget_s,
                   const std::function<void(Checker&)>& body) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(elapsed < time_budget_s, "runtime budget exceeded");
    std::printf("%s criterion %d: %s [%.2f s]\n", check.ok ? "PASS" : "FAIL", number,
                title.c_str(), elapsed);
    for (const auto& n : check.notes) std::printf("       - %s\n", n.c_str());
    if (!check.ok) ++g_failures;
}

protocol::Scenario scenario(protocol::VariantKind v, protocol::Engine e,
                            std::set<std::string> opened) {
    protocol::Scenario s;
    s.variant = v;
    s.engine = e;
    s.opened = std::move(opened);
    return s;
}

protocol::Scenario meso(protocol::Engine e, int N, double kappa, double g,
                        std::set<std::string> opened) {
    auto s = scenario(protocol::VariantKind::mesoscopic, e, std::move(opened));
    s.N = N;
    s.kappa = kappa;
    s.g = g;
    return s;
}

protocol::Scenario coherent(protocol::Engine e, std::set<std::string> opened) {
    auto s = scenario(protocol::VariantKind::coherent, e, std::move(opened));
    s.alpha0 = 3.0;
    s.k_exp = 3;
    return s;
}

void check_original_table(Checker& c, const protocol::ProbabilityTable& t1,
                          const protocol::ProbabilityTable& t2,
                          const protocol::ProbabilityTable& tn, double tol_prep,
                          double tol_full, const std::string& tag) {
    c.near(t1.marginal("1", 2), 1.0 / 3.0, tol_prep, tag + " P_B1(1_2)");
    c.near(t1.marginal("3", 3), 1.0 / 9.0, tol_full, tag + " P_B1(3_3)");
    c.near(t2.marginal("3", 3), 1.0 / 9.0, tol_full, tag + " P_B2(3_3)");
    c.near(tn.marginal("3", 3), 1.0 / 9.0, tol_full, tag + " P_N(3_3)");
    c.near(t1.conditional("1_2", "3_3"), 1.0, tol_full, tag + " P_B1(1_2|3_3)");
    c.near(t2.conditional("2_2", "3_3"), 1.0, tol_full, tag + " P_B2(2_2|3_3)");
    const double no_meas[3] = {0.0, 8.0 / 9.0, 1.0 / 9.0};
    const double mixture[3] = {1.0 / 3.0, 5.0 / 9.0, 1.0 / 9.0};
    const char* boxes[3] = {"1", "2", "3"};
    for (int k = 0; k < 3; ++k) {
        c.near(tn.marginal(boxes[k], 3), no_meas[k], tol_full, tag + " no-measurement final");
        c.near(t1.marginal(boxes[k], 3), mixture[k], tol_full, tag + " measured mixture final");
        c.near(t2.marginal(boxes[k], 3), mixture[k], tol_full, tag + " measured mixture final");
    }
}

}  // namespace

int main() {
    run_criterion(1, "original paradox table, box algebra, exact", 1.0, [](Checker& c) {
        const auto t1 = protocol::run(scenario(protocol::VariantKind::original,
                                               protocol::Engine::boxalgebra, {"1"}));
        const auto t2 = protocol::run(scenario(protocol::VariantKind::original,
                                               protocol::Engine::boxalgebra, {"2"}));
        const auto tn = protocol::run(scenario(protocol::VariantKind::original,
                                               protocol::Engine::boxalgebra, {}));
        check_original_table(c, t1, t2, tn, 1e-12, 1e-12, "box");
    });

    run_criterion(2, "mesoscopic Fock dynamics reproduces the table within leakage bounds",
                  30.0, [](Checker& c) {
        struct Params {
            int N;
            double kappa, g;
        };
        for (const auto& p : {Params{2, 1.0, 30.0}, Params{5, 20.0, 333.33}}) {
            const std::string tag = "N=" + std::to_string(p.N);
            const auto t1 = protocol::run(meso(protocol::Engine::dynamics, p.N, p.kappa, p.g,
                                               {"1"}));
            const auto t2 = protocol::run(meso(protocol::Engine::dynamics, p.N, p.kappa, p.g,
                                               {"2"}));
            const auto tn = protocol::run(meso(protocol::Engine::dynamics, p.N, p.kappa, p.g,
                                               {}));
            // preparation bound 3e-3 on t2 marginals, full-sequence 8e-3 on
            // everything downstream of Alice's shuffle
            check_original_table(c, t1, t2, tn, 3e-3, 8e-3, tag);

            protocol::MesoDynamicsModel model(
                meso(protocol::Engine::dynamics, p.N, p.kappa, p.g, {}));
            const auto& b = model.box_states();
            const std::vector<fock::StateVector> allowed{b[0], b[1], b[2]};
            // preparation leakage < 3e-3
            const auto prep = model.preparation_sequence();
            for (const auto& st : prep)
                c.require(dynamics::leakage(st, allowed) < 3e-3, tag + " preparation leakage");
            // postselection path: ideal psi_f -> U_2f^-1 -> U_1f^-1 = |3>,
            // leakage < 6e-3 along the path
            auto state = model.ideal_postselected_state();
            state = model.stage_apply(0, state);
            c.require(dynamics::leakage(state, allowed) < 6e-3, tag + " postselection leakage");
            state = model.stage_apply(1, state);
            c.require(dynamics::leakage(state, allowed) < 6e-3, tag + " postselection leakage");
            c.near(std::norm(state.inner(b[2])), 1.0, 6e-3, tag + " postselected -> |3>");
            // full Alice sequence after Bob's detection: leakage < 8e-3
            auto after_bob = model.stage_apply(1, model.stage_apply(0, b[0]));
            c.require(dynamics::leakage(after_bob, allowed) < 8e-3, tag + " full-sequence leakage");
        }
    });

    run_criterion(3, "NOON calibration quality for both parameter sets", 10.0, [](Checker& c) {
        const auto cal2 =
            dynamics::calibrate_noon(fock::ModeSpec{3, 2, 2}, {1.0, 30.0, 2, 1}, 2);
        const auto cal5 =
            dynamics::calibrate_noon(fock::ModeSpec{3, 5, 5}, {20.0, 333.33, 2, 1}, 5);
        for (const auto* cal : {&cal2, &cal5}) {
            c.require(cal->min_box_population >= 0.99, "P_N + P_0 >= 0.99 over one period");
            c.require(cal->fit_residual < 0.05, "cos^2 fit residual < 0.05");
            c.require(cal->fidelity >= 0.99, "balanced-superposition fidelity at T_noon");
        }
    });

    run_criterion(4, "wMR staged comparison, box engine", 1.0, [](Checker& c) {
        const auto res = protocol::stage_compare(
            meso(protocol::Engine::boxalgebra, 2, 1.0, 30.0, {}));
        const double after_local[3] = {0.0, 2.0 / 3.0, 1.0 / 3.0};
        for (int b = 0; b < 3; ++b) {
            c.near(res.superposition[1][b], after_local[b], 1e-12, "superposition after U_2f^-1");
            c.near(res.mixture[1][b], after_local[b], 1e-12, "mixture after U_2f^-1");
        }
        const double sup_final[3] = {0.0, 8.0 / 9.0, 1.0 / 9.0};
        for (int b = 0; b < 3; ++b)
            c.near(res.superposition[2][b], sup_final[b], 1e-12, "superposition after U_1f^-1");
        // Exact-algebra mixture final: 2/3*(0,1/3,2/3) + 1/3*(0,2/3,1/3).
        // The second stage acts only on boxes 2 and 3, so neither input can
        // gain box-1 population here.
        const double mix_final[3] = {0.0, 4.0 / 9.0, 5.0 / 9.0};
        for (int b = 0; b < 3; ++b)
            c.near(res.mixture[2][b], mix_final[b], 1e-12, "mixture after U_1f^-1");
        c.require(std::abs(res.superposition[2][2] - res.mixture[2][2]) > 0.1,
                  "distributions diverge after the local-nonlocal stage");
    });

    run_criterion(5, "coherent four-box paradox, exact algebra and Kerr Fock dynamics", 30.0,
                  [](Checker& c) {
        for (auto engine : {protocol::Engine::boxalgebra, protocol::Engine::dynamics}) {
            const double tol = engine == protocol::Engine::boxalgebra ? 1e-12 : 1e-6;
            const std::string tag =
                engine == protocol::Engine::boxalgebra ? "box" : "dynamics";
            const auto t14 = protocol::run(coherent(engine, {"1", "4"}));
            const auto t24 = protocol::run(coherent(engine, {"2", "4"}));
            const auto tn = protocol::run(coherent(engine, {}));
            c.near(t14.marginal("3", 3), 1.0 / 8.0, tol, tag + " P_B1B4(3_3)");
            c.near(t24.marginal("3", 3), 1.0 / 8.0, tol, tag + " P_B2B4(3_3)");
            c.near(t14.conditional("{1_2,4_2}", "3_3"), 1.0, tol, tag + " P({1,4}|3_3)");
            c.near(t24.conditional("{2_2,4_2}", "3_3"), 1.0, tol, tag + " P({2,4}|3_3)");
            c.near(t14.conditional("4_2", "3_3"), 0.5, tol, tag + " P(4_2|3_3)");
            c.near(tn.marginal("3", 3), 0.0, tol, tag + " P_N(3_3)");
        }
    });

    run_criterion(6, "Kerr dynamics identities", 10.0, [](Checker& c) {
        const double alpha0 = 3.0;
        const int n_max = fock::coherent_n_max(alpha0);
        const auto plus = fock::coherent_state(alpha0, n_max);
        const auto minus = fock::coherent_state(-alpha0, n_max);
        for (int k : {2, 3}) {
            dynamics::Propagator prop(
                dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, k}));
            c.require(std::norm(prop.evolve(plus, 2.0 * kPi).inner(plus)) >= 1.0 - 1e-9,
                      "period 2pi/W return, k=" + std::to_string(k));
            c.require(std::norm(prop.evolve(plus, kPi).inner(minus)) >= 1.0 - 1e-9,
                      "half period pi/W maps |a0> to |-a0>, k=" + std::to_string(k));
        }
        dynamics::Propagator k3(dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, 3}));
        const auto cat4 = catstates::four_cat_sup(alpha0, n_max);
        c.require(std::norm(k3.evolve(plus, kPi / 2.0).inner(cat4)) >= 1.0 - 1e-6,
                  "quarter period four-component cat, k=3");
        dynamics::Propagator k2(dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, 2}));
        const fock::Complex em = std::exp(fock::Complex(0.0, -kPi / 4.0));
        const auto cat2 = catstates::superpose(catstates::coherent_box_states(alpha0, n_max),
                                               {0.5, 0.5, 0.5 * em, -0.5 * em});
        c.require(std::norm(k2.evolve(plus, kPi / 4.0).inner(cat2)) >= 1.0 - 1e-6,
                  "eighth period four-component cat, k=2");
    });

    run_criterion(7, "Q-function disturbance decay with growing alpha0", 60.0, [](Checker& c) {
        std::vector<double> dist;
        for (int a = 1; a <= 6; ++a) {
            const double alpha0 = a;
            const int n_max = fock::coherent_n_max(alpha0);
            const auto grid = phasespace::default_grid(alpha0, 201);
            const auto q_sup =
                phasespace::qfunction(catstates::four_cat_sup(alpha0, n_max), grid);
            const auto q_mix =
                phasespace::qfunction(catstates::mix14_ensemble(alpha0, n_max), grid);
            if (a == 3) {
                c.near(q_sup.integral(), 1.0, 0.02, "superposition Q normalization");
                c.near(q_mix.integral(), 1.0, 0.02, "mixture Q normalization");
            }
            dist.push_back(phasespace::q_distance(q_sup, q_mix));
        }
        for (size_t i = 1; i < dist.size(); ++i)
            c.require(dist[i] < dist[i - 1], "strict decrease of the sup-norm distance");
        c.require(dist[5] < 1e-4 * dist[1], "alpha0=6 distance below 1e-4 of alpha0=2");
    });

    run_criterion(8, "Leggett-Garg violations and macrorealist bounds", 5.0, [](Checker& c) {
        const auto r3 = leggett_garg::lg_threebox(protocol::lg_table(
            scenario(protocol::VariantKind::original, protocol::Engine::boxalgebra, {})));
        c.near(r3.Q, -13.0 / 9.0, 1e-12, "threebox Q");
        c.require(r3.violated, "threebox violation flag");
        const auto r4 = leggett_garg::lg_fourbox(
            protocol::lg_table(coherent(protocol::Engine::boxalgebra, {})));
        c.near(r4.Q, -5.0 / 4.0, 1e-12, "fourbox Q");
        c.require(r4.violated, "fourbox violation flag");

        // Exhaustive deterministic macrorealist trajectories stay in [-1, 3].
        auto threebox_traj = [](int b2, int b3) {
            protocol::ProbabilityTable t;
            t.set_marginal("3", 2, b2 == 3 ? 1.0 : 0.0);
            t.set_marginal("3", 3, b3 == 3 ? 1.0 : 0.0);
            t.set_joint("1_2", "3_3", (b2 == 1 && b3 == 3) ? 1.0 : 0.0);
            t.set_joint("2_2", "3_3", (b2 == 2 && b3 == 3) ? 1.0 : 0.0);
            return t;
        };
        auto fourbox_traj = [](int b2, int b3) {
            protocol::ProbabilityTable t;
            t.set_marginal("3", 2, b2 == 3 ? 1.0 : 0.0);
            t.set_marginal("3", 3, b3 == 3 ? 1.0 : 0.0);
            const double j1 = (b2 == 1 && b3 == 3) ? 1.0 : 0.0;
            const double j2 = (b2 == 2 && b3 == 3) ? 1.0 : 0.0;
            const double j4 = (b2 == 4 && b3 == 3) ? 1.0 : 0.0;
            t.set_joint("{1_2,4_2}", "3_3", j1 + j4);
            t.set_joint("{2_2,4_2}", "3_3", j2 + j4);
            t.set_joint("4_2", "3_3", j4);
            return t;
        };
        for (int b2 = 1; b2 <= 3; ++b2)
            for (int b3 = 1; b3 <= 3; ++b3) {
                const auto r = leggett_garg::lg_threebox(threebox_traj(b2, b3));
                c.require(r.Q >= -1.0 - 1e-15 && r.Q <= 3.0 + 1e-15, "threebox trajectory bound");
            }
        for (int b2 = 1; b2 <= 4; ++b2)
            for (int b3 = 1; b3 <= 4; ++b3) {
                const auto r = leggett_garg::lg_fourbox(fourbox_traj(b2, b3));
                c.require(r.Q >= -1.0 - 1e-15 && r.Q <= 3.0 + 1e-15, "fourbox trajectory bound");
            }
        // Random mixtures of deterministic trajectories (fixed seed).
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            double w[3][3], total = 0.0;
            for (auto& row : w)
                for (double& x : row) {
                    x = u(rng);
                    total += x;
                }
            double p32 = 0, p33 = 0, j1 = 0, j2 = 0;
            for (int b2 = 1; b2 <= 3; ++b2)
                for (int b3 = 1; b3 <= 3; ++b3) {
                    const double wt = w[b2 - 1][b3 - 1] / total;
                    p32 += wt * (b2 == 3);
                    p33 += wt * (b3 == 3);
                    j1 += wt * (b2 == 1 && b3 == 3);
                    j2 += wt * (b2 == 2 && b3 == 3);
                }
            protocol::ProbabilityTable t;
            t.set_marginal("3", 2, p32);
            t.set_marginal("3", 3, p33);
            t.set_joint("1_2", "3_3", j1);
            t.set_joint("2_2", "3_3", j2);
            const auto r = leggett_garg::lg_threebox(t);
            c.require(r.Q >= -1.0 - 1e-12 && r.Q <= 3.0 + 1e-12, "mixture bound");
        }
    });

    run_criterion(9, "property suites: unitarity, norms, phases, number conservation", 30.0,
                  [](Checker& c) {
        // Propagator unitarity and norm preservation.
        const fock::ModeSpec modes2{3, 2, 2};
        const auto h32 = dynamics::build_josephson(fock::Basis(modes2), {1.0, 30.0, 2, 1});
        dynamics::Propagator prop(h32);
        const auto psi0 = fock::number_state(modes2, {0, 0, 2});
        for (double t : {0.1, 1.0, 7.3, 55.0}) {
            const auto u = prop.at(t);
            c.require(u.unitarity_defect() <= 1e-9, "propagator unitarity defect");
            c.near(u.apply(psi0).norm(), 1.0, 1e-9, "norm preservation");
        }
        const auto kerr = dynamics::build_kerr(43, dynamics::KerrSpec{0.0, 1.0, 3});
        c.require(dynamics::propagator(kerr, 0.77).unitarity_defect() <= 1e-9,
                  "Kerr propagator unitarity defect");

        // Probability-sum conservation through measurement branching.
        const auto sup = prop.evolve(psi0, 11.0);
        const auto ens = fock::measure_projective(
            sup, {{"1", {fock::number_state(modes2, {2, 0, 0})}}});
        c.near(ens.total_weight(), 1.0, 1e-9, "measurement completeness");

        // Phase invariance of the mesoscopic box set over a 5x5 (phi, phi1) grid.
        const auto ref = protocol::run(meso(protocol::Engine::boxalgebra, 2, 1.0, 30.0, {"1"}));
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) {
                auto s = meso(protocol::Engine::boxalgebra, 2, 1.0, 30.0, {"1"});
                s.phi = 2.0 * kPi * a / 5.0;
                s.phi1 = 2.0 * kPi * b / 5.0;
                const auto t = protocol::run(s);
                for (const auto& [ev, p] : ref.marginals())
                    c.near(t.marginal(ev), p, 1e-12, "phase invariance of " + ev);
                c.near(t.joint("1_2", "3_3"), ref.joint("1_2", "3_3"), 1e-12,
                       "phase invariance of the joint");
            }

        // Total-number conservation along a Josephson trajectory.
        const fock::ModeSpec free2{2, 3, std::nullopt};
        const fock::Basis basis(free2);
        dynamics::Propagator jp(dynamics::build_josephson(basis, {1.0, 5.0, 0, 1}));
        const auto start = fock::number_state(free2, {3, 0});
        for (double t = 0.0; t <= 20.0; t += 0.4) {
            const auto psi = jp.evolve(start, t);
            double n_tot = 0.0;
            for (int i = 0; i < basis.dim(); ++i) {
                const auto& occ = basis.tuple(i);
                n_tot += (occ[0] + occ[1]) * std::norm(psi.amplitudes()[i]);
            }
            c.near(n_tot, 3.0, 1e-10, "total boson number conservation");
        }
    });

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
