// Command-line front end: protocol runs, staged comparisons, Q-function
// grids, Leggett-Garg statistics, NOON calibration, and named reproduction
// recipes that emit the data behind each figure and headline number.

#include <CLI11.hpp>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "threebox/boxalgebra.hpp"
#include "threebox/catstates.hpp"
#include "threebox/dynamics.hpp"
#include "threebox/errors.hpp"
#include "threebox/fock.hpp"
#include "threebox/format.hpp"
#include "threebox/leggett_garg.hpp"
#include "threebox/phasespace.hpp"
#include "threebox/protocol.hpp"

namespace fs = std::filesystem;
using namespace threebox;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string default_out_dir() {
    const char* env = std::getenv("PARADOX_LAB_OUT");
    return env && *env ? env : ".";
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out << content;
    std::cout << "wrote " << path.string() << "\n";
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

struct ScenarioFlags {
    std::string variant = "original";
    std::string bob = "none";
    std::string engine = "boxalgebra";
    int N = 2;
    double kappa = 1.0;
    double g = 30.0;
    double phi = 0.0;
    double phi1 = 0.0;
    double alpha0 = 3.0;
    int k_exp = 3;
    double Omega = 1.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--variant", variant, "original | mesoscopic | coherent");
        cmd->add_option("--bob", bob, "none | open1 | open2 | open14 | open24");
        cmd->add_option("--engine", engine, "boxalgebra | dynamics");
        cmd->add_option("--N", N, "boson number of the mesoscopic model");
        cmd->add_option("--kappa", kappa, "exchange coupling");
        cmd->add_option("--g", g, "on-site interaction");
        cmd->add_option("--phi", phi, "stage phase of the box-algebra mesoscopic set");
        cmd->add_option("--phi1", phi1, "second stage phase");
        cmd->add_option("--alpha0", alpha0, "coherent amplitude of the box states");
        cmd->add_option("--k", k_exp, "anharmonic exponent (2 or odd >= 3)");
        cmd->add_option("--Omega", Omega, "anharmonic strength");
    }

    json to_json() const {
        return {{"variant", variant}, {"bob_action", bob}, {"engine", engine},
                {"N", N},             {"kappa", kappa},    {"g", g},
                {"phi", phi},         {"phi1", phi1},      {"alpha0", alpha0},
                {"k_exp", k_exp},     {"Omega", Omega}};
    }
};

/// Flags first, then the optional JSON config on top of them.
protocol::Scenario build_scenario(const ScenarioFlags& flags, const std::string& config_path) {
    json j = flags.to_json();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ArgumentError("cannot read config " + config_path);
        j.update(json::parse(in));
    }
    return protocol::Scenario::from_json(j);
}

std::string dist_csv(const std::vector<std::string>& head,
                     const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

// --- meso histogram recipes -------------------------------------------------

std::vector<std::string> meso_row(const std::string& tag, const std::string& stage,
                                  const protocol::MesoDynamicsModel& model,
                                  const fock::StateVector& state) {
    const auto d = model.distribution(state);
    const auto& b = model.box_states();
    const double leak =
        dynamics::leakage(state, std::vector<fock::StateVector>{b[0], b[1], b[2]});
    std::vector<std::string> row;
    if (!tag.empty()) row.push_back(tag);
    row.push_back(stage);
    for (double p : d) row.push_back(fmt_real(p));
    row.push_back(fmt_real(leak));
    return row;
}

// --- reproduce recipes -------------------------------------------------------

json reproduce_fig1(const fs::path& dir) {
    json manifest;
    struct Set {
        std::string label;
        int N;
        double kappa, g;
    };
    for (const auto& set : {Set{"N2", 2, 1.0, 30.0}, Set{"N5", 5, 20.0, 333.33}}) {
        const fock::ModeSpec modes{3, set.N, set.N};
        const dynamics::JosephsonSpec pair{set.kappa, set.g, 2, 1};
        const auto cal = dynamics::calibrate_noon(modes, pair, set.N);
        dynamics::Propagator prop(dynamics::build_josephson(fock::Basis(modes), pair));
        const auto psi_n = fock::number_state(modes, {0, 0, set.N});
        const auto psi_0 = fock::number_state(modes, {0, set.N, 0});
        const double period = kPi / cal.omega_N;
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < 200; ++i) {
            const double t = period * i / 199.0;
            const auto psi = prop.evolve(psi_n, t);
            const double pn = std::norm(psi.inner(psi_n));
            const double p0 = std::norm(psi.inner(psi_0));
            rows.push_back({fmt_real(t), fmt_real(pn), fmt_real(p0), fmt_real(1.0 - pn - p0)});
        }
        write_file(dir / ("fig1_" + set.label + ".csv"),
                   dist_csv({"t", "p_n", "p_0", "leakage"}, rows));
        manifest[set.label] = {{"N", set.N},
                               {"kappa", set.kappa},
                               {"g", set.g},
                               {"omega_N", cal.omega_N},
                               {"T_noon", cal.T_noon},
                               {"fidelity", cal.fidelity},
                               {"fit_residual", cal.fit_residual},
                               {"min_box_population", cal.min_box_population}};
    }
    return manifest;
}

protocol::Scenario meso_scenario(int N, double kappa, double g) {
    protocol::Scenario s;
    s.variant = protocol::VariantKind::mesoscopic;
    s.engine = protocol::Engine::dynamics;
    s.N = N;
    s.kappa = kappa;
    s.g = g;
    return s;
}

json reproduce_fig2(const fs::path& dir) {
    const auto s = meso_scenario(2, 1.0, 30.0);
    protocol::MesoDynamicsModel model(s);
    const auto seq = model.preparation_sequence();
    const std::vector<std::string> stages{"initial", "after_U1i", "after_U2i"};
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < seq.size(); ++i) rows.push_back(meso_row("", stages[i], model, seq[i]));
    write_file(dir / "fig2.csv", dist_csv({"stage", "p1", "p2", "p3", "leakage"}, rows));

    // Continuous trajectory across the two preparation stages, 200 samples
    // per interval: t, P(|1>), P(|2>), P(|3>), leakage.
    const auto cal = model.calibration();
    const fock::ModeSpec modes{3, s.N, s.N};
    const fock::Basis basis(modes);
    dynamics::Propagator p32(dynamics::build_josephson(basis, {s.kappa, s.g, 2, 1}));
    dynamics::Propagator p21(dynamics::build_josephson(basis, {s.kappa, s.g, 1, 0}));
    const double t_1i = (2.0 * kPi - std::acos(1.0 / std::numbers::sqrt3)) / cal.omega_N;
    const double t_2i = (7.0 * kPi / 4.0) / cal.omega_N;
    std::vector<std::vector<std::string>> traj;
    auto sample = [&](const fock::StateVector& st, double t) {
        auto row = meso_row("", fmt_real(t), model, st);
        traj.push_back(std::move(row));
    };
    const auto& start = model.box_states()[2];
    for (int i = 0; i < 200; ++i) {
        const double t = t_1i * i / 199.0;
        sample(p32.evolve(start, t), t);
    }
    const auto mid = p32.evolve(start, t_1i);
    for (int i = 1; i < 200; ++i) {
        const double t = t_2i * i / 199.0;
        sample(p21.evolve(mid, t), t_1i + t);
    }
    write_file(dir / "fig2_trajectory.csv",
               dist_csv({"t", "p1", "p2", "p3", "leakage"}, traj));
    return {{"N", s.N}, {"kappa", s.kappa}, {"g", s.g},
            {"omega_N", model.calibration().omega_N}};
}

json reproduce_fig3(const fs::path& dir) {
    const auto s = meso_scenario(5, 20.0, 333.33);
    protocol::MesoDynamicsModel model(s);
    auto state = model.ideal_postselected_state();
    std::vector<std::vector<std::string>> rows;
    rows.push_back(meso_row("", "psi_f", model, state));
    state = model.stage_apply(0, state);
    rows.push_back(meso_row("", "after_U2f_inv", model, state));
    state = model.stage_apply(1, state);
    rows.push_back(meso_row("", "after_U1f_inv", model, state));
    write_file(dir / "fig3.csv", dist_csv({"stage", "p1", "p2", "p3", "leakage"}, rows));
    return {{"N", s.N}, {"kappa", s.kappa}, {"g", s.g},
            {"omega_N", model.calibration().omega_N}};
}

json reproduce_fig4(const fs::path& dir) {
    const auto s = meso_scenario(2, 1.0, 30.0);
    protocol::MesoDynamicsModel model(s);
    const auto sup = model.prepare();
    auto branches = model.measure(sup, {"1"});
    std::vector<std::vector<std::string>> rows;
    for (const auto& member : branches.members) {
        const std::string tag = member.label == "1" ? "bob_detects_1" : "bob_detects_not1";
        auto state = member.state;
        rows.push_back(meso_row(tag, "t2", model, state));
        state = model.stage_apply(0, state);
        rows.push_back(meso_row(tag, "after_U2f_inv", model, state));
        state = model.stage_apply(1, state);
        rows.push_back(meso_row(tag, "after_U1f_inv", model, state));
    }
    write_file(dir / "fig4.csv",
               dist_csv({"branch", "stage", "p1", "p2", "p3", "leakage"}, rows));
    return {{"N", s.N}, {"kappa", s.kappa}, {"g", s.g}};
}

json reproduce_fig5(const fs::path& dir) {
    auto s = meso_scenario(2, 1.0, 30.0);
    const auto res = protocol::stage_compare(s);
    write_file(dir / "fig5.csv", res.to_csv());
    return {{"N", s.N}, {"kappa", s.kappa}, {"g", s.g}, {"engine", "dynamics"},
            {"mixture", "Bob opens Box 3"}};
}

json reproduce_fig6(const fs::path& dir) {
    json manifest;
    for (double alpha0 : {2.0, 6.0}) {
        const int n_max = fock::coherent_n_max(alpha0);
        const auto grid = phasespace::default_grid(alpha0, 201);
        auto q_sup = phasespace::qfunction(catstates::four_cat_sup(alpha0, n_max), grid);
        auto q_mix = phasespace::qfunction(catstates::mix14_ensemble(alpha0, n_max), grid);
        const std::string tag = "a" + std::to_string(static_cast<int>(alpha0));
        write_file(dir / ("fig6_sup_" + tag + ".csv"), q_sup.to_csv());
        write_file(dir / ("fig6_mix_" + tag + ".csv"), q_mix.to_csv());
        manifest[tag] = {{"alpha0", alpha0},
                         {"n_max", n_max},
                         {"resolution", grid.resolution},
                         {"sup_minus_mix_supnorm", phasespace::q_distance(q_sup, q_mix)}};
    }
    return manifest;
}

/// Q-grid snapshots of one Kerr-evolved state (t2, after U_f1, after U_f2).
void q_sequence(const fs::path& dir, const std::string& stem, const fock::StateVector& init,
                double alpha0, int n_max, int k_exp) {
    dynamics::Propagator kerr(dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, k_exp}));
    const double t_f1 = k_exp == 2 ? 7.0 * kPi / 4.0 : 3.0 * kPi / 2.0;
    const auto grid = phasespace::default_grid(alpha0, 201);
    auto state = init;
    write_file(dir / (stem + "_t2.csv"), phasespace::qfunction(state, grid).to_csv());
    state = kerr.evolve(state, t_f1);
    write_file(dir / (stem + "_mid.csv"), phasespace::qfunction(state, grid).to_csv());
    state = kerr.evolve(state, kPi);
    write_file(dir / (stem + "_t3.csv"), phasespace::qfunction(state, grid).to_csv());
}

json reproduce_fig7(const fs::path& dir) {
    const double alpha0 = 3.0;
    const int n_max = fock::coherent_n_max(alpha0);
    auto psif = catstates::superpose(catstates::coherent_box_states(alpha0, n_max),
                                     {-0.5, 0.5, 0.5, 0.5});
    q_sequence(dir, "fig7", psif, alpha0, n_max, 3);
    return {{"alpha0", alpha0}, {"k_exp", 3}, {"initial", "postselected state psi_f"}};
}

json reproduce_fig8(const fs::path& dir) {
    const double alpha0 = 3.0;
    const int n_max = fock::coherent_n_max(alpha0);
    auto boxes = catstates::coherent_box_states(alpha0, n_max);
    q_sequence(dir, "fig8_box1", boxes[0], alpha0, n_max, 3);
    q_sequence(dir, "fig8_box4", boxes[3], alpha0, n_max, 3);
    return {{"alpha0", alpha0}, {"k_exp", 3},
            {"initial", "Bob detected the ball in Box 1 / Box 4"}};
}

json reproduce_fig9(const fs::path& dir) {
    const double alpha0 = 3.0;
    const int n_max = fock::coherent_n_max(alpha0);
    auto boxes = catstates::coherent_box_states(alpha0, n_max);
    auto not14 = catstates::superpose(boxes, {0.0, -0.5, 0.5, 0.0});
    auto not24 = catstates::superpose(boxes, {0.5, 0.0, 0.5, 0.0});
    q_sequence(dir, "fig9_not14", not14, alpha0, n_max, 3);
    q_sequence(dir, "fig9_not24", not24, alpha0, n_max, 3);
    return {{"alpha0", alpha0}, {"k_exp", 3},
            {"initial", "Bob found no ball in Boxes 1,4 / Boxes 2,4"}};
}

json reproduce_fig10(const fs::path& dir) {
    const double alpha0 = 6.0;
    const int n_max = fock::coherent_n_max(alpha0);
    q_sequence(dir, "fig10_sup", catstates::four_cat_sup(alpha0, n_max), alpha0, n_max, 3);
    // Mixture: evolve each member, weight-sum the member Q functions.
    dynamics::Propagator kerr(dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, 3}));
    auto ens = catstates::mix14_ensemble(alpha0, n_max);
    const auto grid = phasespace::default_grid(alpha0, 201);
    write_file(dir / "fig10_mix_t2.csv", phasespace::qfunction(ens, grid).to_csv());
    for (auto& m : ens.members) m.state = kerr.evolve(m.state, 3.0 * kPi / 2.0);
    write_file(dir / "fig10_mix_mid.csv", phasespace::qfunction(ens, grid).to_csv());
    for (auto& m : ens.members) m.state = kerr.evolve(m.state, kPi);
    write_file(dir / "fig10_mix_t3.csv", phasespace::qfunction(ens, grid).to_csv());
    return {{"alpha0", alpha0}, {"k_exp", 3}, {"n_max", n_max}};
}

json reproduce_table_lg(const fs::path& dir) {
    protocol::Scenario s3;
    s3.variant = protocol::VariantKind::original;
    protocol::Scenario s4;
    s4.variant = protocol::VariantKind::coherent;
    s4.alpha0 = 3.0;
    s4.k_exp = 3;
    const auto r3 = leggett_garg::lg_threebox(protocol::lg_table(s3));
    const auto r4 = leggett_garg::lg_fourbox(protocol::lg_table(s4));
    json out{{"threebox",
              {{"lg", r3.to_json()}, {"nondisturbance", protocol::disturbance_check(s3).to_json()}}},
             {"fourbox",
              {{"lg", r4.to_json()}, {"nondisturbance", protocol::disturbance_check(s4).to_json()}}}};
    write_json(dir / "lg.json", out);
    return {{"threebox_Q", r3.Q}, {"fourbox_Q", r4.Q}};
}

int cmd_reproduce(const std::string& target, const fs::path& out_root) {
    const fs::path dir = out_root / target;
    json manifest{{"target", target}};
    if (target == "fig1") manifest["parameters"] = reproduce_fig1(dir);
    else if (target == "fig2") manifest["parameters"] = reproduce_fig2(dir);
    else if (target == "fig3") manifest["parameters"] = reproduce_fig3(dir);
    else if (target == "fig4") manifest["parameters"] = reproduce_fig4(dir);
    else if (target == "fig5") manifest["parameters"] = reproduce_fig5(dir);
    else if (target == "fig6") manifest["parameters"] = reproduce_fig6(dir);
    else if (target == "fig7") manifest["parameters"] = reproduce_fig7(dir);
    else if (target == "fig8") manifest["parameters"] = reproduce_fig8(dir);
    else if (target == "fig9") manifest["parameters"] = reproduce_fig9(dir);
    else if (target == "fig10") manifest["parameters"] = reproduce_fig10(dir);
    else if (target == "table-lg") manifest["parameters"] = reproduce_table_lg(dir);
    else {
        std::cerr << "unknown reproduce target: " << target << "\n";
        return 2;
    }
    write_json(dir / "manifest.json", manifest);
    return 0;
}

// --- qfunc state construction -------------------------------------------------

fock::StateVector qfunc_state(const std::string& name, double alpha0, int k_exp, int n_max,
                              Ensemble<fock::StateVector>* ensemble_out) {
    const fock::Complex em = std::exp(fock::Complex(0.0, -kPi / 4.0));
    auto boxes = catstates::coherent_box_states(alpha0, n_max);
    if (name == "box1") return boxes[0];
    if (name == "box2") return boxes[1];
    if (name == "box3") return boxes[2];
    if (name == "box4") return boxes[3];
    if (name == "sup")
        return k_exp == 2
                   ? catstates::superpose(boxes, {0.5, 0.5, 0.5 * em, -0.5 * em})
                   : catstates::four_cat_sup(alpha0, n_max);
    if (name == "psif")
        return k_exp == 2 ? catstates::superpose(boxes, {0.5, 0.5, -0.5 * em, 0.5 * em})
                          : catstates::superpose(boxes, {-0.5, 0.5, 0.5, 0.5});
    if (name == "final") {
        dynamics::Propagator kerr(
            dynamics::build_kerr(n_max, dynamics::KerrSpec{0.0, 1.0, k_exp}));
        const double t_f1 = k_exp == 2 ? 7.0 * kPi / 4.0 : 3.0 * kPi / 2.0;
        auto sup = qfunc_state("sup", alpha0, k_exp, n_max, nullptr);
        return kerr.evolve(kerr.evolve(sup, t_f1), kPi);
    }
    if (name == "mix14") {
        if (!ensemble_out) throw ArgumentError("mix14 is an ensemble state");
        *ensemble_out = catstates::mix14_ensemble(alpha0, n_max);
        return boxes[0];  // unused
    }
    throw ArgumentError("unknown qfunc state: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum three-box paradox simulator"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();
    std::string format = "csv";
    std::string config_path;
    int seed = 0;
    app.add_option("--out", out_dir, "output directory (default $PARADOX_LAB_OUT or .)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", config_path, "JSON scenario config; overrides flags");
    app.add_option("--seed", seed, "accepted for forward compatibility; no stochastic paths");

    ScenarioFlags flags;

    auto* run_cmd = app.add_subcommand("run", "run a protocol scenario, emit the table");
    flags.add_to(run_cmd);

    auto* stage_cmd =
        app.add_subcommand("stage-compare", "staged shuffle: superposition vs mixture");
    flags.add_to(stage_cmd);

    auto* qfunc_cmd = app.add_subcommand("qfunc", "Husimi Q grid of a named state");
    std::string qstate = "sup";
    int qres = 201;
    qfunc_cmd->add_option("--state", qstate,
                          "sup | psif | final | mix14 | box1 | box2 | box3 | box4");
    qfunc_cmd->add_option("--res", qres, "grid resolution per axis");
    flags.add_to(qfunc_cmd);

    auto* lg_cmd = app.add_subcommand("lg", "Leggett-Garg statistic of a variant");
    flags.add_to(lg_cmd);

    auto* cal_cmd = app.add_subcommand("calibrate", "NOON calibration of the pair coupling");
    flags.add_to(cal_cmd);

    auto* rep_cmd = app.add_subcommand("reproduce", "emit the data behind a named figure");
    std::string target;
    rep_cmd->add_option("target", target, "fig1..fig10 | table-lg")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // Configuration phase: exit 2 on any parse/validation problem.
    protocol::Scenario scenario;
    const bool needs_scenario = run_cmd->parsed() || stage_cmd->parsed() || lg_cmd->parsed();
    try {
        if (needs_scenario) scenario = build_scenario(flags, config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const fs::path out_root(out_dir);
    try {
        if (run_cmd->parsed()) {
            const auto table = protocol::run(scenario);
            json manifest{{"command", "run"}, {"scenario", scenario.to_json()}};
            if (format == "json")
                write_json(out_root / "table.json", table.to_json());
            else
                write_file(out_root / "table.csv", table.to_csv());
            write_json(out_root / "run_manifest.json", manifest);
            return 0;
        }
        if (stage_cmd->parsed()) {
            const auto res = protocol::stage_compare(scenario);
            if (format == "json")
                write_json(out_root / "stage_compare.json", res.to_json());
            else
                write_file(out_root / "stage_compare.csv", res.to_csv());
            write_json(out_root / "stage_compare_manifest.json",
                       {{"command", "stage-compare"}, {"scenario", scenario.to_json()}});
            return 0;
        }
        if (lg_cmd->parsed()) {
            const auto table = protocol::lg_table(scenario);
            const auto result = scenario.variant == protocol::VariantKind::coherent
                                    ? leggett_garg::lg_fourbox(table)
                                    : leggett_garg::lg_threebox(table);
            json out{{"lg", result.to_json()},
                     {"nondisturbance", protocol::disturbance_check(scenario).to_json()},
                     {"scenario", scenario.to_json()}};
            write_json(out_root / "lg.json", out);
            return 0;
        }
        if (cal_cmd->parsed()) {
            const fock::ModeSpec modes{3, flags.N, flags.N};
            const dynamics::JosephsonSpec pair{flags.kappa, flags.g, 2, 1};
            const auto cal = dynamics::calibrate_noon(modes, pair, flags.N);
            write_json(out_root / "calibration.json",
                       {{"N", flags.N},
                        {"kappa", flags.kappa},
                        {"g", flags.g},
                        {"omega_N", cal.omega_N},
                        {"T_noon", cal.T_noon},
                        {"fidelity", cal.fidelity},
                        {"fit_residual", cal.fit_residual},
                        {"min_box_population", cal.min_box_population}});
            return 0;
        }
        if (qfunc_cmd->parsed()) {
            const int n_max = fock::coherent_n_max(flags.alpha0);
            const auto grid = phasespace::default_grid(flags.alpha0, qres);
            Ensemble<fock::StateVector> ens;
            phasespace::QGrid q{grid, {}, flags.alpha0};
            if (qstate == "mix14") {
                qfunc_state(qstate, flags.alpha0, flags.k_exp, n_max, &ens);
                q = phasespace::qfunction(ens, grid);
            } else {
                q = phasespace::qfunction(
                    qfunc_state(qstate, flags.alpha0, flags.k_exp, n_max, nullptr), grid);
            }
            q.alpha0 = flags.alpha0;
            write_file(out_root / "qgrid.csv", q.to_csv());
            write_json(out_root / "qgrid_manifest.json",
                       {{"state", qstate},
                        {"alpha0", flags.alpha0},
                        {"k_exp", flags.k_exp},
                        {"n_max", n_max},
                        {"resolution", qres},
                        {"integral", q.integral()}});
            return 0;
        }
        if (rep_cmd->parsed()) return cmd_reproduce(target, out_root);
    } catch (const Error& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
