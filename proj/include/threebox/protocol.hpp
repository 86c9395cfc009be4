#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "threebox/boxalgebra.hpp"
#include "threebox/catstates.hpp"
#include "threebox/dynamics.hpp"
#include "threebox/ensemble.hpp"
#include "threebox/errors.hpp"
#include "threebox/fock.hpp"
#include "threebox/format.hpp"

namespace threebox::protocol {

enum class VariantKind { original, mesoscopic, coherent };
enum class Engine { boxalgebra, dynamics };

inline VariantKind variant_kind_from_string(const std::string& s) {
    if (s == "original") return VariantKind::original;
    if (s == "mesoscopic") return VariantKind::mesoscopic;
    if (s == "coherent") return VariantKind::coherent;
    throw VariantError("unknown variant: " + s);
}

inline std::string to_string(VariantKind v) {
    switch (v) {
        case VariantKind::original: return "original";
        case VariantKind::mesoscopic: return "mesoscopic";
        default: return "coherent";
    }
}

inline Engine engine_from_string(const std::string& s) {
    if (s == "boxalgebra") return Engine::boxalgebra;
    if (s == "dynamics") return Engine::dynamics;
    throw ArgumentError("unknown engine: " + s);
}

inline std::string to_string(Engine e) {
    return e == Engine::boxalgebra ? "boxalgebra" : "dynamics";
}

/// One full preselection -> Bob -> shuffle -> postselection experiment.
struct Scenario {
    VariantKind variant = VariantKind::original;
    Engine engine = Engine::boxalgebra;
    std::set<std::string> opened;  // empty: Bob makes no measurement

    // mesoscopic model
    int N = 2;
    double kappa = 1.0;
    double g = 30.0;
    double phi = 0.0;   // stage phases of the box-algebra mesoscopic set
    double phi1 = 0.0;

    // coherent model
    double alpha0 = 3.0;
    int k_exp = 3;
    double Omega = 1.0;

    int box_count() const { return variant == VariantKind::coherent ? 4 : 3; }

    std::vector<std::string> box_labels() const {
        return variant == VariantKind::coherent
                   ? std::vector<std::string>{"1", "2", "3", "4"}
                   : std::vector<std::string>{"1", "2", "3"};
    }

    void validate() const {
        if (variant == VariantKind::coherent) {
            if (!(k_exp == 2 || (k_exp >= 3 && k_exp % 2 == 1)))
                throw ArgumentError("coherent model requires k_exp = 2 or odd k_exp >= 3");
            if (Omega <= 0.0) throw ArgumentError("Omega must be > 0");
            if (alpha0 <= 0.0) throw ArgumentError("alpha0 must be > 0");
            if (!opened.empty() && opened != std::set<std::string>{"1", "4"} &&
                opened != std::set<std::string>{"2", "4"})
                throw ArgumentError("coherent model: Bob opens {1,4} or {2,4}");
        } else {
            if (variant == VariantKind::mesoscopic && (N < 1 || kappa < 0.0 || g < 0.0))
                throw ArgumentError("mesoscopic model requires N >= 1, kappa >= 0, g >= 0");
            if (!opened.empty() && opened != std::set<std::string>{"1"} &&
                opened != std::set<std::string>{"2"})
                throw ArgumentError("three-box model: Bob opens {1} or {2}");
            if (variant == VariantKind::original && engine == Engine::dynamics)
                throw ArgumentError("the original variant has no dynamics engine");
        }
    }

    static std::set<std::string> opened_from_string(const std::string& bob) {
        if (bob == "none") return {};
        if (bob == "open1") return {"1"};
        if (bob == "open2") return {"2"};
        if (bob == "open14") return {"1", "4"};
        if (bob == "open24") return {"2", "4"};
        throw ArgumentError("unknown bob_action: " + bob);
    }

    std::string bob_string() const {
        if (opened.empty()) return "none";
        std::string s = "open";
        for (const auto& b : opened) s += b;
        return s;
    }

    static Scenario from_json(const nlohmann::json& j) {
        Scenario s;
        if (j.contains("variant")) s.variant = variant_kind_from_string(j.at("variant"));
        if (j.contains("engine")) s.engine = engine_from_string(j.at("engine"));
        if (j.contains("bob_action")) s.opened = opened_from_string(j.at("bob_action"));
        if (j.contains("N")) s.N = j.at("N").get<int>();
        if (j.contains("kappa")) s.kappa = j.at("kappa").get<double>();
        if (j.contains("g")) s.g = j.at("g").get<double>();
        if (j.contains("phi")) s.phi = j.at("phi").get<double>();
        if (j.contains("phi1")) s.phi1 = j.at("phi1").get<double>();
        if (j.contains("alpha0")) s.alpha0 = j.at("alpha0").get<double>();
        if (j.contains("k_exp")) s.k_exp = j.at("k_exp").get<int>();
        if (j.contains("Omega")) s.Omega = j.at("Omega").get<double>();
        s.validate();
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"variant", to_string(variant)}, {"engine", to_string(engine)},
                         {"bob_action", bob_string()}};
        if (variant == VariantKind::mesoscopic) {
            j["N"] = N;
            j["kappa"] = kappa;
            j["g"] = g;
            j["phi"] = phi;
            j["phi1"] = phi1;
        } else if (variant == VariantKind::coherent) {
            j["alpha0"] = alpha0;
            j["k_exp"] = k_exp;
            j["Omega"] = Omega;
        }
        return j;
    }
};

/// Event grammar: "<box>_<time>" for single boxes, "{a_t,b_t}" for sets.
inline std::string event(const std::string& box, int time_index) {
    return box + "_" + std::to_string(time_index);
}

inline std::string set_event(const std::set<std::string>& boxes, int time_index) {
    std::string s = "{";
    bool first = true;
    for (const auto& b : boxes) {
        if (!first) s += ",";
        s += event(b, time_index);
        first = false;
    }
    return s + "}";
}

/// Marginal, joint and conditional probabilities keyed by event labels.
class ProbabilityTable {
public:
    void set_marginal(const std::string& box, int time_index, double p) {
        marginals_[event(box, time_index)] = p;
    }
    void set_joint(const std::string& a, const std::string& b, double p) {
        joints_[{a, b}] = p;
    }
    void set_conditional(const std::string& a, const std::string& given, double p) {
        conditionals_[{a, given}] = p;
    }

    bool has_marginal(const std::string& ev) const { return marginals_.count(ev) > 0; }

    double marginal(const std::string& ev) const {
        auto it = marginals_.find(ev);
        if (it == marginals_.end()) throw TableError("missing marginal " + ev);
        return it->second;
    }
    double marginal(const std::string& box, int time_index) const {
        return marginal(event(box, time_index));
    }
    double joint(const std::string& a, const std::string& b) const {
        auto it = joints_.find({a, b});
        if (it == joints_.end()) throw TableError("missing joint (" + a + ", " + b + ")");
        return it->second;
    }
    double conditional(const std::string& a, const std::string& given) const {
        auto it = conditionals_.find({a, given});
        if (it == conditionals_.end())
            throw TableError("missing conditional (" + a + " | " + given + ")");
        return it->second;
    }

    const std::map<std::string, double>& marginals() const { return marginals_; }
    const std::map<std::pair<std::string, std::string>, double>& joints() const {
        return joints_;
    }
    const std::map<std::pair<std::string, std::string>, double>& conditionals() const {
        return conditionals_;
    }

    /// Box distribution (probability per box label) at a time index.
    std::vector<double> distribution(const std::vector<std::string>& labels,
                                     int time_index) const {
        std::vector<double> d;
        d.reserve(labels.size());
        for (const auto& b : labels) d.push_back(marginal(b, time_index));
        return d;
    }

    std::string to_csv() const {
        auto quote = [](const std::string& s) {
            return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
        };
        std::ostringstream out;
        out << "kind,event,conditioning,value\n";
        for (const auto& [ev, p] : marginals_)
            out << "marginal," << quote(ev) << ",," << fmt_real(p) << "\n";
        for (const auto& [ab, p] : joints_)
            out << "joint," << quote(ab.first) << "," << quote(ab.second) << "," << fmt_real(p)
                << "\n";
        for (const auto& [ab, p] : conditionals_)
            out << "conditional," << quote(ab.first) << "," << quote(ab.second) << ","
                << fmt_real(p) << "\n";
        return out.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["marginals"] = nlohmann::json::object();
        for (const auto& [ev, p] : marginals_) j["marginals"][ev] = p;
        j["joints"] = nlohmann::json::array();
        for (const auto& [ab, p] : joints_)
            j["joints"].push_back({{"event", ab.first}, {"and", ab.second}, {"value", p}});
        j["conditionals"] = nlohmann::json::array();
        for (const auto& [ab, p] : conditionals_)
            j["conditionals"].push_back({{"event", ab.first}, {"given", ab.second}, {"value", p}});
        return j;
    }

private:
    std::map<std::string, double> marginals_;
    std::map<std::pair<std::string, std::string>, double> joints_;
    std::map<std::pair<std::string, std::string>, double> conditionals_;
};

// ---------------------------------------------------------------------------
// Engine models.  Each exposes the same surface to the run pipeline:
// prepare(), distribution(), measure(), stage_count(), stage_apply().
// ---------------------------------------------------------------------------

/// Exact small-matrix engine for all variants.
class BoxModel {
public:
    using State = boxalgebra::BoxVector;

    explicit BoxModel(const Scenario& s) {
        using boxalgebra::Variant;
        Variant v;
        switch (s.variant) {
            case VariantKind::original: v = Variant::original; break;
            case VariantKind::mesoscopic: v = Variant::mesoscopic; break;
            default: v = s.k_exp == 2 ? Variant::coherent_k2 : Variant::coherent_k3; break;
        }
        set_ = boxalgebra::standard_unitaries(v, s.phi, s.phi1);
        basis_ = set_.at("U_i").basis();
        if (s.variant == VariantKind::coherent) {
            stages_ = {set_.at("U_f1"), set_.at("U_f2")};
        } else {
            stages_ = {set_.at("U_2f").dagger(), set_.at("U_1f").dagger()};
        }
    }

    State prepare() const {
        return boxalgebra::apply(set_.at("U_i"), State::box_state(basis_, "3"));
    }

    std::vector<double> distribution(const State& v) const { return v.distribution(); }

    Ensemble<State> measure(const State& v, const std::set<std::string>& opened) const {
        return boxalgebra::measure_boxes(v, opened);
    }

    int stage_count() const { return static_cast<int>(stages_.size()); }
    State stage_apply(int i, const State& v) const { return boxalgebra::apply(stages_[i], v); }

    const boxalgebra::UnitarySet& unitaries() const { return set_; }
    const boxalgebra::BoxBasis& basis() const { return basis_; }

private:
    boxalgebra::UnitarySet set_;
    boxalgebra::BoxBasis basis_ = boxalgebra::BoxBasis::three();
    std::vector<boxalgebra::BoxUnitary> stages_;
};

/// Full Fock dynamics of the number-state model: staged Josephson evolutions
/// with numerically calibrated interaction times.
class MesoDynamicsModel {
public:
    using State = fock::StateVector;

    explicit MesoDynamicsModel(const Scenario& s)
        : modes_{3, s.N, s.N},
          pair32_{s.kappa, s.g, 2, 1},
          pair21_{s.kappa, s.g, 1, 0},
          cal_(dynamics::calibrate_noon(modes_, pair32_, s.N)),
          prop32_(dynamics::build_josephson(fock::Basis(modes_), pair32_)),
          prop21_(dynamics::build_josephson(fock::Basis(modes_), pair21_)),
          boxes_{make_box(1, s.N), make_box(2, s.N), make_box(3, s.N)} {
        const double acos13 = std::acos(1.0 / std::numbers::sqrt3);
        t_1i_ = (2.0 * std::numbers::pi - acos13) / cal_.omega_N;
        t_2i_ = (7.0 * std::numbers::pi / 4.0) / cal_.omega_N;
        t_1f_ = (std::numbers::pi + acos13) / cal_.omega_N;
        t_2f_ = t_2i_;
    }

    State prepare() const { return prop21_.evolve(prop32_.evolve(boxes_[2], t_1i_), t_2i_); }

    std::vector<double> distribution(const State& v) const {
        std::vector<double> d(3);
        for (int k = 0; k < 3; ++k) d[k] = std::norm(boxes_[k].inner(v));
        return d;
    }

    Ensemble<State> measure(const State& v, const std::set<std::string>& opened) const {
        std::vector<fock::Projector> projs;
        for (const auto& label : opened)
            projs.push_back({label, {boxes_[label_index(label)]}});
        auto ens = fock::measure_projective(v, projs);
        for (auto& m : ens.members)
            if (m.label.rfind("not", 0) == 0) m.label = "none";
        return ens;
    }

    int stage_count() const { return 2; }
    State stage_apply(int i, const State& v) const {
        return i == 0 ? prop21_.evolve(v, -t_2f_) : prop32_.evolve(v, -t_1f_);
    }

    const dynamics::NoonCalibration& calibration() const { return cal_; }
    const std::array<State, 3>& box_states() const { return boxes_; }
    const fock::ModeSpec& modes() const { return modes_; }

    /// |3>, U_1i|3>, U_2i U_1i|3>.
    std::vector<State> preparation_sequence() const {
        std::vector<State> seq{boxes_[2]};
        seq.push_back(prop32_.evolve(seq.back(), t_1i_));
        seq.push_back(prop21_.evolve(seq.back(), t_2i_));
        return seq;
    }

    /// The postselected target (-|3> + e^{i phi1}(i|2> - |1>)) e^{i phi}/sqrt(3)
    /// carrying the emergent phases of this calibration, embedded in the
    /// box manifold.  Alice's staged inverse shuffle maps it back to |3>.
    State ideal_postselected_state() const {
        const auto [phi, phi1] = emergent_phases();
        const auto& basis = boxes_[0].basis();
        const int n = modes_.n_max;
        const fock::Complex i1(0.0, 1.0);
        const fock::Complex e = std::exp(i1 * phi), e1 = std::exp(i1 * phi1);
        fock::CVec amps = fock::CVec::Zero(basis.dim());
        amps[*basis.index_of({n, 0, 0})] = -e * e1 / std::numbers::sqrt3;
        amps[*basis.index_of({0, n, 0})] = i1 * e * e1 / std::numbers::sqrt3;
        amps[*basis.index_of({0, 0, n})] = -e / std::numbers::sqrt3;
        return State(basis, amps, /*renormalize=*/true);
    }

    /// Emergent stage phases of the realized unitaries:
    /// phi = arg sqrt(3) <3|U_1i|3>,  phi1 from <2|U_2i U_1i|3> = i e^{i(phi+phi1)}/sqrt(3).
    std::pair<double, double> emergent_phases() const {
        const State s1 = prop32_.evolve(boxes_[2], t_1i_);
        const double phi = std::arg(boxes_[2].inner(s1) * std::numbers::sqrt3);
        const State sup = prop21_.evolve(s1, t_2i_);
        const double phi1 =
            std::arg(boxes_[1].inner(sup) * fock::Complex(0.0, -1.0) * std::numbers::sqrt3) - phi;
        return {phi, phi1};
    }

private:
    static int label_index(const std::string& label) {
        if (label == "1") return 0;
        if (label == "2") return 1;
        if (label == "3") return 2;
        throw ArgumentError("unknown box label: " + label);
    }

    State make_box(int box, int n) const {
        std::vector<int> occ(3, 0);
        occ[box - 1] = n;
        return fock::number_state(modes_, occ);
    }

    fock::ModeSpec modes_;
    dynamics::JosephsonSpec pair32_, pair21_;
    dynamics::NoonCalibration cal_;
    dynamics::Propagator prop32_, prop21_;
    std::array<State, 3> boxes_;
    double t_1i_ = 0.0, t_2i_ = 0.0, t_1f_ = 0.0, t_2f_ = 0.0;
};

/// Full Fock dynamics of the coherent-state model.  Box states are the
/// exactly orthonormal boson-number-class states; the anharmonic propagator
/// acts on the untruncated-tail-free Fock vector.
class CoherentDynamicsModel {
public:
    using State = fock::StateVector;

    explicit CoherentDynamicsModel(const Scenario& s)
        : n_max_(fock::coherent_n_max(s.alpha0)),
          boxes_(catstates::orthonormal_box_states(s.alpha0, n_max_)),
          kerr_(dynamics::build_kerr(n_max_, dynamics::KerrSpec{0.0, s.Omega, s.k_exp})) {
        const double pi = std::numbers::pi;
        if (s.k_exp == 2) {
            t_prep_ = pi / (4.0 * s.Omega);
            t_f1_ = 7.0 * pi / (4.0 * s.Omega);
        } else {
            t_prep_ = pi / (2.0 * s.Omega);
            t_f1_ = 3.0 * pi / (2.0 * s.Omega);
        }
        t_f2_ = pi / s.Omega;
    }

    State prepare() const { return kerr_.evolve(boxes_[2], t_prep_); }

    std::vector<double> distribution(const State& v) const {
        std::vector<double> d(4);
        for (int k = 0; k < 4; ++k) d[k] = std::norm(boxes_[k].inner(v));
        return d;
    }

    Ensemble<State> measure(const State& v, const std::set<std::string>& opened) const {
        std::vector<fock::Projector> projs;
        for (const auto& label : opened) {
            const int idx = std::stoi(label) - 1;
            projs.push_back({label, {boxes_[idx]}});
        }
        auto ens = fock::measure_projective(v, projs);
        for (auto& m : ens.members)
            if (m.label.rfind("not", 0) == 0) m.label = "none";
        return ens;
    }

    int stage_count() const { return 2; }
    State stage_apply(int i, const State& v) const {
        return kerr_.evolve(v, i == 0 ? t_f1_ : t_f2_);
    }

    const std::array<State, 4>& box_states() const { return boxes_; }
    int n_max() const { return n_max_; }

private:
    int n_max_;
    std::array<State, 4> boxes_;
    dynamics::Propagator kerr_;
    double t_prep_ = 0.0, t_f1_ = 0.0, t_f2_ = 0.0;
};

namespace detail {

template <class Model>
ProbabilityTable run_pipeline(const Model& model, const Scenario& s) {
    const auto labels = s.box_labels();
    ProbabilityTable table;

    auto psi1 = model.prepare();
    {
        const auto d1 = model.distribution(psi1);
        for (size_t k = 0; k < labels.size(); ++k) table.set_marginal(labels[k], 1, d1[k]);
    }

    Ensemble<typename Model::State> branches;
    if (s.opened.empty())
        branches.members.push_back({1.0, "none", psi1});
    else
        branches = model.measure(psi1, s.opened);

    std::vector<double> d2(labels.size(), 0.0);
    for (const auto& b : branches.members) {
        const auto d = model.distribution(b.state);
        for (size_t k = 0; k < labels.size(); ++k) d2[k] += b.weight * d[k];
    }
    for (size_t k = 0; k < labels.size(); ++k) table.set_marginal(labels[k], 2, d2[k]);

    for (int stage = 0; stage < model.stage_count(); ++stage)
        for (auto& b : branches.members) b.state = model.stage_apply(stage, b.state);

    std::vector<double> d3(labels.size(), 0.0);
    std::map<std::string, double> branch_weight, branch_p3;
    for (const auto& b : branches.members) {
        const auto d = model.distribution(b.state);
        for (size_t k = 0; k < labels.size(); ++k) d3[k] += b.weight * d[k];
        branch_weight[b.label] = b.weight;
        branch_p3[b.label] = d[2];  // box "3"
    }
    for (size_t k = 0; k < labels.size(); ++k) table.set_marginal(labels[k], 3, d3[k]);

    const std::string ev33 = event("3", 3);
    const double p33 = d3[2];
    double joint_set = 0.0;
    for (const auto& box : s.opened) {
        const double w = branch_weight.count(box) ? branch_weight[box] : 0.0;
        const double p3 = branch_weight.count(box) ? branch_p3[box] : 0.0;
        const std::string ev = event(box, 2);
        table.set_joint(ev, ev33, w * p3);
        table.set_conditional(ev33, ev, p3);
        if (p33 > 0.0) table.set_conditional(ev, ev33, w * p3 / p33);
        joint_set += w * p3;
    }
    if (s.opened.size() > 1) {
        const std::string ev_set = set_event(s.opened, 2);
        table.set_joint(ev_set, ev33, joint_set);
        if (p33 > 0.0) table.set_conditional(ev_set, ev33, joint_set / p33);
    }
    return table;
}

struct StagedStates {
    // Box distribution per stage (0 = input state, then one entry per stage)
    std::vector<std::vector<double>> superposition;
    std::vector<std::vector<double>> mixture;
};

template <class Model>
StagedStates staged_compare_pipeline(const Model& model, const Scenario& s,
                                     const std::set<std::string>& mixture_measurement) {
    StagedStates out;
    auto sup = model.prepare();
    auto mix = model.measure(sup, mixture_measurement);

    auto mix_distribution = [&](const Ensemble<typename Model::State>& e) {
        std::vector<double> d(s.box_labels().size(), 0.0);
        for (const auto& m : e.members) {
            const auto dm = model.distribution(m.state);
            for (size_t k = 0; k < d.size(); ++k) d[k] += m.weight * dm[k];
        }
        return d;
    };

    out.superposition.push_back(model.distribution(sup));
    out.mixture.push_back(mix_distribution(mix));
    for (int stage = 0; stage < model.stage_count(); ++stage) {
        sup = model.stage_apply(stage, sup);
        for (auto& m : mix.members) m.state = model.stage_apply(stage, m.state);
        out.superposition.push_back(model.distribution(sup));
        out.mixture.push_back(mix_distribution(mix));
    }
    return out;
}

}  // namespace detail

/// Run the full protocol; exhaustive branch enumeration, no sampling.
inline ProbabilityTable run(const Scenario& s) {
    s.validate();
    if (s.engine == Engine::boxalgebra) return detail::run_pipeline(BoxModel(s), s);
    if (s.variant == VariantKind::mesoscopic)
        return detail::run_pipeline(MesoDynamicsModel(s), s);
    return detail::run_pipeline(CoherentDynamicsModel(s), s);
}

/// Does Bob's measurement change what Alice sees in Box 3?
struct DisturbanceReport {
    VariantKind variant = VariantKind::original;
    Engine engine = Engine::boxalgebra;
    double tolerance = 1e-12;
    std::map<std::string, double> p33;  // setting -> P(3_3)
    std::map<std::string, std::vector<double>> final_distribution;
    bool nondisturbing = false;       // P(3_3) equal across all settings incl. "none"
    bool setting_independent = false; // P(3_3) equal across Bob's measured settings

    nlohmann::json to_json() const {
        nlohmann::json j{{"variant", to_string(variant)},
                         {"engine", to_string(engine)},
                         {"tolerance", tolerance},
                         {"nondisturbing", nondisturbing},
                         {"setting_independent", setting_independent}};
        for (const auto& [k, v] : p33) j["p33"][k] = v;
        for (const auto& [k, v] : final_distribution) j["final_distribution"][k] = v;
        return j;
    }
};

inline DisturbanceReport disturbance_check(Scenario s) {
    s.validate();
    DisturbanceReport rep;
    rep.variant = s.variant;
    rep.engine = s.engine;
    rep.tolerance = s.engine == Engine::boxalgebra ? 1e-12 : 8e-3;

    std::vector<std::pair<std::string, std::set<std::string>>> settings;
    if (s.variant == VariantKind::coherent)
        settings = {{"none", {}}, {"B1B4", {"1", "4"}}, {"B2B4", {"2", "4"}}};
    else
        settings = {{"none", {}}, {"B1", {"1"}}, {"B2", {"2"}}};

    for (const auto& [name, opened] : settings) {
        Scenario variant_s = s;
        variant_s.opened = opened;
        const auto table = run(variant_s);
        rep.p33[name] = table.marginal("3", 3);
        rep.final_distribution[name] = table.distribution(s.box_labels(), 3);
    }

    auto equal = [&](double a, double b) { return std::abs(a - b) <= rep.tolerance; };
    const auto& keys = settings;
    rep.setting_independent = equal(rep.p33.at(keys[1].first), rep.p33.at(keys[2].first));
    rep.nondisturbing = rep.setting_independent &&
                        equal(rep.p33.at("none"), rep.p33.at(keys[1].first));
    return rep;
}

/// Staged shuffle comparison between the prepared superposition and the
/// post-measurement mixture that weak macroscopic realism pairs with it
/// (three-box: Bob opens Box 3; coherent: Bob opens Boxes 1 and 4).
struct StageCompareResult {
    std::vector<std::string> stage_labels;
    std::vector<std::string> box_labels;
    std::vector<std::vector<double>> superposition;  // [stage][box]
    std::vector<std::vector<double>> mixture;

    std::string to_csv() const {
        std::ostringstream out;
        out << "input,stage,box,probability\n";
        for (size_t st = 0; st < stage_labels.size(); ++st)
            for (size_t b = 0; b < box_labels.size(); ++b)
                out << "superposition," << stage_labels[st] << "," << box_labels[b] << ","
                    << fmt_real(superposition[st][b]) << "\n";
        for (size_t st = 0; st < stage_labels.size(); ++st)
            for (size_t b = 0; b < box_labels.size(); ++b)
                out << "mixture," << stage_labels[st] << "," << box_labels[b] << ","
                    << fmt_real(mixture[st][b]) << "\n";
        return out.str();
    }

    nlohmann::json to_json() const {
        return {{"stages", stage_labels},
                {"boxes", box_labels},
                {"superposition", superposition},
                {"mixture", mixture}};
    }
};

inline StageCompareResult stage_compare(const Scenario& s) {
    Scenario base = s;
    base.opened.clear();
    base.validate();
    StageCompareResult out;
    out.box_labels = s.box_labels();
    const std::set<std::string> mix_meas = s.variant == VariantKind::coherent
                                               ? std::set<std::string>{"1", "4"}
                                               : std::set<std::string>{"3"};
    detail::StagedStates staged;
    if (s.engine == Engine::boxalgebra)
        staged = detail::staged_compare_pipeline(BoxModel(base), base, mix_meas);
    else if (s.variant == VariantKind::mesoscopic)
        staged = detail::staged_compare_pipeline(MesoDynamicsModel(base), base, mix_meas);
    else
        staged = detail::staged_compare_pipeline(CoherentDynamicsModel(base), base, mix_meas);
    out.superposition = std::move(staged.superposition);
    out.mixture = std::move(staged.mixture);
    out.stage_labels = s.variant == VariantKind::coherent
                           ? std::vector<std::string>{"initial", "after_Uf1", "after_Uf2"}
                           : std::vector<std::string>{"initial", "after_U2f_inv",
                                                      "after_U1f_inv"};
    return out;
}

/// Merged table across Bob's settings, the input for the Leggett-Garg
/// statistics.  Combining entries from different settings is licensed by the
/// operational-nondisturbance property reported by disturbance_check.
inline ProbabilityTable lg_table(Scenario s) {
    s.validate();
    ProbabilityTable merged;
    const std::string ev33 = event("3", 3);
    if (s.variant == VariantKind::coherent) {
        Scenario s14 = s, s24 = s;
        s14.opened = {"1", "4"};
        s24.opened = {"2", "4"};
        const auto t14 = run(s14);
        const auto t24 = run(s24);
        merged.set_marginal("3", 3, 0.5 * (t14.marginal("3", 3) + t24.marginal("3", 3)));
        merged.set_marginal("3", 2, 0.5 * (t14.marginal("3", 2) + t24.marginal("3", 2)));
        merged.set_joint(set_event({"1", "4"}, 2), ev33,
                         t14.joint(set_event({"1", "4"}, 2), ev33));
        merged.set_joint(set_event({"2", "4"}, 2), ev33,
                         t24.joint(set_event({"2", "4"}, 2), ev33));
        merged.set_joint(event("4", 2), ev33, t14.joint(event("4", 2), ev33));
    } else {
        Scenario s1 = s, s2 = s;
        s1.opened = {"1"};
        s2.opened = {"2"};
        const auto t1 = run(s1);
        const auto t2 = run(s2);
        merged.set_marginal("3", 3, 0.5 * (t1.marginal("3", 3) + t2.marginal("3", 3)));
        merged.set_marginal("3", 2, 0.5 * (t1.marginal("3", 2) + t2.marginal("3", 2)));
        merged.set_joint(event("1", 2), ev33, t1.joint(event("1", 2), ev33));
        merged.set_joint(event("2", 2), ev33, t2.joint(event("2", 2), ev33));
    }
    return merged;
}

}  // namespace threebox::protocol
