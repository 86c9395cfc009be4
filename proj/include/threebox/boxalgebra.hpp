#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "threebox/ensemble.hpp"
#include "threebox/errors.hpp"
#include "threebox/format.hpp"

#include <nlohmann/json.hpp>

namespace threebox::boxalgebra {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// The exact small-dimensional model underneath both paradox variants: three
/// labeled boxes for the single-particle and number-state models, four for
/// the coherent-state model (where the four states are treated as an exact
/// orthonormal basis; finite-alpha corrections live in the Fock modules).
struct BoxBasis {
    int dimension = 3;
    std::vector<std::string> labels;

    static BoxBasis three() { return {3, {"1", "2", "3"}}; }
    static BoxBasis four() { return {4, {"1", "2", "3", "4"}}; }

    int index_of(const std::string& label) const {
        for (int i = 0; i < dimension; ++i)
            if (labels[i] == label) return i;
        throw ArgumentError("unknown box label: " + label);
    }

    friend bool operator==(const BoxBasis& a, const BoxBasis& b) {
        return a.dimension == b.dimension && a.labels == b.labels;
    }
    friend bool operator!=(const BoxBasis& a, const BoxBasis& b) { return !(a == b); }
};

class BoxVector {
public:
    BoxVector(BoxBasis basis, CVec amplitudes, bool renormalize = false)
        : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
        if (amps_.size() != basis_.dimension) throw ArgumentError("amplitude count != dimension");
        const double n = amps_.norm();
        if (renormalize) {
            if (n < 1e-14) throw ArgumentError("cannot normalize zero vector");
            amps_ /= n;
        } else if (std::abs(n - 1.0) > 1e-12) {
            throw ArgumentError("box vector not normalized to 1e-12");
        }
    }

    static BoxVector box_state(const BoxBasis& basis, const std::string& label) {
        CVec amps = CVec::Zero(basis.dimension);
        amps[basis.index_of(label)] = 1.0;
        return BoxVector(basis, std::move(amps));
    }

    const BoxBasis& basis() const { return basis_; }
    const CVec& amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }

    Complex amplitude(const std::string& label) const { return amps_[basis_.index_of(label)]; }
    double probability(const std::string& label) const { return std::norm(amplitude(label)); }

    Complex inner(const BoxVector& other) const {
        if (basis_ != other.basis_) throw BasisError("inner product across different box bases");
        return amps_.dot(other.amps_);
    }

    std::vector<double> distribution() const {
        std::vector<double> p(basis_.dimension);
        for (int i = 0; i < basis_.dimension; ++i) p[i] = std::norm(amps_[i]);
        return p;
    }

private:
    BoxBasis basis_;
    CVec amps_;
};

class BoxUnitary {
public:
    BoxUnitary(BoxBasis basis, CMat matrix, std::string provenance)
        : basis_(std::move(basis)), m_(std::move(matrix)), provenance_(std::move(provenance)) {
        if (m_.rows() != basis_.dimension || m_.cols() != basis_.dimension)
            throw ArgumentError("matrix shape != box dimension");
        const double defect =
            (m_.adjoint() * m_ - CMat::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (defect > 1e-12) throw KindError("box unitary defect above 1e-12");
    }

    const BoxBasis& basis() const { return basis_; }
    const CMat& matrix() const { return m_; }
    const std::string& provenance() const { return provenance_; }

    BoxUnitary dagger() const {
        return BoxUnitary(basis_, m_.adjoint(), provenance_ + " (inverse)");
    }

    BoxUnitary compose(const BoxUnitary& rhs, const std::string& provenance) const {
        if (basis_ != rhs.basis_) throw BasisError("composing unitaries on different box bases");
        return BoxUnitary(basis_, m_ * rhs.m_, provenance);
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < m_.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < m_.cols(); ++j)
                row.push_back({m_(i, j).real(), m_(i, j).imag()});
            rows.push_back(row);
        }
        return {{"provenance", provenance_}, {"labels", basis_.labels}, {"matrix", rows}};
    }

private:
    BoxBasis basis_;
    CMat m_;
    std::string provenance_;
};

inline BoxVector apply(const BoxUnitary& u, const BoxVector& v) {
    if (u.basis() != v.basis()) throw BasisError("unitary/vector box basis mismatch");
    return BoxVector(u.basis(), u.matrix() * v.amplitudes(), /*renormalize=*/true);
}

using BoxEnsemble = Ensemble<BoxVector>;

inline BoxEnsemble apply(const BoxUnitary& u, const BoxEnsemble& e) {
    BoxEnsemble out;
    out.members.reserve(e.members.size());
    for (const auto& m : e.members) out.members.push_back({m.weight, m.label, apply(u, m.state)});
    return out;
}

enum class Variant { original, mesoscopic, coherent_k3, coherent_k2 };

inline Variant variant_from_string(const std::string& s) {
    if (s == "original") return Variant::original;
    if (s == "mesoscopic") return Variant::mesoscopic;
    if (s == "coherent_k3") return Variant::coherent_k3;
    if (s == "coherent_k2") return Variant::coherent_k2;
    throw VariantError("unknown variant: " + s);
}

using UnitarySet = std::map<std::string, BoxUnitary>;

namespace detail {

inline CMat mat3(std::initializer_list<Complex> entries, double scale) {
    CMat m(3, 3);
    int i = 0;
    for (Complex e : entries) {
        m(i / 3, i % 3) = e * scale;
        ++i;
    }
    return m;
}

inline CMat mat4(std::initializer_list<Complex> entries, double scale) {
    CMat m(4, 4);
    int i = 0;
    for (Complex e : entries) {
        m(i / 4, i % 4) = e * scale;
        ++i;
    }
    return m;
}

}  // namespace detail

/// The named shuffle set of a variant.  Factorizations hold exactly:
///   three-box:  U_i = U_2i U_1i,  U_f^-1 = U_2f U_1f,  U_f = U_1f^-1 U_2f^-1
///   coherent:   U_f = U_f2 U_f1,  U_f1 = U_i^-1
/// The mesoscopic set carries the emergent stage phases (phi, phi1); every
/// occupation probability downstream is independent of them.
inline UnitarySet standard_unitaries(Variant variant, double phi = 0.0, double phi1 = 0.0) {
    using detail::mat3;
    using detail::mat4;
    const double r2 = std::numbers::sqrt2;
    const double r3 = std::numbers::sqrt3;
    UnitarySet set;
    switch (variant) {
        case Variant::original: {
            BoxBasis basis = BoxBasis::three();
            // Stage matrices; the (2,2)-block signs are fixed by unitarity
            // together with the stated action on |3>.
            BoxUnitary u1i(basis, mat3({r3, 0, 0, 0, -1, r2, 0, r2, 1}, 1.0 / r3),
                           "preparation stage 1: |3> -> sqrt(2/3)|2> + sqrt(1/3)|3>");
            BoxUnitary u2i(basis, mat3({-1, 1, 0, 1, 1, 0, 0, 0, r2}, 1.0 / r2),
                           "preparation stage 2: |2> -> (|1>+|2>)/sqrt(2)");
            BoxUnitary u1f(basis, mat3({r3, 0, 0, 0, 1, r2, 0, r2, -1}, 1.0 / r3),
                           "postselection stage 1: |3> -> sqrt(2/3)|2> - sqrt(1/3)|3>");
            BoxUnitary u2f = u2i;
            BoxUnitary ui = u2i.compose(u1i, "preparation shuffle U_i = U_2i U_1i");
            BoxUnitary uf_inv = u2f.compose(u1f, "inverse final shuffle U_f^-1 = U_2f U_1f");
            BoxUnitary uf(basis, uf_inv.matrix().adjoint(), "final shuffle U_f");
            set.insert({{"U_1i", u1i},
                        {"U_2i", u2i},
                        {"U_i", ui},
                        {"U_1f", u1f},
                        {"U_2f", u2f},
                        {"U_f", uf}});
            break;
        }
        case Variant::mesoscopic: {
            BoxBasis basis = BoxBasis::three();
            const Complex i1(0.0, 1.0);
            const Complex ep = std::exp(i1 * phi);
            const Complex ep1 = std::exp(i1 * phi1);
            BoxUnitary u1i(basis,
                           mat3({r3, 0, 0, 0, -i1 * ep, i1 * ep * r2, 0, ep * r2, ep}, 1.0 / r3),
                           "number-state preparation stage 1 (modes 3,2; theta in (3pi/2,2pi))");
            BoxUnitary u2i(basis,
                           mat3({-i1 * ep1, i1 * ep1, 0, ep1, ep1, 0, 0, 0, r2}, 1.0 / r2),
                           "number-state preparation stage 2 (modes 2,1; theta = 7pi/4)");
            BoxUnitary u1f(basis,
                           mat3({r3, 0, 0, 0, -i1 * ep, i1 * ep * r2, 0, -ep * r2, -ep}, 1.0 / r3),
                           "number-state postselection stage 1 (modes 3,2)");
            BoxUnitary u2f = u2i;
            BoxUnitary ui = u2i.compose(u1i, "number-state preparation shuffle U_i = U_2i U_1i");
            BoxUnitary uf_inv = u2f.compose(u1f, "inverse final shuffle U_f^-1 = U_2f U_1f");
            BoxUnitary uf(basis, uf_inv.matrix().adjoint(), "number-state final shuffle U_f");
            set.insert({{"U_1i", u1i},
                        {"U_2i", u2i},
                        {"U_i", ui},
                        {"U_1f", u1f},
                        {"U_2f", u2f},
                        {"U_f", uf}});
            break;
        }
        case Variant::coherent_k3: {
            BoxBasis basis = BoxBasis::four();
            BoxUnitary ui(basis,
                          mat4({1, 1, 1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, -1, 1, 1}, 0.5),
                          "anharmonic evolution for t = pi/2W (k=3) on the four-state basis");
            BoxUnitary uf2(basis,
                           mat4({0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}, 1.0),
                           "half-period evolution t = pi/W: |a> -> |-a> (box swap 1<->2, 3<->4)");
            BoxUnitary uf1(basis, ui.matrix().adjoint(),
                           "anharmonic evolution for t = 3pi/2W (k=3), inverse of U_i");
            BoxUnitary uf = uf2.compose(uf1, "final shuffle U_f = U_f2 U_f1");
            set.insert({{"U_i", ui}, {"U_f1", uf1}, {"U_f2", uf2}, {"U_f", uf}});
            break;
        }
        case Variant::coherent_k2: {
            BoxBasis basis = BoxBasis::four();
            // Basis labels carry fixed phases: |3> = e^{-i pi/4}|a0>,
            // |4> = e^{-i pi/4}|-a0>.
            const Complex em = std::exp(Complex(0.0, -std::numbers::pi / 4.0));
            const Complex epq = std::exp(Complex(0.0, std::numbers::pi / 4.0));
            CMat ui_m(4, 4);
            ui_m.col(0) << em, -em, epq, epq;
            ui_m.col(1) << -em, em, epq, epq;
            ui_m.col(2) << em, em, em, -em;
            ui_m.col(3) << em, em, -em, em;
            ui_m *= 0.5;
            BoxUnitary ui(basis, ui_m,
                          "anharmonic evolution for t = pi/4W (k=2) on the four-state basis");
            BoxUnitary uf2(basis,
                           mat4({0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}, 1.0),
                           "half-period evolution t = pi/W: |a> -> |-a> (box swap 1<->2, 3<->4)");
            BoxUnitary uf1(basis, ui.matrix().adjoint(),
                           "anharmonic evolution for t = 7pi/4W (k=2), inverse of U_i");
            BoxUnitary uf = uf2.compose(uf1, "final shuffle U_f = U_f2 U_f1");
            set.insert({{"U_i", ui}, {"U_f1", uf1}, {"U_f2", uf2}, {"U_f", uf}});
            break;
        }
        default:
            throw VariantError("unknown variant");
    }
    return set;
}

/// Bob opens the given boxes: one branch per opened box with its Born weight,
/// plus a "none" branch carrying the renormalized complement.  Branches with
/// zero weight are omitted.
inline BoxEnsemble measure_boxes(const BoxVector& v, const std::set<std::string>& opened) {
    if (opened.empty()) throw ArgumentError("no boxes opened");
    BoxEnsemble out;
    CVec rest = v.amplitudes();
    for (const auto& label : opened) {
        const int idx = v.basis().index_of(label);
        const double w = std::norm(rest[idx]);
        if (w > 1e-14) {
            CVec amp = CVec::Zero(v.basis().dimension);
            amp[idx] = 1.0;
            out.members.push_back({w, label, BoxVector(v.basis(), std::move(amp))});
        }
        rest[idx] = 0.0;
    }
    const double w_rest = rest.squaredNorm();
    if (w_rest > 1e-14)
        out.members.push_back({w_rest, "none", BoxVector(v.basis(), std::move(rest), true)});
    out.validate();
    return out;
}

inline BoxEnsemble measure_boxes(const BoxEnsemble& e, const std::set<std::string>& opened) {
    BoxEnsemble out;
    for (const auto& m : e.members) {
        auto branches = measure_boxes(m.state, opened);
        for (auto& b : branches.members)
            out.members.push_back({m.weight * b.weight, b.label, std::move(b.state)});
    }
    out.validate();
    return out;
}

}  // namespace threebox::boxalgebra
