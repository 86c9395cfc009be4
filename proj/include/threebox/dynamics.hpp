#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "threebox/errors.hpp"
#include "threebox/fock.hpp"

namespace threebox::dynamics {

using fock::Basis;
using fock::Complex;
using fock::CMat;
using fock::CVec;
using fock::ModeSpec;
using fock::Operator;
using fock::OpKind;
using fock::StateVector;

/// Two-mode exchange coupling with on-site two-body interaction:
///   H = kappa (a_k^+ a_l + a_k a_l^+) + g a_k^+2 a_k^2 + g a_l^+2 a_l^2.
struct JosephsonSpec {
    double kappa = 1.0;
    double g = 0.0;
    int mode_k = 0;  // zero-based mode indices
    int mode_l = 1;
};

/// Single-mode anharmonic oscillator H = omega n + Omega n^k.
struct KerrSpec {
    double omega = 0.0;
    double Omega = 1.0;
    int k_exp = 2;
};

struct NoonCalibration {
    double omega_N = 0.0;        // effective two-level frequency, P_N(t) ~ cos^2(omega_N t)
    double T_noon = 0.0;         // time for theta = pi/4
    double fidelity = 0.0;       // overlap with (|N,0> - i|0,N>)/sqrt(2) at T_noon
    double fit_residual = 0.0;   // rms of P_N - cos^2 over the fitted period
    double min_box_population = 0.0;  // min of P_N + P_0 over the fitted period
};

inline Operator build_josephson(const Basis& basis, const JosephsonSpec& spec) {
    if (spec.kappa < 0.0 || spec.g < 0.0) throw ArgumentError("kappa and g must be >= 0");
    const ModeSpec& modes = basis.modes();
    const int k = spec.mode_k, l = spec.mode_l;
    if (k == l || k < 0 || l < 0 || k >= modes.mode_count || l >= modes.mode_count)
        throw ModeIndexError("mode pair must be two distinct modes of the basis");
    CMat m = CMat::Zero(basis.dim(), basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
        const auto& t = basis.tuple(i);
        const double nk = t[k], nl = t[l];
        m(i, i) += spec.g * (nk * (nk - 1.0) + nl * (nl - 1.0));
        // a_k^+ a_l and, via the mirrored entry, a_k a_l^+
        if (t[l] >= 1 && t[k] + 1 <= modes.n_max) {
            std::vector<int> u = t;
            u[k] += 1;
            u[l] -= 1;
            if (auto j = basis.index_of(u)) {
                const double amp = spec.kappa * std::sqrt((nk + 1.0) * nl);
                m(*j, i) += amp;
                m(i, *j) += amp;
            }
        }
    }
    return Operator(basis, std::move(m), OpKind::hermitian);
}

inline Operator build_josephson(const ModeSpec& modes, const JosephsonSpec& spec) {
    return build_josephson(Basis(modes), spec);
}

inline Operator build_kerr(int n_max, const KerrSpec& spec) {
    if (n_max < 1) throw ArgumentError("n_max must be >= 1");
    if (spec.Omega <= 0.0) throw ArgumentError("Omega must be > 0");
    if (spec.k_exp < 2) throw ArgumentError("k_exp must be >= 2");
    Basis basis(ModeSpec{1, n_max, std::nullopt});
    CMat m = CMat::Zero(basis.dim(), basis.dim());
    for (int n = 0; n <= n_max; ++n) {
        double nk = 1.0;
        for (int p = 0; p < spec.k_exp; ++p) nk *= n;
        m(n, n) = spec.omega * n + spec.Omega * nk;
    }
    return Operator(basis, std::move(m), OpKind::hermitian);
}

/// Spectral-decomposition propagator cache: U(t) = V exp(-i Lambda t) V^+.
/// A structurally diagonal H (all off-diagonal entries exactly zero, e.g. the
/// Kerr Hamiltonian) short-circuits to exact diagonal phases, so populations
/// under it are exactly time-invariant.
class Propagator {
public:
    explicit Propagator(const Operator& h) : basis_(h.basis()) {
        if (h.kind() != OpKind::hermitian)
            throw KindError("propagator requires a hermitian operator");
        const CMat& m = h.matrix();
        diagonal_ = true;
        for (int i = 0; i < m.rows() && diagonal_; ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (i != j && m(i, j) != Complex(0.0, 0.0)) {
                    diagonal_ = false;
                    break;
                }
        if (diagonal_) {
            evals_ = m.diagonal().real();
        } else {
            Eigen::SelfAdjointEigenSolver<CMat> solver(m);
            if (solver.info() != Eigen::Success) throw KindError("eigendecomposition failed");
            evals_ = solver.eigenvalues();
            evecs_ = solver.eigenvectors();
        }
    }

    const Basis& basis() const { return basis_; }

    CVec phases(double t) const {
        CVec ph(evals_.size());
        for (int i = 0; i < evals_.size(); ++i)
            ph[i] = std::exp(Complex(0.0, -evals_[i] * t));
        return ph;
    }

    Operator at(double t) const {
        const CVec ph = phases(t);
        if (diagonal_) return Operator(basis_, CMat(ph.asDiagonal()), OpKind::unitary);
        CMat u = evecs_ * ph.asDiagonal() * evecs_.adjoint();
        return Operator(basis_, std::move(u), OpKind::unitary);
    }

    StateVector evolve(const StateVector& v, double t) const {
        if (v.basis() != basis_) throw BasisError("propagator/state basis mismatch");
        const CVec ph = phases(t);
        if (diagonal_)
            return StateVector(basis_, ph.cwiseProduct(v.amplitudes()), /*renormalize=*/false);
        CVec coeff = evecs_.adjoint() * v.amplitudes();
        return StateVector(basis_, evecs_ * ph.cwiseProduct(coeff), /*renormalize=*/false);
    }

    const Eigen::VectorXd& eigenvalues() const { return evals_; }

private:
    Basis basis_;
    bool diagonal_ = false;
    Eigen::VectorXd evals_;
    CMat evecs_;
};

inline Operator propagator(const Operator& h, double t) { return Propagator(h).at(t); }

/// Fit P_N(t) ~ cos^2(omega_N t) for the initial state |N>_k |0>_l.  The seed
/// frequency comes from the spectral doublet overlapping |N,0>; the fit then
/// minimizes the least-squares error over 2000 samples of one full period.
inline NoonCalibration calibrate_noon(const ModeSpec& modes, const JosephsonSpec& spec, int N) {
    if (N < 1) throw ArgumentError("N must be >= 1");
    if (modes.sector && *modes.sector != N) throw SectorError("mode sector does not match N");
    if (modes.n_max < N) throw TruncationError("n_max below N");
    Basis basis(modes);
    std::vector<int> occ_n0(modes.mode_count, 0), occ_0n(modes.mode_count, 0);
    occ_n0[spec.mode_k] = N;
    occ_0n[spec.mode_l] = N;
    const StateVector psi0 = fock::number_state(modes, occ_n0);
    const StateVector psiN = fock::number_state(modes, occ_0n);

    const Operator h = build_josephson(basis, spec);
    Eigen::SelfAdjointEigenSolver<CMat> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw KindError("eigendecomposition failed");
    const Eigen::VectorXd evals = solver.eigenvalues();
    const CMat evecs = solver.eigenvectors();

    // Doublet: the two eigenstates with the largest |<N,0|v>|^2.
    const int i0 = *basis.index_of(occ_n0);
    int best = -1, second = -1;
    for (int j = 0; j < basis.dim(); ++j) {
        const double w = std::norm(evecs(i0, j));
        if (best < 0 || w > std::norm(evecs(i0, best))) {
            second = best;
            best = j;
        } else if (second < 0 || w > std::norm(evecs(i0, second))) {
            second = j;
        }
    }
    const double omega_seed = std::abs(evals[best] - evals[second]) / 2.0;
    const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
    if (omega_seed < 1e-12 * scale)
        throw CalibrationError("no two-level oscillation (degenerate doublet)");

    // One full cos^2 period, 2000 samples.
    const int samples = 2000;
    const double period = std::numbers::pi / omega_seed;
    Propagator prop(h);
    std::vector<double> ts(samples), pn(samples), p0(samples);
    double min_pop = 1.0;
    for (int i = 0; i < samples; ++i) {
        ts[i] = period * i / (samples - 1);
        const StateVector psi = prop.evolve(psi0, ts[i]);
        pn[i] = std::norm(psi.inner(psi0));
        p0[i] = std::norm(psi.inner(psiN));
        min_pop = std::min(min_pop, pn[i] + p0[i]);
    }

    auto sse = [&](double w) {
        double acc = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double c = std::cos(w * ts[i]);
            const double d = pn[i] - c * c;
            acc += d * d;
        }
        return acc;
    };
    // Golden-section search around the spectral seed.
    double lo = 0.5 * omega_seed, hi = 1.5 * omega_seed;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = sse(a), fb = sse(b);
    for (int it = 0; it < 200; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = sse(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = sse(b);
        }
    }
    const double omega_fit = (a + b) / 2.0;

    NoonCalibration cal;
    cal.omega_N = omega_fit;
    cal.T_noon = (std::numbers::pi / 4.0) / omega_fit;
    cal.fit_residual = std::sqrt(sse(omega_fit) / samples);
    cal.min_box_population = min_pop;
    if (cal.fit_residual > 0.05)
        throw CalibrationError("cos^2 fit residual above 0.05; not in the beam-splitter regime");

    const StateVector at_noon = prop.evolve(psi0, cal.T_noon);
    const Complex target_overlap =
        (psi0.inner(at_noon) + Complex(0.0, 1.0) * psiN.inner(at_noon)) / std::sqrt(2.0);
    cal.fidelity = std::norm(target_overlap);
    return cal;
}

/// Propagator at scaled time theta = omega_N t for the given pair coupling.
/// Restricted to span{|N,0>, |0,N>} it realises the two-level rotation up to
/// the emergent phases.
inline Operator timed_box_unitary(double theta, const ModeSpec& modes, const JosephsonSpec& spec,
                                  const NoonCalibration& cal) {
    if (cal.omega_N <= 0.0) throw CalibrationError("calibration has no positive omega_N");
    return propagator(build_josephson(modes, spec), theta / cal.omega_N);
}

/// Population outside the given orthonormal set: 1 - sum |<allowed_i|state>|^2.
inline double leakage(const StateVector& state, const std::vector<StateVector>& allowed) {
    if (allowed.empty()) throw ArgumentError("empty allowed set");
    for (size_t i = 0; i < allowed.size(); ++i)
        for (size_t j = i; j < allowed.size(); ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(std::abs(allowed[i].inner(allowed[j])) - expected) > 1e-9)
                throw ProjectorError("allowed states are not orthonormal");
        }
    double inside = 0.0;
    for (const auto& a : allowed) inside += std::norm(a.inner(state));
    return std::clamp(1.0 - inside, 0.0, 1.0);
}

}  // namespace threebox::dynamics
