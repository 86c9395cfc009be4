#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "threebox/errors.hpp"
#include "threebox/fock.hpp"

namespace threebox::catstates {

using fock::Complex;
using fock::CVec;
using fock::StateVector;

// Box convention for the coherent-state model (k=3 labeling):
//   box 1 = |-i a0>,  box 2 = |i a0>,  box 3 = |a0>,  box 4 = |-a0>.
// Box b corresponds to the phase i^{j(b)} with j = {3, 1, 0, 2}.
inline constexpr std::array<int, 4> kBoxPhaseIndex = {3, 1, 0, 2};

inline Complex i_pow(int j) {
    switch (((j % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// Raw (truncated, normalized) coherent states of the four boxes.
inline std::array<StateVector, 4> coherent_box_states(double alpha0, int n_max) {
    const Complex a0(alpha0, 0.0);
    return {fock::coherent_state(Complex(0.0, -alpha0), n_max),
            fock::coherent_state(Complex(0.0, alpha0), n_max),
            fock::coherent_state(a0, n_max),
            fock::coherent_state(-a0, n_max)};
}

/// Exactly orthonormal box states built from the boson-number classes
/// n = m (mod 4) of |a0>.  The four classes are orthogonal for every a0, and
/// the anharmonic evolution at the protocol times is diagonal on them, so the
/// four-state shuffle algebra is exact in this basis.  As a0 grows each state
/// converges to the corresponding coherent state.
inline std::array<StateVector, 4> orthonormal_box_states(double alpha0, int n_max) {
    const StateVector ref = fock::coherent_state(Complex(alpha0, 0.0), n_max);
    std::array<CVec, 4> chi;
    for (int m = 0; m < 4; ++m) {
        CVec u = CVec::Zero(ref.dim());
        for (int n = m; n <= n_max; n += 4) u[n] = ref.amplitudes()[n];
        const double nu = u.norm();
        if (nu < 1e-12) throw TruncationError("empty number class; alpha0 too small");
        chi[m] = u / nu;
    }
    std::array<CVec, 4> e;
    for (int b = 0; b < 4; ++b) {
        e[b] = CVec::Zero(ref.dim());
        for (int m = 0; m < 4; ++m) e[b] += 0.5 * i_pow(kBoxPhaseIndex[b] * m) * chi[m];
    }
    return {StateVector(ref.basis(), e[0], false), StateVector(ref.basis(), e[1], false),
            StateVector(ref.basis(), e[2], false), StateVector(ref.basis(), e[3], false)};
}

/// Normalized superposition sum_b coeffs[b] |box_b> over the given box states.
template <class Array>
inline StateVector superpose(const Array& boxes, const std::array<Complex, 4>& coeffs) {
    CVec amps = CVec::Zero(boxes[0].dim());
    for (int b = 0; b < 4; ++b) amps += coeffs[b] * boxes[b].amplitudes();
    return StateVector(boxes[0].basis(), std::move(amps), /*renormalize=*/true);
}

/// The four-component superposition (|1> - |2> + |3> + |4>)/2 produced by the
/// k=3 evolution at t = pi/2W.
inline StateVector four_cat_sup(double alpha0, int n_max) {
    return superpose(coherent_box_states(alpha0, n_max), {0.5, -0.5, 0.5, 0.5});
}

/// Post-measurement mixture after opening boxes 1 and 4 on the superposition:
/// 1/4 |1><1| + 1/4 |4><4| + 1/4 (-|2>+|3>)(-<2|+<3|), built from raw
/// coherent states; weights renormalized by the finite-alpha0 trace.
inline Ensemble<StateVector> mix14_ensemble(double alpha0, int n_max) {
    auto boxes = coherent_box_states(alpha0, n_max);
    const double w_rest =
        0.25 * (boxes[2].amplitudes() - boxes[1].amplitudes()).squaredNorm();
    auto rest = superpose(boxes, {0.0, -0.5, 0.5, 0.0});
    const double total = 0.5 + w_rest;
    Ensemble<StateVector> ens{{{0.25 / total, "1", boxes[0]},
                               {0.25 / total, "4", boxes[3]},
                               {w_rest / total, "none", rest}}};
    ens.validate();
    return ens;
}

}  // namespace threebox::catstates
