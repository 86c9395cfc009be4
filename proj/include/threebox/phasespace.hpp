#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "threebox/ensemble.hpp"
#include "threebox/errors.hpp"
#include "threebox/fock.hpp"
#include "threebox/format.hpp"

namespace threebox::phasespace {

using fock::Complex;
using fock::StateVector;

/// Rectangular (x, p) grid, alpha = x + i p, endpoints inclusive.
struct PhaseGrid {
    double x_min = -8.0, x_max = 8.0;
    double p_min = -8.0, p_max = 8.0;
    int resolution = 201;

    void validate() const {
        if (resolution < 2) throw ArgumentError("grid resolution must be >= 2");
        if (!(x_max > x_min) || !(p_max > p_min)) throw ArgumentError("degenerate grid range");
    }

    double x(int i) const { return x_min + (x_max - x_min) * i / (resolution - 1); }
    double p(int j) const { return p_min + (p_max - p_min) * j / (resolution - 1); }
    double cell_area() const {
        return (x_max - x_min) / (resolution - 1) * (p_max - p_min) / (resolution - 1);
    }

    friend bool operator==(const PhaseGrid& a, const PhaseGrid& b) {
        return a.x_min == b.x_min && a.x_max == b.x_max && a.p_min == b.p_min &&
               a.p_max == b.p_max && a.resolution == b.resolution;
    }
};

/// Grid covering all four box states with a 5-unit margin.
inline PhaseGrid default_grid(double alpha0, int resolution = 201) {
    const double r = alpha0 + 5.0;
    return PhaseGrid{-r, r, -r, r, resolution};
}

struct QGrid {
    PhaseGrid grid;
    Eigen::MatrixXd values;  // values(i, j) = Q(x_i, p_j)
    double alpha0 = 0.0;

    /// Riemann integral of Q over the grid (== 1 on a covering grid).
    double integral() const { return values.sum() * grid.cell_area(); }

    std::string to_csv() const {
        std::ostringstream out;
        out << "x,p,q\n";
        for (int i = 0; i < grid.resolution; ++i)
            for (int j = 0; j < grid.resolution; ++j)
                out << fmt_real(grid.x(i)) << "," << fmt_real(grid.p(j)) << ","
                    << fmt_real(values(i, j)) << "\n";
        return out.str();
    }
};

/// Q(alpha) = |<alpha|psi>|^2 / pi at a single phase-space point.
inline double qvalue(const StateVector& state, double x, double p) {
    if (state.basis().modes().mode_count != 1)
        throw ModeError("Q function requires a single-mode state");
    const Complex abar(x, -p);
    Complex sum = 0.0;
    Complex t = 1.0;  // abar^n / sqrt(n!)
    const auto& amps = state.amplitudes();
    for (int n = 0; n < amps.size(); ++n) {
        sum += t * amps[n];
        t *= abar / std::sqrt(static_cast<double>(n + 1));
    }
    const double mod2 = std::norm(sum) * std::exp(-(x * x + p * p));
    return mod2 / std::numbers::pi;
}

inline QGrid qfunction(const StateVector& state, const PhaseGrid& grid) {
    grid.validate();
    if (state.basis().modes().mode_count != 1)
        throw ModeError("Q function requires a single-mode state");
    QGrid q{grid, Eigen::MatrixXd(grid.resolution, grid.resolution), 0.0};
    for (int i = 0; i < grid.resolution; ++i)
        for (int j = 0; j < grid.resolution; ++j)
            q.values(i, j) = qvalue(state, grid.x(i), grid.p(j));
    return q;
}

/// Member-wise weighted sum; mixtures never materialize a density matrix.
inline QGrid qfunction(const Ensemble<StateVector>& ensemble, const PhaseGrid& grid) {
    grid.validate();
    if (ensemble.members.empty()) throw ArgumentError("empty ensemble");
    QGrid q{grid, Eigen::MatrixXd::Zero(grid.resolution, grid.resolution), 0.0};
    for (const auto& m : ensemble.members) q.values += m.weight * qfunction(m.state, grid).values;
    return q;
}

/// Sup-norm of the pointwise difference.
inline double q_distance(const QGrid& a, const QGrid& b) {
    if (!(a.grid == b.grid)) throw GridError("Q grids live on different phase grids");
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

/// Interior local maxima (strictly above all 8 neighbours) at or above
/// rel_threshold * max.
inline std::vector<std::pair<int, int>> local_maxima(const QGrid& q, double rel_threshold) {
    std::vector<std::pair<int, int>> out;
    const double cutoff = rel_threshold * q.values.maxCoeff();
    for (int i = 1; i + 1 < q.grid.resolution; ++i)
        for (int j = 1; j + 1 < q.grid.resolution; ++j) {
            const double v = q.values(i, j);
            if (v < cutoff) continue;
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (q.values(i + di, j + dj) >= v) {
                        peak = false;
                        break;
                    }
                }
            if (peak) out.emplace_back(i, j);
        }
    return out;
}

/// Closed forms of the four-component superposition's Q and of the
/// post-measurement mixture's Q (boxes 1 and 4 opened), for structural
/// comparison against the direct evaluation.  The bracketed expressions are
/// the printed ones; the prefactor is e^{-(|alpha|^2+a0^2)}/(2 pi), which
/// makes both forms agree with the direct evaluation of Q(alpha).
inline std::pair<QGrid, QGrid> analytic_q_forms(double alpha0, const PhaseGrid& grid) {
    grid.validate();
    QGrid q_sup{grid, Eigen::MatrixXd(grid.resolution, grid.resolution), alpha0};
    QGrid q_mix{grid, Eigen::MatrixXd(grid.resolution, grid.resolution), alpha0};
    for (int i = 0; i < grid.resolution; ++i)
        for (int j = 0; j < grid.resolution; ++j) {
            const double x = grid.x(i), p = grid.p(j);
            const double u = x * alpha0, v = p * alpha0;
            const double pre = std::exp(-(x * x + p * p + alpha0 * alpha0)) /
                               (2.0 * std::numbers::pi);
            q_sup.values(i, j) =
                pre * (2.0 * std::cos(u - v) * std::sinh(u - v) -
                       2.0 * std::cos(u + v) * std::sinh(u + v) + std::cosh(2.0 * u) +
                       std::cosh(2.0 * v) + std::cos(2.0 * v) - std::cos(2.0 * u));
            q_mix.values(i, j) =
                pre * (std::cosh(2.0 * u) + std::cosh(2.0 * v) -
                       std::exp(u + v) * std::cos(u + v));
        }
    return {q_sup, q_mix};
}

}  // namespace threebox::phasespace
