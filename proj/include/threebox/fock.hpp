#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "threebox/ensemble.hpp"
#include "threebox/errors.hpp"
#include "threebox/format.hpp"

namespace threebox::fock {

using threebox::Ensemble;

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Truncated multimode bosonic mode layout.  When `sector` is set the basis
/// holds only occupation tuples whose total boson number equals it.
struct ModeSpec {
    int mode_count = 1;
    int n_max = 1;
    std::optional<int> sector;

    friend bool operator==(const ModeSpec& a, const ModeSpec& b) {
        return a.mode_count == b.mode_count && a.n_max == b.n_max && a.sector == b.sector;
    }
};

/// Enumerated occupation-tuple basis, ascending lexicographic order with the
/// leftmost mode most significant: for 3 modes in the N=2 sector the order is
/// (0,0,2), (0,1,1), (0,2,0), (1,0,1), (1,1,0), (2,0,0).
class Basis {
public:
    explicit Basis(ModeSpec spec) : spec_(spec) {
        if (spec.mode_count < 1) throw ArgumentError("mode_count must be >= 1");
        if (spec.n_max < 1) throw ArgumentError("n_max must be >= 1");
        if (spec.sector && (*spec.sector < 0 || *spec.sector > spec.mode_count * spec.n_max))
            throw SectorError("sector not representable with this truncation");
        std::vector<int> occ(spec.mode_count, 0);
        enumerate(occ, 0, spec.sector ? *spec.sector : -1);
        if (tuples_.empty()) throw SectorError("empty basis");
        for (int i = 0; i < static_cast<int>(tuples_.size()); ++i) index_[tuples_[i]] = i;
    }

    int dim() const { return static_cast<int>(tuples_.size()); }
    const ModeSpec& modes() const { return spec_; }
    const std::vector<int>& tuple(int i) const { return tuples_[i]; }

    std::optional<int> index_of(const std::vector<int>& occ) const {
        auto it = index_.find(occ);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Index of a tuple that must exist; throws otherwise.
    int index_checked(const std::vector<int>& occ) const {
        if (static_cast<int>(occ.size()) != spec_.mode_count)
            throw ArgumentError("occupation tuple has wrong mode count");
        for (int n : occ) {
            if (n < 0) throw ArgumentError("negative occupation");
            if (n > spec_.n_max) throw TruncationError("occupation exceeds n_max");
        }
        if (spec_.sector) {
            int total = 0;
            for (int n : occ) total += n;
            if (total != *spec_.sector) throw SectorError("tuple outside declared sector");
        }
        auto idx = index_of(occ);
        if (!idx) throw ArgumentError("tuple not in basis");
        return *idx;
    }

    friend bool operator==(const Basis& a, const Basis& b) { return a.spec_ == b.spec_; }
    friend bool operator!=(const Basis& a, const Basis& b) { return !(a == b); }

private:
    void enumerate(std::vector<int>& occ, int mode, int remaining) {
        if (mode == spec_.mode_count) {
            if (remaining <= 0) tuples_.push_back(occ);
            return;
        }
        const int hi = remaining >= 0 ? std::min(spec_.n_max, remaining) : spec_.n_max;
        for (int n = 0; n <= hi; ++n) {
            occ[mode] = n;
            enumerate(occ, mode + 1, remaining >= 0 ? remaining - n : -1);
        }
        occ[mode] = 0;
    }

    ModeSpec spec_;
    std::vector<std::vector<int>> tuples_;
    std::map<std::vector<int>, int> index_;
};

/// Pure state over a Basis.  Constructors normalize; unitary application
/// preserves the norm to the operator's unitarity defect.
class StateVector {
public:
    StateVector(Basis basis, CVec amplitudes, bool renormalize = true)
        : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
        if (amps_.size() != basis_.dim()) throw ArgumentError("amplitude size != basis dim");
        const double n = amps_.norm();
        if (renormalize) {
            if (n < 1e-14) throw ArgumentError("cannot normalize zero vector");
            amps_ /= n;
        } else if (std::abs(n - 1.0) > 1e-6) {
            throw ArgumentError("state vector is not normalized");
        }
    }

    const Basis& basis() const { return basis_; }
    const CVec& amplitudes() const { return amps_; }
    int dim() const { return basis_.dim(); }

    double norm() const { return amps_.norm(); }

    /// <this|other>
    Complex inner(const StateVector& other) const {
        if (basis_ != other.basis_) throw BasisError("inner product across different bases");
        return amps_.dot(other.amps_);
    }

    Complex amplitude(const std::vector<int>& occ) const {
        return amps_[basis_.index_checked(occ)];
    }

    double probability(const std::vector<int>& occ) const {
        return std::norm(amplitude(occ));
    }

    /// |<this|other>|^2
    double fidelity(const StateVector& other) const { return std::norm(inner(other)); }

    /// CSV rows `occupations,re,im`, occupations ';'-joined, basis order.
    std::string to_csv() const {
        std::ostringstream out;
        out << "occupations,re,im\n";
        for (int i = 0; i < basis_.dim(); ++i) {
            const auto& t = basis_.tuple(i);
            for (size_t m = 0; m < t.size(); ++m) out << (m ? ";" : "") << t[m];
            out << "," << fmt_real(amps_[i].real()) << "," << fmt_real(amps_[i].imag()) << "\n";
        }
        return out.str();
    }

private:
    Basis basis_;
    CVec amps_;
};

enum class OpKind { hermitian, unitary, general };

/// Dense operator over a Basis.  The declared kind is validated on
/// construction: hermitian defect <= 1e-10, unitarity defect <= 1e-9.
class Operator {
public:
    Operator(Basis basis, CMat matrix, OpKind kind)
        : basis_(std::move(basis)), m_(std::move(matrix)), kind_(kind) {
        if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim())
            throw ArgumentError("operator shape != basis dim");
        if (kind_ == OpKind::hermitian) {
            const double defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
            if (defect > 1e-10) throw KindError("hermitian defect above 1e-10");
        } else if (kind_ == OpKind::unitary) {
            if (unitarity_defect() > 1e-9) throw KindError("unitarity defect above 1e-9");
        }
    }

    static Operator identity(const Basis& basis) {
        return Operator(basis, CMat::Identity(basis.dim(), basis.dim()), OpKind::unitary);
    }

    const Basis& basis() const { return basis_; }
    const CMat& matrix() const { return m_; }
    OpKind kind() const { return kind_; }

    double unitarity_defect() const {
        return (m_.adjoint() * m_ - CMat::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
    }

    Operator dagger() const { return Operator(basis_, m_.adjoint(), kind_); }

    Operator compose(const Operator& rhs) const {  // this * rhs
        if (basis_ != rhs.basis_) throw BasisError("composing operators on different bases");
        OpKind k = (kind_ == OpKind::unitary && rhs.kind_ == OpKind::unitary) ? OpKind::unitary
                                                                              : OpKind::general;
        return Operator(basis_, m_ * rhs.m_, k);
    }

    StateVector apply(const StateVector& v) const {
        if (basis_ != v.basis()) throw BasisError("operator/state basis mismatch");
        return StateVector(basis_, m_ * v.amplitudes(), /*renormalize=*/false);
    }

    Ensemble<StateVector> apply(const Ensemble<StateVector>& e) const {
        Ensemble<StateVector> out;
        out.members.reserve(e.members.size());
        for (const auto& m : e.members) out.members.push_back({m.weight, m.label, apply(m.state)});
        return out;
    }

private:
    Basis basis_;
    CMat m_;
    OpKind kind_;
};

/// |occ> basis vector.
inline StateVector number_state(const ModeSpec& modes, const std::vector<int>& occupations) {
    Basis basis(modes);
    if (static_cast<int>(occupations.size()) != modes.mode_count)
        throw ArgumentError("occupation tuple has wrong mode count");
    for (int n : occupations) {
        if (n < 0) throw ArgumentError("negative occupation");
        if (n > modes.n_max) throw TruncationError("occupation exceeds n_max");
    }
    if (modes.sector) {
        int total = 0;
        for (int n : occupations) total += n;
        if (total != *modes.sector) throw SectorError("occupations do not sum to the sector");
    }
    CVec amps = CVec::Zero(basis.dim());
    amps[*basis.index_of(occupations)] = 1.0;
    return StateVector(std::move(basis), std::move(amps), /*renormalize=*/false);
}

/// n_max large enough for a coherent state of amplitude `alpha` to carry a
/// Poisson tail below ~1e-12.
inline int coherent_n_max(std::complex<double> alpha) {
    const double a = std::abs(alpha);
    return static_cast<int>(std::ceil(a * a + 8.0 * a + 10.0));
}

/// Truncated coherent state |alpha>, renormalized after truncation.
inline StateVector coherent_state(Complex alpha, int n_max) {
    const double a = std::abs(alpha);
    if (static_cast<double>(n_max) < a * a + 8.0 * a)
        throw TruncationError("n_max below |alpha|^2 + 8|alpha|");
    Basis basis(ModeSpec{1, n_max, std::nullopt});
    CVec amps(basis.dim());
    Complex c = std::exp(Complex(-0.5 * a * a, 0.0));
    for (int n = 0; n <= n_max; ++n) {
        amps[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return StateVector(std::move(basis), std::move(amps), /*renormalize=*/true);
}

/// Labeled orthonormal subspace for a projective measurement.
struct Projector {
    std::string label;
    std::vector<StateVector> subspace;
};

namespace detail {

inline void check_projectors(const std::vector<Projector>& projectors, const Basis& basis) {
    if (projectors.empty()) throw ArgumentError("empty projector list");
    std::vector<const StateVector*> all;
    for (const auto& p : projectors) {
        if (p.subspace.empty()) throw ArgumentError("projector with empty subspace");
        for (const auto& v : p.subspace) {
            if (v.basis() != basis) throw BasisError("projector basis mismatch");
            all.push_back(&v);
        }
    }
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i; j < all.size(); ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(std::abs(all[i]->inner(*all[j])) - expected) > 1e-9)
                throw ProjectorError("projector vectors are not orthonormal");
        }
}

}  // namespace detail

/// Ideal projective measurement.  The projector union need not be complete:
/// a final rest projector (label "not<labels>") is appended automatically.
/// Zero-probability outcomes are omitted.
inline Ensemble<StateVector> measure_projective(const StateVector& state,
                                                const std::vector<Projector>& projectors) {
    detail::check_projectors(projectors, state.basis());
    Ensemble<StateVector> out;
    CVec rest = state.amplitudes();
    std::string rest_label = "not";
    for (const auto& p : projectors) {
        rest_label += p.label;
        CVec proj = CVec::Zero(state.dim());
        for (const auto& b : p.subspace) proj += b.inner(state) * b.amplitudes();
        const double w = proj.squaredNorm();
        rest -= proj;
        if (w > 1e-14)
            out.members.push_back({w, p.label, StateVector(state.basis(), std::move(proj), true)});
    }
    const double w_rest = rest.squaredNorm();
    if (w_rest > 1e-14)
        out.members.push_back(
            {w_rest, rest_label, StateVector(state.basis(), std::move(rest), true)});
    out.validate();
    return out;
}

inline Ensemble<StateVector> measure_projective(const Ensemble<StateVector>& ens,
                                                const std::vector<Projector>& projectors) {
    Ensemble<StateVector> out;
    for (const auto& m : ens.members) {
        auto branches = measure_projective(m.state, projectors);
        for (auto& b : branches.members)
            out.members.push_back({m.weight * b.weight, b.label, std::move(b.state)});
    }
    out.validate();
    return out;
}

}  // namespace threebox::fock
