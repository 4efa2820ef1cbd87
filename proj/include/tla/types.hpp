// types.hpp — Core value types: bases, parameters, states, operators

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "tla/errors.hpp"

namespace tla {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cxd kI{0.0, 1.0};

// Default cap on dense Hilbert-space dimension (desk scale).
inline constexpr long kDefaultDimCap = 4096;

// Truncated Fock space {|0>, ..., |n_max>}.
struct FockBasis {
    int n_max = 1;

    explicit FockBasis(int n_max_) : n_max(n_max_) {
        if (n_max < 1) throw std::invalid_argument("FockBasis: n_max must be >= 1");
    }
    int dim() const { return n_max + 1; }
};

// Adequate cutoff for displacements up to |alpha|: coherent tail mass < 1e-10.
inline int required_n_max(double alpha_abs) {
    return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 10.0 * alpha_abs + 10.0));
}

// Physical parameters, all in units of angular frequency (hbar = 1).
struct ModelParams {
    double omega = 1.0;   // mode frequency
    double g = 0.0;       // mode-spin coupling
    double delta = 0.0;   // level splitting
    int n_atoms = 1;      // ensemble size N
    double j_coupling = 0.0;  // central-spin/bath coupling J
    double omega0 = 0.0;      // central-spin splitting
    std::vector<double> delta_x;  // per-site bath splittings (empty = zeros)
    std::vector<double> delta_z;

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0");
        if (g < 0.0) throw std::invalid_argument("ModelParams: g must be >= 0");
        if (n_atoms < 1) throw std::invalid_argument("ModelParams: n_atoms must be >= 1");
        if (j_coupling < 0.0) throw std::invalid_argument("ModelParams: j_coupling must be >= 0");
        const auto sized = [&](const std::vector<double>& v) {
            return v.empty() || v.size() == static_cast<std::size_t>(n_atoms);
        };
        if (!sized(delta_x) || !sized(delta_z))
            throw std::invalid_argument("ModelParams: per-site arrays must have length n_atoms");
    }
    double g_over_omega() const { return g / omega; }
    double delta_x_at(int i) const { return delta_x.empty() ? 0.0 : delta_x.at(i); }
    double delta_z_at(int i) const { return delta_z.empty() ? 0.0 : delta_z.at(i); }
};

// Tensor-factor layout of a state: Fock major, then spins (first spin most significant).
struct BasisInfo {
    int fock_dim = 1;   // 1 for spin-only spaces
    int n_spins = 0;

    long dim() const { return static_cast<long>(fock_dim) << n_spins; }
    bool operator==(const BasisInfo&) const = default;
};

// Normalized complex amplitude vector over a BasisInfo layout.
struct StateVector {
    Vector amps;
    BasisInfo basis;

    static StateVector make(Vector v, BasisInfo info) {
        if (v.size() != info.dim())
            throw BasisMismatchError("StateVector: amplitude length does not match basis");
        const double nrm = v.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw std::invalid_argument("StateVector: vector must be nonzero and finite");
        v /= nrm;
        return StateVector{std::move(v), info};
    }
    long dim() const { return basis.dim(); }
    double norm() const { return amps.norm(); }
};

// Dense operator with optional structure flags, validated at construction.
struct DenseOperator {
    Matrix mat;
    bool hermitian = false;
    bool unitary = false;

    static DenseOperator make(Matrix m) { return DenseOperator{std::move(m), false, false}; }

    static DenseOperator make_hermitian(Matrix m, double tol = 1e-12) {
        const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (dev >= tol)
            throw NotHermitianError("DenseOperator: max|M - M^dag| = " + std::to_string(dev));
        return DenseOperator{std::move(m), true, false};
    }

    static DenseOperator make_unitary(Matrix m, double tol = 1e-10) {
        const Matrix res = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
        const double dev = res.cwiseAbs().maxCoeff();
        if (dev >= tol)
            throw std::invalid_argument("DenseOperator: max|M^dag M - I| = " + std::to_string(dev));
        return DenseOperator{std::move(m), false, true};
    }

    long dim() const { return mat.rows(); }
};

// One su(2) block of an off-diagonal perturbation: coupling <m|V|n> with m > n.
struct Su2Term {
    int m = 1;
    int n = 0;
    cxd coupling{};
    double bohr_freq = 0.0;  // E~_m - E~_n
};

// Two-by-two reduced density matrix of the central spin (rows/cols: up, down).
struct ReducedDensity2x2 {
    Eigen::Matrix2cd rho;

    cxd up_up() const { return rho(0, 0); }
    cxd up_down() const { return rho(0, 1); }
    cxd down_up() const { return rho(1, 0); }
    cxd down_down() const { return rho(1, 1); }
    double trace() const { return rho.trace().real(); }
    double purity() const { return (rho * rho).trace().real(); }
};

} // namespace tla
