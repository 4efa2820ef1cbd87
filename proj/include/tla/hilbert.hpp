// hilbert.hpp — Truncated Fock/spin spaces, ladder and displacement operators,
// model Hamiltonians, su(2) decomposition

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>
#include <vector>

#include "tla/errors.hpp"
#include "tla/types.hpp"

namespace tla::hilbert {

// --------------------------- spin-1/2 building blocks ------------------------
// Convention: basis (|up>, |down>), sigma_3 |up> = +|up>.

inline Matrix sigma_1() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix sigma_2() {
    Matrix m(2, 2);
    m << 0, cxd(0, -1), cxd(0, 1), 0;
    return m;
}

inline Matrix sigma_3() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// sigma_1 eigenstate |lambda> = (|up> + lambda |down>)/sqrt(2), lambda = +-1.
inline Eigen::Vector2cd sigma1_eigenstate(int lambda) {
    if (lambda != 1 && lambda != -1)
        throw std::invalid_argument("sigma1_eigenstate: lambda must be +-1");
    Eigen::Vector2cd v;
    v << 1.0 / std::sqrt(2.0), lambda / std::sqrt(2.0);
    return v;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// Operator acting as `op` on spin site `site` of `n_spins` (site 0 most significant).
inline Matrix spin_site_operator(int n_spins, int site, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n_spins; ++i)
        out = kron(out, i == site ? op : Matrix::Identity(2, 2));
    return out;
}

// --------------------------- mode operators ----------------------------------

// a|n> = sqrt(n)|n-1>; a^dag is the conjugate transpose.
inline std::pair<DenseOperator, DenseOperator> ladder_ops(const FockBasis& basis) {
    const int d = basis.dim();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix ad = a.adjoint();
    return {DenseOperator::make(std::move(a)), DenseOperator::make(std::move(ad))};
}

inline Matrix number_operator(const FockBasis& basis) {
    const int d = basis.dim();
    Matrix n = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

// Fraction of population in the top 10% of Fock levels of a photon-only vector.
inline double fock_tail_mass(const Vector& v) {
    const long d = v.size();
    const long n_cut = d - std::max<long>(1, d / 10);
    double tail = 0.0;
    for (long n = n_cut; n < d; ++n) tail += std::norm(v(n));
    return tail;
}

// D(alpha) = exp(alpha a^dag - alpha^* a), evaluated spectrally: the generator is
// anti-Hermitian, so the truncated matrix is exactly unitary. Throws if D|0> leaks
// into the top Fock decade beyond tail_tol.
inline DenseOperator displacement(cxd alpha, const FockBasis& basis, double tail_tol = 1e-10) {
    const int d = basis.dim();
    Matrix gen = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        gen(n, n - 1) = alpha * std::sqrt(static_cast<double>(n));
        gen(n - 1, n) = -std::conj(alpha) * std::sqrt(static_cast<double>(n));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(kI * gen);
    Vector phases(d);
    for (int k = 0; k < d; ++k) phases(k) = std::exp(-kI * es.eigenvalues()(k));
    Matrix dm = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const double tail = fock_tail_mass(dm.col(0));
    if (tail > tail_tol)
        throw TruncationError("displacement: tail mass " + std::to_string(tail) +
                              " exceeds tolerance; raise n_max");
    return DenseOperator::make_unitary(std::move(dm));
}

// Coherent state |alpha> from analytic coefficients (log-space factorials).
inline Vector coherent_state(cxd alpha, const FockBasis& basis) {
    const int d = basis.dim();
    Vector v(d);
    if (alpha == cxd(0.0, 0.0)) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    const double la = std::log(std::abs(alpha));
    const double ph = std::arg(alpha);
    for (int n = 0; n < d; ++n) {
        const double mag = std::exp(-0.5 * std::norm(alpha) + n * la - 0.5 * std::lgamma(n + 1.0));
        v(n) = mag * std::exp(kI * (ph * static_cast<double>(n)));
    }
    return v;
}

// --------------------------- model Hamiltonians ------------------------------
// Layout: Fock major, spin minor; index = 2 n_fock + s with s in {0=up, 1=down}.

// H_S = omega a^dag a + (Delta/2) sigma_3 + g sigma_1 (a^dag + a)
inline DenseOperator build_h_single(const ModelParams& p, const FockBasis& basis) {
    p.validate();
    const int d = basis.dim();
    const auto [a, ad] = ladder_ops(basis);
    const Matrix i2 = Matrix::Identity(2, 2);
    Matrix h = p.omega * kron(number_operator(basis), i2) +
               0.5 * p.delta * kron(Matrix::Identity(d, d), sigma_3()) +
               p.g * kron(a.mat + ad.mat, sigma_1());
    return DenseOperator::make_hermitian(std::move(h));
}

// H = omega a^dag a + (Delta/2) sum_i sigma_3i + g sum_i sigma_1i (a^dag + a)
inline DenseOperator build_h_ensemble(const ModelParams& p, const FockBasis& basis,
                                      long dim_cap = kDefaultDimCap) {
    p.validate();
    const int nf = basis.dim();
    const long dim = static_cast<long>(nf) << p.n_atoms;
    if (dim > dim_cap)
        throw DimensionError("build_h_ensemble: dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(dim_cap));
    const int ns = p.n_atoms;
    const long sdim = 1L << ns;
    const auto [a, ad] = ladder_ops(basis);
    const Matrix is = Matrix::Identity(sdim, sdim);
    Matrix h = p.omega * kron(number_operator(basis), is);
    Matrix s3_total = Matrix::Zero(sdim, sdim);
    Matrix s1_total = Matrix::Zero(sdim, sdim);
    for (int i = 0; i < ns; ++i) {
        s3_total += spin_site_operator(ns, i, sigma_3());
        s1_total += spin_site_operator(ns, i, sigma_1());
    }
    h += 0.5 * p.delta * kron(Matrix::Identity(nf, nf), s3_total);
    h += p.g * kron(a.mat + ad.mat, s1_total);
    return DenseOperator::make_hermitian(std::move(h));
}

// H_D = (Omega0/2) sigma_z + (1/2) sum_i (Dx_i sigma_xi + Dz_i sigma_zi)
//       - J sigma_x . sum_i sigma_xi        on (central spin) x (N bath spins)
inline DenseOperator build_h_decoherence(const ModelParams& p, long dim_cap = kDefaultDimCap) {
    p.validate();
    const int ns = p.n_atoms;
    const long dim = 1L << (ns + 1);
    if (dim > dim_cap)
        throw DimensionError("build_h_decoherence: dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(dim_cap));
    const long bdim = 1L << ns;
    const Matrix ib = Matrix::Identity(bdim, bdim);
    Matrix h = 0.5 * p.omega0 * kron(sigma_3(), ib);
    Matrix bath = Matrix::Zero(bdim, bdim);
    Matrix bath_x = Matrix::Zero(bdim, bdim);
    for (int i = 0; i < ns; ++i) {
        bath += 0.5 * p.delta_x_at(i) * spin_site_operator(ns, i, sigma_1());
        bath += 0.5 * p.delta_z_at(i) * spin_site_operator(ns, i, sigma_3());
        bath_x += spin_site_operator(ns, i, sigma_1());
    }
    h += kron(Matrix::Identity(2, 2), bath);
    h -= p.j_coupling * kron(sigma_1(), bath_x);
    return DenseOperator::make_hermitian(std::move(h));
}

// --------------------------- su(2) decomposition ------------------------------

// Split the off-diagonal part of a Hermitian V (given in the H0 eigenbasis, with its
// diagonal already folded into `energies`) into one su(2) term per pair m > n.
inline std::vector<Su2Term> su2_decompose(const RealVector& energies, const DenseOperator& v,
                                          double threshold = 1e-14) {
    if (!v.hermitian) throw NotHermitianError("su2_decompose: operator not flagged Hermitian");
    if (energies.size() != v.dim())
        throw BasisMismatchError("su2_decompose: energies length does not match operator");
    std::vector<Su2Term> terms;
    for (int m = 1; m < v.dim(); ++m)
        for (int n = 0; n < m; ++n)
            if (std::abs(v.mat(m, n)) > threshold)
                terms.push_back({m, n, v.mat(m, n), energies(m) - energies(n)});
    return terms;
}

// Sum of coupling |m><n| + conj |n><m| over all terms.
inline Matrix su2_reconstruct(const std::vector<Su2Term>& terms, int dim) {
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& t : terms) {
        out(t.m, t.n) += t.coupling;
        out(t.n, t.m) += std::conj(t.coupling);
    }
    return out;
}

// --------------------------- product-state helpers ----------------------------

inline Vector fock_vector(int n, const FockBasis& basis) {
    Vector v = Vector::Zero(basis.dim());
    v(n) = 1.0;
    return v;
}

// Product of N identical sigma_1 eigenstates |lambda>.
inline Vector spin_product_state(int n_spins, int lambda) {
    Vector v(1);
    v(0) = 1.0;
    const Eigen::Vector2cd site = sigma1_eigenstate(lambda);
    Vector s(2);
    s << site(0), site(1);
    for (int i = 0; i < n_spins; ++i) v = kron_vec(v, s);
    return v;
}

} // namespace tla::hilbert
