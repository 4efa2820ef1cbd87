// oracle.hpp — Brute-force ground truth: dense eigensystems, spectral propagation,
// fidelities, partial traces, truncation audits

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "tla/errors.hpp"
#include "tla/types.hpp"

namespace tla::oracle {

struct EigenSystem {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns
};

namespace detail {

inline std::uint64_t fingerprint(const Matrix& m) {
    // FNV-1a over the raw entries plus the dimension
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    const long rows = m.rows();
    mix(&rows, sizeof(rows));
    mix(m.data(), sizeof(cxd) * static_cast<std::size_t>(m.size()));
    return h;
}

// Re-span each near-degenerate cluster by projected canonical basis vectors so the
// column set is reproducible, then make the largest entry of every column real positive.
inline void canonicalize(EigenSystem& es, double cluster_tol) {
    const long d = es.eigenvalues.size();
    long start = 0;
    while (start < d) {
        long end = start + 1;
        while (end < d && es.eigenvalues(end) - es.eigenvalues(end - 1) < cluster_tol) ++end;
        const long k = end - start;
        if (k > 1) {
            const Matrix sub = es.eigenvectors.middleCols(start, k);
            Matrix basis(d, k);
            long filled = 0;
            for (long j = 0; j < d && filled < k; ++j) {
                Vector w = sub * (sub.adjoint().col(j));  // project e_j onto the cluster
                for (long c = 0; c < filled; ++c) w -= basis.col(c).dot(w) * basis.col(c);
                const double nrm = w.norm();
                if (nrm > 1e-6) {
                    basis.col(filled++) = w / nrm;
                }
            }
            if (filled == k) es.eigenvectors.middleCols(start, k) = basis;
        }
        start = end;
    }
    for (long j = 0; j < d; ++j) {
        long imax = 0;
        double best = 0.0;
        for (long i = 0; i < d; ++i) {
            const double v = std::abs(es.eigenvectors(i, j));
            if (v > best) {
                best = v;
                imax = i;
            }
        }
        const cxd z = es.eigenvectors(imax, j);
        if (std::abs(z) > 0.0) es.eigenvectors.col(j) *= std::conj(z) / std::abs(z);
    }
}

struct Cache {
    std::mutex mu;
    std::unordered_map<std::uint64_t, std::shared_ptr<const EigenSystem>> map;
};

inline Cache& cache() {
    static Cache c;
    return c;
}

} // namespace detail

inline std::shared_ptr<const EigenSystem> exact_eigensystem(const DenseOperator& h,
                                                            long dim_cap = kDefaultDimCap) {
    if (!h.hermitian) throw NotHermitianError("exact_eigensystem: operator not flagged Hermitian");
    if (h.dim() > dim_cap)
        throw DimensionError("exact_eigensystem: dimension " + std::to_string(h.dim()) +
                             " exceeds cap " + std::to_string(dim_cap));
    const std::uint64_t key = detail::fingerprint(h.mat);
    auto& c = detail::cache();
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = c.map.find(key);
        if (it != c.map.end()) return it->second;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_eigensystem: eigensolver failed");
    auto es = std::make_shared<EigenSystem>();
    es->eigenvalues = solver.eigenvalues();
    es->eigenvectors = solver.eigenvectors();
    const double scale = std::max(std::abs(es->eigenvalues(0)),
                                  std::abs(es->eigenvalues(es->eigenvalues.size() - 1)));
    detail::canonicalize(*es, 1e-9 * std::max(scale, 1.0));
    std::lock_guard<std::mutex> lock(c.mu);
    c.map.emplace(key, es);
    return es;
}

// psi(t) = V e^{-i lambda t} V^dag psi0
inline StateVector exact_propagate(const DenseOperator& h, const StateVector& psi0, double t,
                                   long dim_cap = kDefaultDimCap) {
    if (h.dim() != psi0.dim())
        throw BasisMismatchError("exact_propagate: operator and state dimensions differ");
    auto es = exact_eigensystem(h, dim_cap);
    Vector c = es->eigenvectors.adjoint() * psi0.amps;
    for (long k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * es->eigenvalues(k) * t);
    return StateVector::make(es->eigenvectors * c, psi0.basis);
}

// |<psi1|psi2>| clamped to [0, 1].
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (!(a.basis == b.basis)) throw BasisMismatchError("fidelity: states live on different bases");
    return std::clamp(std::abs(a.amps.dot(b.amps)), 0.0, 1.0);
}

// Reduced density matrix of the first (most significant) spin factor.
inline ReducedDensity2x2 partial_trace_spin(const StateVector& psi) {
    if (psi.basis.n_spins < 1)
        throw BasisMismatchError("partial_trace_spin: state carries no spin factor");
    const long block = 1L << (psi.basis.n_spins - 1);  // bath configurations per Fock level
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (long f = 0; f < psi.basis.fock_dim; ++f)
        for (long b = 0; b < block; ++b) {
            const long i_up = f * 2 * block + b;
            const long i_dn = f * 2 * block + block + b;
            rho(0, 0) += psi.amps(i_up) * std::conj(psi.amps(i_up));
            rho(0, 1) += psi.amps(i_up) * std::conj(psi.amps(i_dn));
            rho(1, 0) += psi.amps(i_dn) * std::conj(psi.amps(i_up));
            rho(1, 1) += psi.amps(i_dn) * std::conj(psi.amps(i_dn));
        }
    return ReducedDensity2x2{rho};
}

inline ReducedDensity2x2 partial_trace_spin(const Matrix& rho_full, const BasisInfo& basis) {
    if (basis.n_spins < 1)
        throw BasisMismatchError("partial_trace_spin: state carries no spin factor");
    if (rho_full.rows() != basis.dim() || rho_full.cols() != basis.dim())
        throw BasisMismatchError("partial_trace_spin: density matrix does not match basis");
    const long block = 1L << (basis.n_spins - 1);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (long f = 0; f < basis.fock_dim; ++f)
        for (long b = 0; b < block; ++b) {
            const long i_up = f * 2 * block + b;
            const long i_dn = f * 2 * block + block + b;
            rho(0, 0) += rho_full(i_up, i_up);
            rho(0, 1) += rho_full(i_up, i_dn);
            rho(1, 0) += rho_full(i_dn, i_up);
            rho(1, 1) += rho_full(i_dn, i_dn);
        }
    return ReducedDensity2x2{rho};
}

// Field (photon) density matrix with every spin factor traced out.
inline Matrix trace_out_spins(const StateVector& psi) {
    const long nf = psi.basis.fock_dim;
    const long sdim = 1L << psi.basis.n_spins;
    Matrix rho = Matrix::Zero(nf, nf);
    for (long n1 = 0; n1 < nf; ++n1)
        for (long n2 = 0; n2 < nf; ++n2) {
            cxd sum = 0.0;
            for (long s = 0; s < sdim; ++s)
                sum += psi.amps(n1 * sdim + s) * std::conj(psi.amps(n2 * sdim + s));
            rho(n1, n2) = sum;
        }
    return rho;
}

struct TruncationReport {
    bool pass = false;
    double tail_mass = 0.0;
};

// Population of the top 10% of Fock levels, summed over spin configurations.
inline TruncationReport truncation_check(const StateVector& psi, double tail_tol) {
    const long nf = psi.basis.fock_dim;
    const long sdim = 1L << psi.basis.n_spins;
    const long n_cut = nf - std::max<long>(1, nf / 10);
    double tail = 0.0;
    for (long n = n_cut; n < nf; ++n)
        for (long s = 0; s < sdim; ++s) tail += std::norm(psi.amps(n * sdim + s));
    return {tail <= tail_tol, tail};
}

} // namespace tla::oracle
