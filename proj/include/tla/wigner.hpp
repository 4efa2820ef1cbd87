// wigner.hpp — Wigner functions on phase-space grids, interference extraction,
// time blurring

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tla/errors.hpp"
#include "tla/parallel.hpp"
#include "tla/specfun.hpp"
#include "tla/types.hpp"

namespace tla::wigner {

// Rectangular (x, p) lattice; convention x = sqrt(2) Re alpha, p = sqrt(2) Im alpha,
// so a coherent state |a0> reads (1/pi) exp[-(x - sqrt2 Re a0)^2 - (p - sqrt2 Im a0)^2].
struct PhaseSpaceGrid {
    double x_min = -5, x_max = 5, p_min = -5, p_max = 5;
    int nx = 64, np = 64;
    RealMatrix values;  // nx rows (x index), np cols (p index)

    double x(int i) const { return x_min + i * (x_max - x_min) / (nx - 1); }
    double p(int j) const { return p_min + j * (p_max - p_min) / (np - 1); }
    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dp() const { return (p_max - p_min) / (np - 1); }

    // 2D trapezoid of the stored values.
    double integral() const {
        double sum = 0.0;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < np; ++j) {
                double w = 1.0;
                if (i == 0 || i == nx - 1) w *= 0.5;
                if (j == 0 || j == np - 1) w *= 0.5;
                sum += w * values(i, j);
            }
        return sum * dx() * dp();
    }
};

inline PhaseSpaceGrid make_grid(double x_min, double x_max, double p_min, double p_max, int nx,
                                int np) {
    if (nx < 16 || np < 16) throw std::invalid_argument("make_grid: nx, np must be >= 16");
    if (!(x_max > x_min) || !(p_max > p_min))
        throw std::invalid_argument("make_grid: empty ranges");
    PhaseSpaceGrid g{x_min, x_max, p_min, p_max, nx, np, RealMatrix::Zero(nx, np)};
    return g;
}

namespace detail {

// The grid must cover every coherent blob center plus/minus five blob widths
// (width 1/sqrt(2) in grid units). Centers are estimated from the quadrature
// moments: centroid sqrt2 <a> and, per axis, the excess spread over the vacuum
// width, which for balanced blob pairs equals the center half-separation.
inline void validate_coverage(const PhaseSpaceGrid& g, const Vector& psi) {
    const long d = psi.size();
    cxd mean_a = 0.0, mean_a2 = 0.0;
    double mean_n = 0.0;
    for (long n = 0; n < d; ++n) {
        mean_n += n * std::norm(psi(n));
        if (n + 1 < d) mean_a += std::conj(psi(n)) * std::sqrt(n + 1.0) * psi(n + 1);
        if (n + 2 < d)
            mean_a2 += std::conj(psi(n)) * std::sqrt((n + 1.0) * (n + 2.0)) * psi(n + 2);
    }
    const double cx = std::sqrt(2.0) * mean_a.real();
    const double cp = std::sqrt(2.0) * mean_a.imag();
    const double var_x = mean_a2.real() + mean_n + 0.5 - 2.0 * mean_a.real() * mean_a.real();
    const double var_p = -mean_a2.real() + mean_n + 0.5 - 2.0 * mean_a.imag() * mean_a.imag();
    const double five_widths = 5.0 / std::sqrt(2.0);
    const double margin_x = std::sqrt(std::max(0.0, var_x - 0.5)) + five_widths;
    const double margin_p = std::sqrt(std::max(0.0, var_p - 0.5)) + five_widths;
    if (cx - margin_x < g.x_min || cx + margin_x > g.x_max || cp - margin_p < g.p_min ||
        cp + margin_p > g.p_max)
        throw GridTooSmallError("wigner grid does not cover state support: centroid (" +
                                std::to_string(cx) + ", " + std::to_string(cp) + "), margins (" +
                                std::to_string(margin_x) + ", " + std::to_string(margin_p) + ")");
}

// W(x,p) = (1/pi) sum_n (-1)^n |<n| D(-alpha) |psi>|^2 at alpha = (x + i p)/sqrt(2).
// The displaced amplitudes come from the scaled-diagonal recurrence: with
// zeta = s e^{i theta},  <n+d|D(zeta)|n> = e_n^{(d)} e^{i d theta} and
// <n|D(zeta)|n+d> = (-1)^d e_n^{(d)} e^{-i d theta}.
struct DisplacedParityEvaluator {
    Vector psi;

    explicit DisplacedParityEvaluator(Vector state) : psi(std::move(state)) {}

    double operator()(double x, double p) const {
        const long dim_s = psi.size();
        const cxd zeta = -cxd(x, p) / std::sqrt(2.0);  // D(zeta) = D(-alpha)
        const double s = std::abs(zeta);
        const double root_dim = std::sqrt(static_cast<double>(dim_s));
        // beyond the state's reach the function is zero to far below tolerance
        if (s > root_dim + 6.0) return 0.0;
        const double xa = s * s;
        const double theta = std::atan2(zeta.imag(), zeta.real());
        // the displaced state spreads to photon numbers ~ (s + sqrt(dim_s))^2; the
        // parity sum must run out to that scale, not just to the state's cutoff
        const double reach = (s + root_dim) * (s + root_dim);
        const long dim_out =
            std::max(dim_s, static_cast<long>(std::ceil(reach + 8.0 * std::sqrt(reach) + 12.0)));
        std::vector<cxd> c(dim_out, cxd(0, 0));
        std::vector<double> diag(dim_s);
        for (long d = 0; d < dim_out; ++d) {
            const long count = std::min(dim_s, dim_out - d);
            if (count <= 0) break;
            specfun::displaced_diagonal_scaled(static_cast<int>(d), xa, static_cast<int>(count),
                                               diag.data());
            double peak = 0.0;
            for (long n = 0; n < count; ++n) peak = std::max(peak, std::abs(diag[n]));
            if (peak < 1e-15 && static_cast<double>(d) > xa) break;
            const cxd up = std::exp(cxd(0, static_cast<double>(d) * theta));
            const cxd down = (d % 2 == 0 ? 1.0 : -1.0) * std::conj(up);
            if (d == 0) {
                for (long n = 0; n < count; ++n) c[n] += diag[n] * psi(n);
                continue;
            }
            for (long n = 0; n < count; ++n) c[n + d] += diag[n] * up * psi(n);
            for (long n = 0; n + d < dim_s; ++n) c[n] += diag[n] * down * psi(n + d);
        }
        double out = 0.0;
        for (long m = 0; m < dim_out; ++m) out += (m % 2 == 0 ? 1.0 : -1.0) * std::norm(c[m]);
        return out / kPi;
    }
};

} // namespace detail

// Wigner function of a photon-only pure state on the given grid.
inline PhaseSpaceGrid wigner_from_state(const Vector& psi_fock, const PhaseSpaceGrid& grid_spec,
                                        int threads = 0) {
    PhaseSpaceGrid g = grid_spec;
    if (g.values.rows() != g.nx || g.values.cols() != g.np)
        g.values = RealMatrix::Zero(g.nx, g.np);
    detail::validate_coverage(g, psi_fock);
    detail::DisplacedParityEvaluator eval(psi_fock);
    parallel_for(g.nx, threads, [&](long i) {
        for (int j = 0; j < g.np; ++j) g.values(i, j) = eval(g.x(static_cast<int>(i)), g.p(j));
    });
    return g;
}

// Density-matrix overload: spectral mixture of pure-state Wigner functions.
// Requires rho Hermitian to 1e-10 (the imaginary residue budget).
inline PhaseSpaceGrid wigner_from_state(const Matrix& rho, const PhaseSpaceGrid& grid_spec,
                                        int threads = 0) {
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-10)
        throw NotHermitianError("wigner_from_state: density matrix residue " +
                                std::to_string(herm_dev));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const long last = es.eigenvalues().size() - 1;
    detail::validate_coverage(grid_spec, es.eigenvectors().col(last));
    PhaseSpaceGrid out = grid_spec;
    out.values = RealMatrix::Zero(out.nx, out.np);
    for (long k = last; k >= 0; --k) {
        const double w = es.eigenvalues()(k);
        if (w < 1e-14) break;  // eigenvalues ascending; remaining weights negligible
        const Vector psi = es.eigenvectors().col(k);
        detail::DisplacedParityEvaluator eval(psi);
        RealMatrix comp(out.nx, out.np);
        parallel_for(out.nx, threads, [&](long i) {
            for (int j = 0; j < out.np; ++j) comp(i, j) = eval(out.x(static_cast<int>(i)), out.p(j));
        });
        out.values += w * comp;
    }
    return out;
}

// Interference term of the evolved-cat Wigner function, in the convention fixed by
// the oracle-checked branch centers (beta(t) = (Ng/w)(e^{iwt}-1)):
//   (2/pi) exp[-(x - sqrt2 b(1-cos wt) - sqrt2 a cos(phi) cos wt)^2]
//        * exp[-(p - sqrt2 b sin wt + sqrt2 a cos(phi) sin wt)^2]
//        * cos[2 sqrt2 a sin(phi)(x cos wt - p sin wt) + 4 a b sin(phi)(1-cos wt)
//              - a^2 sin(2 phi)],   b = Ng/w.
inline double wigner_interference_analytic(double x, double p, double alpha, double phi,
                                           int n_atoms, double g, double omega, double t) {
    const double b = n_atoms * g / omega;
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const double rt2 = std::sqrt(2.0);
    const double gx = x - rt2 * b * (1.0 - c) - rt2 * alpha * std::cos(phi) * c;
    const double gp = p - rt2 * b * s + rt2 * alpha * std::cos(phi) * s;
    const double arg = 2.0 * rt2 * alpha * std::sin(phi) * (x * c - p * s) +
                       4.0 * alpha * b * std::sin(phi) * (1.0 - c) -
                       alpha * alpha * std::sin(2.0 * phi);
    return (2.0 / kPi) * std::exp(-gx * gx - gp * gp) * std::cos(arg);
}

// One coherent blob (1/pi) e^{-(x - sqrt2 Re c)^2 - (p - sqrt2 Im c)^2}.
inline double coherent_blob(double x, double p, cxd center) {
    const double gx = x - std::sqrt(2.0) * center.real();
    const double gp = p - std::sqrt(2.0) * center.imag();
    return std::exp(-gx * gx - gp * gp) / kPi;
}

// --------------------------- fringe extraction -------------------------------

enum class Direction { X, P };

struct FringeEstimate {
    double wavenumber = 0.0;
    double bin_width = 0.0;
    bool has_fringe = false;
};

namespace detail {

// In-place iterative radix-2 FFT.
inline void fft(std::vector<cxd>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const cxd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cxd w = 1.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cxd u = a[i + j];
                const cxd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace detail

// Dominant spatial angular frequency along one axis: Hann-windowed rows, 8x
// zero-padded spectra accumulated over the transverse axis, peak taken past the
// descent of the DC lobe. The reported bin width is 2 pi / (M_padded * step).
inline FringeEstimate fringe_wavenumber(const PhaseSpaceGrid& grid, Direction dir) {
    const int n_along = dir == Direction::X ? grid.nx : grid.np;
    const int n_across = dir == Direction::X ? grid.np : grid.nx;
    const double step = dir == Direction::X ? grid.dx() : grid.dp();
    const std::size_t m = detail::next_pow2(static_cast<std::size_t>(8 * n_along));
    std::vector<double> power(m / 2 + 1, 0.0);
    std::vector<cxd> buf;
    for (int k = 0; k < n_across; ++k) {
        buf.assign(m, cxd(0, 0));
        for (int i = 0; i < n_along; ++i) {
            const double v = dir == Direction::X ? grid.values(i, k) : grid.values(k, i);
            const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n_along - 1));
            buf[i] = v * hann;
        }
        detail::fft(buf);
        for (std::size_t j = 0; j <= m / 2; ++j) power[j] += std::norm(buf[j]);
    }
    FringeEstimate est;
    est.bin_width = 2.0 * kPi / (static_cast<double>(m) * step);
    // walk past the DC lobe, then take the global maximum of the remainder
    std::size_t j0 = 1;
    while (j0 + 1 <= m / 2 && power[j0 + 1] < power[j0]) ++j0;
    if (j0 + 1 > m / 2) return est;  // monotone spectrum: no fringe
    std::size_t jpk = j0;
    for (std::size_t j = j0; j <= m / 2; ++j)
        if (power[j] > power[jpk]) jpk = j;
    const double total_peak = *std::max_element(power.begin(), power.end());
    if (power[jpk] < 1e-9 * total_peak) return est;
    est.has_fringe = true;
    est.wavenumber = 2.0 * kPi * static_cast<double>(jpk) / (static_cast<double>(m) * step);
    if (2.0 * kPi / est.wavenumber < 8.0 * step)
        throw UnderresolvedError("fringe_wavenumber: fewer than 8 samples per period");
    return est;
}

// --------------------------- time blurring -----------------------------------

// Largest phase rate of the evolved-cat interference cosine plus the Gaussian
// center motion; used to choose an adequate sample count for time averaging.
inline double cat_phase_rate(double alpha, double phi, int n_atoms, double g, double omega,
                             double gaussian_extent = 3.0) {
    const double b = n_atoms * g / omega;
    const double fringe = 4.0 * std::abs(alpha * b * std::sin(phi)) +
                          2.0 * std::sqrt(2.0) * std::abs(alpha * std::sin(phi)) *
                              (std::sqrt(2.0) * (b + std::abs(alpha)));
    const double sweep = 2.0 * gaussian_extent * std::sqrt(2.0) * (b + std::abs(alpha) + 1.0);
    return omega * (fringe + sweep);
}

inline int blur_min_samples(double window, double max_phase_rate) {
    return 2 + static_cast<int>(std::ceil(window * max_phase_rate / kPi));
}

// Pointwise trapezoid average of family(t) over [t0, t0 + window]. If a phase-rate
// estimate is supplied, n_samples below the Nyquist-based minimum throws.
inline PhaseSpaceGrid time_blur(const std::function<PhaseSpaceGrid(double)>& family, double t0,
                                double window, int n_samples, double max_phase_rate = 0.0) {
    if (window < 0.0) throw std::invalid_argument("time_blur: window must be >= 0");
    if (window == 0.0) return family(t0);
    if (n_samples < 2) throw std::invalid_argument("time_blur: need at least 2 samples");
    if (max_phase_rate > 0.0 && n_samples < blur_min_samples(window, max_phase_rate))
        throw UndersampledError("time_blur: " + std::to_string(n_samples) +
                                " samples below the Nyquist estimate " +
                                std::to_string(blur_min_samples(window, max_phase_rate)));
    PhaseSpaceGrid out = family(t0);
    out.values *= 0.5;
    for (int k = 1; k < n_samples; ++k) {
        const double t = t0 + window * k / (n_samples - 1);
        const PhaseSpaceGrid g = family(t);
        if (g.nx != out.nx || g.np != out.np)
            throw std::invalid_argument("time_blur: family changed grid shape");
        out.values += (k == n_samples - 1 ? 0.5 : 1.0) * g.values;
    }
    out.values /= (n_samples - 1);
    return out;
}

} // namespace tla::wigner
