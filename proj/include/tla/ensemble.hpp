// ensemble.hpp — Closed-form results for ensembles of two-level systems:
// classical scaling, non-dissipative decoherence, vacuum amplification,
// cat-state evolution

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tla/errors.hpp"
#include "tla/hilbert.hpp"
#include "tla/types.hpp"

namespace tla::ensemble {

struct SiteCoeffs {
    cxd alpha{1.0, 0.0};  // weight on |down>
    cxd beta{0.0, 0.0};   // weight on |up>
};

// Product state prod_i (alpha_i |down>_i + beta_i |up>_i), per-site normalized.
struct EnsembleSpec {
    std::vector<SiteCoeffs> sites;

    int n() const { return static_cast<int>(sites.size()); }

    void validate() const {
        if (sites.empty()) throw std::invalid_argument("EnsembleSpec: empty");
        for (const auto& s : sites)
            if (std::abs(std::norm(s.alpha) + std::norm(s.beta) - 1.0) > 1e-12)
                throw std::invalid_argument("EnsembleSpec: site not normalized");
    }

    static EnsembleSpec uniform(int n_sites, const SiteCoeffs& site) {
        EnsembleSpec spec;
        spec.sites.assign(n_sites, site);
        spec.validate();
        return spec;
    }

    static EnsembleSpec random(int n_sites, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        EnsembleSpec spec;
        spec.sites.reserve(n_sites);
        for (int i = 0; i < n_sites; ++i) {
            const double theta = std::acos(1.0 - 2.0 * uni(rng));
            const double phi_a = 2.0 * kPi * uni(rng);
            const double phi_b = 2.0 * kPi * uni(rng);
            SiteCoeffs s;
            s.alpha = std::cos(0.5 * theta) * std::exp(cxd(0, phi_a));
            s.beta = std::sin(0.5 * theta) * std::exp(cxd(0, phi_b));
            spec.sites.push_back(s);
        }
        spec.validate();
        return spec;
    }

    // Explicit 2^N product vector in the sigma_3 basis (site 0 most significant).
    Vector product_vector() const {
        Vector v(1);
        v(0) = 1.0;
        for (const auto& s : sites) {
            Vector site(2);
            site << s.beta, s.alpha;  // index 0 = |up>, 1 = |down>
            v = hilbert::kron_vec(v, site);
        }
        return v;
    }
};

// <H_c> = (Delta/2) sum_i (|beta_i|^2 - |alpha_i|^2) = (Delta/2) k_H N
struct MeanEnergy {
    double value = 0.0;
    double k_h = 0.0;
};

inline MeanEnergy classical_mean_energy(const EnsembleSpec& spec, double delta) {
    spec.validate();
    double sum = 0.0;
    for (const auto& s : spec.sites) sum += std::norm(s.beta) - std::norm(s.alpha);
    return {0.5 * delta * sum, sum / spec.n()};
}

// (Delta H_c)^2 = Delta^2 sum_i |beta_i|^2 (1 - |beta_i|^2) = Delta^2 k'_H N
struct Fluctuation {
    double variance = 0.0;
    double k_prime_h = 0.0;
};

inline Fluctuation energy_fluctuation(const EnsembleSpec& spec, double delta) {
    spec.validate();
    double sum = 0.0;
    for (const auto& s : spec.sites) sum += std::norm(s.beta) * (1.0 - std::norm(s.beta));
    return {delta * delta * sum, sum / spec.n()};
}

struct ScalingRow {
    long n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double ratio = 0.0;  // stddev / |mean|
};

// Closed-form Delta H / <H> across a family of identical sites; the log-log slope
// versus N is exactly -1/2.
inline std::vector<ScalingRow> fluctuation_scaling(const SiteCoeffs& site, double delta,
                                                   const std::vector<long>& n_list) {
    const double k_h = std::norm(site.beta) - std::norm(site.alpha);
    const double k_p = std::norm(site.beta) * (1.0 - std::norm(site.beta));
    if (k_h == 0.0)
        throw DegenerateFamilyError("fluctuation_scaling: family has k_H = 0");
    std::vector<ScalingRow> rows;
    rows.reserve(n_list.size());
    for (long n : n_list) {
        if (n < 1) throw std::invalid_argument("fluctuation_scaling: N must be >= 1");
        ScalingRow r;
        r.n = n;
        r.mean = 0.5 * delta * k_h * n;
        r.stddev = std::abs(delta) * std::sqrt(k_p * n);
        r.ratio = r.stddev / std::abs(r.mean);
        rows.push_back(r);
    }
    return rows;
}

// Collective spin expectations under free precession of the product state.
struct BlochExpectation {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;
};

inline BlochExpectation bloch_trajectory(const EnsembleSpec& spec, double delta, double t) {
    spec.validate();
    BlochExpectation out;
    const cxd rot = std::exp(cxd(0, -delta * t));
    for (const auto& s : spec.sites) {
        const cxd w = std::conj(s.alpha) * s.beta * rot;
        out.sx += 2.0 * w.real();
        out.sy += -2.0 * w.imag();
        out.sz += std::norm(s.beta) - std::norm(s.alpha);
    }
    return out;
}

// rho'(t) of the central spin under U = e^{-i N J t sigma_x} from |down>:
//   rho_uu = (1 - cos 2NJt)/2, rho_ud = -(i/2) sin 2NJt, pure at every t.
inline ReducedDensity2x2 reduced_density_leading(int n_atoms, double j_coupling, double t) {
    if (n_atoms < 1) throw std::invalid_argument("reduced_density_leading: N must be >= 1");
    const double th = 2.0 * n_atoms * j_coupling * t;
    Eigen::Matrix2cd rho;
    rho(0, 0) = 0.5 * (1.0 - std::cos(th));
    rho(0, 1) = cxd(0, -0.5 * std::sin(th));
    rho(1, 0) = cxd(0, +0.5 * std::sin(th));
    rho(1, 1) = 0.5 * (1.0 + std::cos(th));
    return ReducedDensity2x2{rho};
}

// Leading order holds when the central splitting is small against the collective
// coupling NJ; flagged at the 1% level.
inline bool leading_order_valid(double omega0, int n_atoms, double j_coupling) {
    return omega0 <= 0.01 * n_atoms * j_coupling;
}

// (1/T) int_0^T rho'(t) dt in closed form.
inline ReducedDensity2x2 time_averaged_density(int n_atoms, double j_coupling, double t_window) {
    if (!(t_window > 0.0)) throw std::invalid_argument("time_averaged_density: T must be > 0");
    const double x = 2.0 * n_atoms * j_coupling * t_window;
    // sin(x)/x and (1-cos x)/x with series fallbacks near 0
    const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    const double cosc = std::abs(x) < 1e-8 ? 0.5 * x - x * x * x / 24.0 : (1.0 - std::cos(x)) / x;
    Eigen::Matrix2cd rho;
    rho(0, 0) = 0.5 * (1.0 - sinc);
    rho(0, 1) = cxd(0, -0.5 * cosc);
    rho(1, 0) = cxd(0, +0.5 * cosc);
    rho(1, 1) = 0.5 * (1.0 + sinc);
    return ReducedDensity2x2{rho};
}

// Supremum of the time-averaged off-diagonal magnitude over the oscillation phase.
inline double off_diagonal_envelope(int n_atoms, double j_coupling, double t_window) {
    return 1.0 / (2.0 * n_atoms * j_coupling * t_window);
}

// Coherent drive of the vacuum by N ground-state two-level systems:
//   xi(t) = (Ng/w)^2 (wt - sin wt),  alpha_hat(t) = -(Ng/w)(e^{-iwt} - 1).
struct CoherentDriveResult {
    double xi = 0.0;
    cxd alpha_hat{};
    double t = 0.0;

    double mean_photons() const { return std::norm(alpha_hat); }
    double photon_stddev() const { return std::abs(alpha_hat); }
    double fluctuation_ratio() const { return 1.0 / std::abs(alpha_hat); }
};

inline CoherentDriveResult amplification(int n_atoms, double g, double omega, double t) {
    if (n_atoms < 1) throw std::invalid_argument("amplification: N must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("amplification: omega must be > 0");
    const double b = n_atoms * g / omega;
    CoherentDriveResult r;
    r.xi = b * b * (omega * t - std::sin(omega * t));
    r.alpha_hat = -b * (std::exp(cxd(0, -omega * t)) - 1.0);
    r.t = t;
    return r;
}

// Analytic lab state of the driven vacuum: e^{i xi} |alpha_hat> (x) prod_i |-1>_i.
inline StateVector amplified_state(int n_atoms, double g, double omega, double t,
                                   const FockBasis& basis) {
    const CoherentDriveResult r = amplification(n_atoms, g, omega, t);
    Vector field = std::exp(cxd(0, r.xi)) * hilbert::coherent_state(r.alpha_hat, basis);
    Vector full = hilbert::kron_vec(field, hilbert::spin_product_state(n_atoms, -1));
    return StateVector::make(std::move(full), BasisInfo{basis.dim(), n_atoms});
}

// Two-branch coherent evolution of an even cat driven by the ensemble.
// beta(t) = (Ng/w)(e^{iwt} - 1); phases phi_1 = alpha Im[beta e^{-i phi}],
// phi_2 = phi_1 with phi -> -phi. Branch centers (beta + alpha e^{+-i phi}) e^{-iwt}.
struct CatEvolutionResult {
    cxd beta_t{};
    double phi1 = 0.0;
    double phi2 = 0.0;
    double xi = 0.0;
    double t = 0.0;
};

inline CatEvolutionResult cat_evolution(double alpha, double phi, int n_atoms, double g,
                                        double omega, double t) {
    if (n_atoms < 1) throw std::invalid_argument("cat_evolution: N must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("cat_evolution: omega must be > 0");
    const double b = n_atoms * g / omega;
    CatEvolutionResult r;
    r.beta_t = b * (std::exp(cxd(0, omega * t)) - 1.0);
    r.phi1 = alpha * (r.beta_t * std::exp(cxd(0, -phi))).imag();
    r.phi2 = alpha * (r.beta_t * std::exp(cxd(0, +phi))).imag();
    r.xi = b * b * (omega * t - std::sin(omega * t));
    r.t = t;
    return r;
}

inline std::pair<cxd, cxd> cat_branch_centers(double alpha, double phi,
                                              const CatEvolutionResult& r, double omega) {
    const cxd rot = std::exp(cxd(0, -omega * r.t));
    return {(r.beta_t + alpha * std::exp(cxd(0, +phi))) * rot,
            (r.beta_t + alpha * std::exp(cxd(0, -phi))) * rot};
}

// Normalization N of N(|alpha e^{i phi}> + |alpha e^{-i phi}>); preserved in time.
inline double cat_norm_factor(double alpha, double phi) {
    const cxd overlap = std::exp(cxd(-alpha * alpha, 0) + alpha * alpha * std::exp(cxd(0, 2 * phi)));
    return 1.0 / std::sqrt(2.0 + 2.0 * overlap.real());
}

// Field part of the evolved cat as an explicit vector (global phase e^{i xi} included).
inline Vector cat_field_state(double alpha, double phi, int n_atoms, double g, double omega,
                              double t, const FockBasis& basis, double tail_tol = 1e-10) {
    const CatEvolutionResult r = cat_evolution(alpha, phi, n_atoms, g, omega, t);
    const auto [g1, g2] = cat_branch_centers(alpha, phi, r, omega);
    const double reach = std::max(std::abs(g1), std::abs(g2));
    if (basis.n_max < required_n_max(reach))
        throw TruncationError("cat_field_state: n_max " + std::to_string(basis.n_max) +
                              " below required " + std::to_string(required_n_max(reach)));
    Vector v = std::exp(cxd(0, r.phi1)) * hilbert::coherent_state(g1, basis) +
               std::exp(cxd(0, r.phi2)) * hilbert::coherent_state(g2, basis);
    v *= cat_norm_factor(alpha, phi) * std::exp(cxd(0, r.xi));
    if (hilbert::fock_tail_mass(v) > tail_tol)
        throw TruncationError("cat_field_state: tail mass above tolerance");
    return v;
}

// Full cat (x) ferromagnetic-ensemble state for oracle comparisons.
inline StateVector cat_full_state(double alpha, double phi, int n_atoms, double g, double omega,
                                  double t, const FockBasis& basis, double tail_tol = 1e-10) {
    Vector field = cat_field_state(alpha, phi, n_atoms, g, omega, t, basis, tail_tol);
    Vector full = hilbert::kron_vec(field, hilbert::spin_product_state(n_atoms, -1));
    return StateVector::make(std::move(full), BasisInfo{basis.dim(), n_atoms});
}

} // namespace tla::ensemble
