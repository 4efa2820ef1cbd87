#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tla/ensemble.hpp"
#include "tla/hilbert.hpp"
#include "tla/oracle.hpp"

using namespace tla;
using Catch::Approx;

namespace {

// H_c = (Delta/2) sum_i sigma_3i as an explicit 2^N matrix.
Matrix classical_hamiltonian(int n, double delta) {
    const long dim = 1L << n;
    Matrix h = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) h += 0.5 * delta * hilbert::spin_site_operator(n, i, hilbert::sigma_3());
    return h;
}

} // namespace

TEST_CASE("classical mean energy") {
    SECTION("all beta = 1 saturates k_H") {
        const auto spec = ensemble::EnsembleSpec::uniform(5, {cxd(0, 0), cxd(1, 0)});
        const auto me = ensemble::classical_mean_energy(spec, 0.8);
        REQUIRE(me.value == Approx(0.4 * 5));
        REQUIRE(me.k_h == Approx(1.0));
    }

    SECTION("balanced sites give zero") {
        const double r = 1.0 / std::sqrt(2.0);
        const auto spec = ensemble::EnsembleSpec::uniform(7, {cxd(r, 0), cxd(r, 0)});
        REQUIRE(ensemble::classical_mean_energy(spec, 1.0).value == Approx(0.0).margin(1e-14));
    }

    SECTION("|beta|^2 = 3/4 family at N = 100") {
        const auto spec = ensemble::EnsembleSpec::uniform(100, {cxd(0.5, 0), cxd(std::sqrt(3.0) / 2, 0)});
        const auto me = ensemble::classical_mean_energy(spec, 1.0);
        REQUIRE(me.value == Approx(25.0).margin(1e-10));
        REQUIRE(me.k_h == Approx(0.5).margin(1e-14));
    }
}

TEST_CASE("energy fluctuation") {
    SECTION("eigenstates carry no fluctuation") {
        const auto spec = ensemble::EnsembleSpec::uniform(6, {cxd(0, 0), cxd(1, 0)});
        REQUIRE(ensemble::energy_fluctuation(spec, 1.0).variance == Approx(0.0).margin(1e-15));
    }

    SECTION("|beta|^2 = 3/4, N = 16, Delta = 1 gives variance 3") {
        const auto spec = ensemble::EnsembleSpec::uniform(16, {cxd(0.5, 0), cxd(std::sqrt(3.0) / 2, 0)});
        const auto fl = ensemble::energy_fluctuation(spec, 1.0);
        REQUIRE(fl.variance == Approx(3.0).margin(1e-12));
        REQUIRE(fl.k_prime_h == Approx(3.0 / 16.0).margin(1e-14));
    }

    SECTION("matches the brute-force variance on random product states") {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 7);  // up to N = 8
            const auto spec = ensemble::EnsembleSpec::random(n, rng);
            const double delta = 0.7;
            const Matrix h = classical_hamiltonian(n, delta);
            const Vector psi = spec.product_vector();
            const double mean = (psi.adjoint() * h * psi)(0).real();
            const double mean2 = (psi.adjoint() * h * h * psi)(0).real();
            const double var = mean2 - mean * mean;
            REQUIRE(ensemble::energy_fluctuation(spec, delta).variance ==
                    Approx(var).margin(1e-10));
            REQUIRE(ensemble::classical_mean_energy(spec, delta).value ==
                    Approx(mean).margin(1e-10));
        }
    }
}

TEST_CASE("fluctuation scaling") {
    const ensemble::SiteCoeffs site{cxd(0.5, 0), cxd(std::sqrt(3.0) / 2, 0)};

    SECTION("slope is exactly -1/2 in log-log") {
        const auto rows = ensemble::fluctuation_scaling(site, 1.0, {10, 100, 1000, 10000});
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double slope = (std::log(rows[i].ratio) - std::log(rows[i - 1].ratio)) /
                                 (std::log(double(rows[i].n)) - std::log(double(rows[i - 1].n)));
            REQUIRE(slope == Approx(-0.5).margin(1e-12));
        }
    }

    SECTION("decade ratios scale by 10^{-1/2}") {
        const auto rows = ensemble::fluctuation_scaling(site, 1.0, {10, 100, 1000});
        REQUIRE(rows[1].ratio / rows[0].ratio == Approx(std::pow(10.0, -0.5)).margin(1e-13));
        REQUIRE(rows[2].ratio / rows[1].ratio == Approx(std::pow(10.0, -0.5)).margin(1e-13));
    }

    SECTION("N = 1 baseline is finite") {
        const auto rows = ensemble::fluctuation_scaling(site, 1.0, {1});
        // 2 sqrt(k') / |k| with k = 1/2, k' = 3/16
        REQUIRE(rows[0].ratio == Approx(2.0 * std::sqrt(3.0 / 16.0) / 0.5).margin(1e-13));
    }

    SECTION("k_H = 0 family is rejected") {
        const double r = 1.0 / std::sqrt(2.0);
        REQUIRE_THROWS_AS(ensemble::fluctuation_scaling({cxd(r, 0), cxd(r, 0)}, 1.0, {10}),
                          DegenerateFamilyError);
    }
}

TEST_CASE("Bloch trajectory") {
    const double r = 1.0 / std::sqrt(2.0);
    const ensemble::SiteCoeffs site{cxd(r, 0), cxd(r, 0)};

    SECTION("t = 0 points along +x with length N") {
        const auto b = ensemble::bloch_trajectory(ensemble::EnsembleSpec::uniform(9, site), 1.0, 0.0);
        REQUIRE(b.sx == Approx(9.0).margin(1e-12));
        REQUIRE(b.sy == Approx(0.0).margin(1e-12));
        REQUIRE(b.sz == Approx(0.0).margin(1e-12));
    }

    SECTION("quarter turn at Delta t = pi/2") {
        const auto b = ensemble::bloch_trajectory(ensemble::EnsembleSpec::uniform(9, site), 1.0,
                                                  0.5 * kPi);
        REQUIRE(b.sx == Approx(0.0).margin(1e-12));
        REQUIRE(b.sy == Approx(9.0).margin(1e-12));
    }

    SECTION("satisfies the precession equations") {
        std::mt19937_64 rng(11);
        const auto spec = ensemble::EnsembleSpec::random(5, rng);
        const double delta = 0.9, t = 1.3, h = 1e-6;
        const auto b0 = ensemble::bloch_trajectory(spec, delta, t - h);
        const auto b1 = ensemble::bloch_trajectory(spec, delta, t);
        const auto b2 = ensemble::bloch_trajectory(spec, delta, t + h);
        REQUIRE((b2.sx - b0.sx) / (2 * h) == Approx(-delta * b1.sy).margin(1e-6));
        REQUIRE((b2.sy - b0.sy) / (2 * h) == Approx(delta * b1.sx).margin(1e-6));
        REQUIRE(b2.sz == Approx(b0.sz).margin(1e-12));
    }

    SECTION("matches brute-force expectations on the product state") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 8; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 7);
            const auto spec = ensemble::EnsembleSpec::random(n, rng);
            const double delta = 1.1, t = 2.3;
            const Matrix h = classical_hamiltonian(n, delta);
            const StateVector psi0 = StateVector::make(spec.product_vector(), BasisInfo{1, n});
            const StateVector psi = oracle::exact_propagate(DenseOperator::make_hermitian(h), psi0, t);
            Matrix sx = Matrix::Zero(1 << n, 1 << n), sy = sx, sz = sx;
            for (int i = 0; i < n; ++i) {
                sx += hilbert::spin_site_operator(n, i, hilbert::sigma_1());
                sy += hilbert::spin_site_operator(n, i, hilbert::sigma_2());
                sz += hilbert::spin_site_operator(n, i, hilbert::sigma_3());
            }
            const auto b = ensemble::bloch_trajectory(spec, delta, t);
            REQUIRE((psi.amps.adjoint() * sx * psi.amps)(0).real() == Approx(b.sx).margin(1e-10));
            REQUIRE((psi.amps.adjoint() * sy * psi.amps)(0).real() == Approx(b.sy).margin(1e-10));
            REQUIRE((psi.amps.adjoint() * sz * psi.amps)(0).real() == Approx(b.sz).margin(1e-10));
        }
    }
}

TEST_CASE("leading-order reduced density") {
    SECTION("t = 0 is |down><down|") {
        const auto rho = ensemble::reduced_density_leading(4, 1.0, 0.0);
        REQUIRE(rho.up_up().real() == Approx(0.0).margin(1e-15));
        REQUIRE(rho.down_down().real() == Approx(1.0).margin(1e-15));
    }

    SECTION("half period flips the population") {
        // 2NJt = pi
        const auto rho = ensemble::reduced_density_leading(2, 1.0, kPi / 4.0);
        REQUIRE(rho.up_up().real() == Approx(1.0).margin(1e-12));
    }

    SECTION("purity is one at all times") {
        for (double t : {0.1, 0.9, 2.7})
            REQUIRE(ensemble::reduced_density_leading(3, 0.8, t).purity() == Approx(1.0).margin(1e-12));
    }

    SECTION("matches partial trace of the exact propagation") {
        for (int n : {2, 4, 6}) {
            ModelParams p;
            p.n_atoms = n;
            p.j_coupling = 0.7;
            p.omega0 = 0.0;
            const DenseOperator h = hilbert::build_h_decoherence(p);
            // central |down>_z, bath ferromagnetic in sigma_x
            Vector central(2);
            central << 0.0, 1.0;
            const Vector bath = hilbert::spin_product_state(n, -1);
            const StateVector psi0 =
                StateVector::make(hilbert::kron_vec(central, bath), BasisInfo{1, n + 1});
            for (double t : {0.3, 1.1, 2.9}) {
                const StateVector psi = oracle::exact_propagate(h, psi0, t);
                const ReducedDensity2x2 got = oracle::partial_trace_spin(psi);
                const ReducedDensity2x2 expect = ensemble::reduced_density_leading(n, 0.7, t);
                REQUIRE((got.rho - expect.rho).cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }
}

TEST_CASE("time-averaged density") {
    SECTION("full periods average to the fully dephased state") {
        const int n = 3;
        const double j = 1.3;
        const double t = 2.0 * kPi * 2 / (2.0 * n * j);
        const auto rho = ensemble::time_averaged_density(n, j, t);
        REQUIRE(std::abs(rho.up_down()) < 1e-14);
        REQUIRE(rho.up_up().real() == Approx(0.5).margin(1e-14));
        REQUIRE(rho.down_down().real() == Approx(0.5).margin(1e-14));
    }

    SECTION("short windows recover the initial state") {
        const auto rho = ensemble::time_averaged_density(2, 1.0, 1e-9);
        REQUIRE(rho.down_down().real() == Approx(1.0).margin(1e-8));
        REQUIRE(std::abs(rho.up_down()) < 1e-8);
    }

    SECTION("matches a fine Riemann average of the instantaneous density") {
        const int n = 4;
        const double j = 0.9, t = 1.7;
        Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
        const int steps = 200000;
        for (int k = 0; k < steps; ++k)
            acc += ensemble::reduced_density_leading(n, j, (k + 0.5) * t / steps).rho;
        acc /= steps;
        const auto rho = ensemble::time_averaged_density(n, j, t);
        REQUIRE((rho.rho - acc).cwiseAbs().maxCoeff() < 1e-8);
    }

    SECTION("off-diagonal magnitude sits under the 1/(2NJT) envelope") {
        const double jt = kPi / 4.0;
        for (int n : {2, 3, 4, 5, 6}) {
            const auto rho = ensemble::time_averaged_density(n, 1.0, jt);
            REQUIRE(std::abs(rho.up_down()) <= ensemble::off_diagonal_envelope(n, 1.0, jt) + 1e-15);
        }
        // doubling N at fixed JT halves the envelope
        REQUIRE(ensemble::off_diagonal_envelope(4, 1.0, jt) ==
                Approx(0.5 * ensemble::off_diagonal_envelope(2, 1.0, jt)));
    }
}

TEST_CASE("vacuum amplification") {
    SECTION("t = 0 is the vacuum with no phase") {
        const auto r = ensemble::amplification(10, 0.1, 1.0, 0.0);
        REQUIRE(std::abs(r.alpha_hat) == 0.0);
        REQUIRE(r.xi == 0.0);
    }

    SECTION("half cycle at N = 10, g/w = 0.1: |alpha| = 2, mean photons 4") {
        const auto r = ensemble::amplification(10, 0.1, 1.0, kPi);
        REQUIRE(std::abs(r.alpha_hat) == Approx(2.0).margin(1e-12));
        REQUIRE(r.mean_photons() == Approx(4.0).margin(1e-12));
    }

    SECTION("|alpha_hat| never exceeds 2Ng/w") {
        for (double t : {0.3, 1.0, 2.5, 4.0, 7.7})
            REQUIRE(std::abs(ensemble::amplification(5, 0.2, 1.0, t).alpha_hat) <= 2.0 + 1e-12);
    }

    SECTION("mean photons grow as N^2: exact slope 2 in log-log") {
        const double t = 1.0;
        std::vector<double> means;
        for (int n : {1, 2, 4, 8}) means.push_back(ensemble::amplification(n, 0.1, 1.0, t).mean_photons());
        for (std::size_t i = 1; i < means.size(); ++i) {
            const double slope = (std::log(means[i]) - std::log(means[i - 1])) / std::log(2.0);
            REQUIRE(slope == Approx(2.0).margin(1e-12));
        }
    }

    SECTION("analytic coherent evolution matches the exact propagation at Delta = 0") {
        ModelParams p;
        p.n_atoms = 2;
        p.g = 0.2;
        p.delta = 0.0;
        FockBasis basis(40);
        const DenseOperator h = hilbert::build_h_ensemble(p, basis);
        const Vector vac = hilbert::fock_vector(0, basis);
        const Vector ferro = hilbert::spin_product_state(2, -1);
        const StateVector psi0 =
            StateVector::make(hilbert::kron_vec(vac, ferro), BasisInfo{basis.dim(), 2});
        const Matrix number =
            hilbert::kron(hilbert::number_operator(basis), Matrix::Identity(4, 4));
        for (double t : {0.5, 2.0, 5.0, 10.0}) {
            const StateVector exact = oracle::exact_propagate(h, psi0, t);
            const StateVector analytic = ensemble::amplified_state(2, 0.2, 1.0, t, basis);
            REQUIRE(oracle::fidelity(analytic, exact) >= 1.0 - 1e-8);
            const double photons = (exact.amps.adjoint() * number * exact.amps)(0).real();
            REQUIRE(photons ==
                    Approx(ensemble::amplification(2, 0.2, 1.0, t).mean_photons()).margin(1e-8));
        }
    }
}

TEST_CASE("cat evolution") {
    SECTION("t = 0 is the input cat") {
        const auto r = ensemble::cat_evolution(1.0, 0.6, 3, 0.2, 1.0, 0.0);
        REQUIRE(std::abs(r.beta_t) == 0.0);
        REQUIRE(r.phi1 == 0.0);
        REQUIRE(r.phi2 == 0.0);
        FockBasis basis(30);
        const Vector field = ensemble::cat_field_state(1.0, 0.6, 3, 0.2, 1.0, 0.0, basis);
        const Vector expect = ensemble::cat_norm_factor(1.0, 0.6) *
                              (hilbert::coherent_state(std::polar(1.0, 0.6), basis) +
                               hilbert::coherent_state(std::polar(1.0, -0.6), basis));
        REQUIRE((field - expect).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("phi = 0 degenerates to a single displaced coherent branch") {
        const auto r = ensemble::cat_evolution(1.2, 0.0, 2, 0.3, 1.0, 1.7);
        REQUIRE(r.phi1 == Approx(r.phi2));
        const auto [g1, g2] = ensemble::cat_branch_centers(1.2, 0.0, r, 1.0);
        REQUIRE(std::abs(g1 - g2) < 1e-14);
    }

    SECTION("phi -> -phi swaps the phases") {
        const auto a = ensemble::cat_evolution(1.0, 0.8, 2, 0.2, 1.0, 1.3);
        const auto b = ensemble::cat_evolution(1.0, -0.8, 2, 0.2, 1.0, 1.3);
        REQUIRE(a.phi1 == Approx(b.phi2).margin(1e-15));
        REQUIRE(a.phi2 == Approx(b.phi1).margin(1e-15));
    }

    SECTION("phases are real by construction: -i(alpha/2)[beta e^{-i phi} - beta* e^{i phi}]") {
        const auto r = ensemble::cat_evolution(1.4, 0.45, 4, 0.15, 1.0, 2.2);
        const cxd z = -kI * (1.4 / 2.0) *
                      (r.beta_t * std::exp(cxd(0, -0.45)) -
                       std::conj(r.beta_t) * std::exp(cxd(0, 0.45)));
        REQUIRE(std::abs(z.imag()) < 1e-12);
        REQUIRE(r.phi1 == Approx(z.real()).margin(1e-12));
    }

    SECTION("materialized state matches the exact propagation at Delta = 0") {
        ModelParams p;
        p.n_atoms = 2;
        p.g = 0.2;
        FockBasis basis(40);
        const DenseOperator h = hilbert::build_h_ensemble(p, basis);
        const StateVector psi0 = ensemble::cat_full_state(1.0, kPi / 4.0, 2, 0.2, 1.0, 0.0, basis);
        for (double t : {1.0, 4.0, 10.0}) {
            const StateVector exact = oracle::exact_propagate(h, psi0, t);
            const StateVector analytic =
                ensemble::cat_full_state(1.0, kPi / 4.0, 2, 0.2, 1.0, t, basis);
            REQUIRE(oracle::fidelity(analytic, exact) >= 1.0 - 1e-7);
        }
    }

    SECTION("undersized cutoff is rejected on materialization only") {
        REQUIRE_NOTHROW(ensemble::cat_evolution(2.0, 0.5, 8, 0.5, 1.0, 3.0));
        FockBasis tiny(12);
        REQUIRE_THROWS_AS(ensemble::cat_field_state(2.0, 0.5, 8, 0.5, 1.0, 3.0, tiny),
                          TruncationError);
    }
}
