// specfun.hpp — Associated Laguerre polynomials and displaced-number-state matrix elements

#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "tla/types.hpp"

namespace tla::specfun {

// L_n^{(k)}(x) by upward recurrence in n at fixed k:
//   (n+1) L_{n+1}^{(k)} = (2n+k+1-x) L_n^{(k)} - (n+k) L_{n-1}^{(k)}
// Negative k with k >= -n is mapped through
//   L_n^{(-m)}(x) = (-x)^m (n-m)!/n! L_{n-m}^{(m)}(x).
inline double laguerre(int n, int k, double x) {
    if (n < 0) throw std::domain_error("laguerre: n must be >= 0");
    if (k < -n) throw std::domain_error("laguerre: k must be >= -n");
    if (k < 0) {
        const int m = -k;
        double factor = 1.0;
        for (int j = n - m + 1; j <= n; ++j) factor /= static_cast<double>(j);
        return std::pow(-x, m) * factor * laguerre(n - m, m, x);
    }
    double p0 = 1.0;
    if (n == 0) return p0;
    double p1 = 1.0 + k - x;
    for (int c = 1; c < n; ++c) {
        const double p2 = ((2.0 * c + k + 1.0 - x) * p1 - (c + k) * p0) / (c + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

inline double laguerre(int n, double x) { return laguerre(n, 0, x); }

// Scaled displaced-state elements along one diagonal:
//   e_n^{(d)} = sqrt(n!/(n+d)!) s^d e^{-x/2} L_n^{(d)}(x),   x = s^2, s >= 0,
// i.e. |<n+d| D(zeta) |n>| for |zeta| = s. Bounded by one, so the three-term
// recurrence
//   sqrt((n+1)(n+d+1)) e_{n+1} = (2n+d+1-x) e_n - sqrt(n(n+d)) e_{n-1}
// keeps absolute errors at machine level (the parasitic solution grows only
// polynomially), unlike evaluating L_n^{(d)} and rescaling afterwards.
inline void displaced_diagonal_scaled(int d, double x, int count, double* out) {
    if (x == 0.0) {
        for (int n = 0; n < count; ++n) out[n] = d == 0 ? 1.0 : 0.0;
        return;
    }
    const double log_e0 = 0.5 * d * std::log(x) - 0.5 * x - 0.5 * std::lgamma(d + 1.0);
    double prev = std::exp(log_e0);
    if (count > 0) out[0] = prev;
    if (count == 1) return;
    double cur = prev * (1.0 + d - x) / std::sqrt(d + 1.0);
    out[1] = cur;
    for (int n = 1; n + 1 < count; ++n) {
        const double next = ((2.0 * n + d + 1.0 - x) * cur -
                             std::sqrt(double(n) * (n + d)) * prev) /
                            std::sqrt(double(n + 1) * (n + 1 + d));
        prev = cur;
        cur = next;
        out[n + 1] = cur;
    }
}

// Matrix element <l| e^{beta (a - a^dag)} |n> for real beta.
// For l >= n this is sqrt(n!/l!) (-beta)^{l-n} e^{-beta^2/2} L_n^{(l-n)}(beta^2);
// l < n follows from <l|e^{beta(a-a^dag)}|n> = <n|e^{-beta(a-a^dag)}|l>.
inline double displaced_element_real(int l, int n, double beta) {
    if (l < 0 || n < 0) throw std::domain_error("displaced_element_real: indices must be >= 0");
    if (l < n) return displaced_element_real(n, l, -beta);
    if (beta == 0.0) return l == n ? 1.0 : 0.0;
    const int d = l - n;
    std::vector<double> diag(n + 1);
    displaced_diagonal_scaled(d, beta * beta, n + 1, diag.data());
    const double sign = (beta > 0.0 && (d % 2 != 0)) ? -1.0 : 1.0;  // (-beta)^{l-n}
    return sign * diag[n];
}

// Query for <l| e^{(g/omega) lambda (a - a^dag)} |n>, lambda = +-1.
struct DisplacedElementQuery {
    int l = 0;
    int n = 0;
    int lambda = 1;
    double g_over_omega = 0.0;

    void validate() const {
        if (l < 0 || n < 0) throw std::domain_error("DisplacedElementQuery: indices must be >= 0");
        if (lambda != 1 && lambda != -1)
            throw std::domain_error("DisplacedElementQuery: lambda must be +-1");
        if (g_over_omega < 0.0)
            throw std::domain_error("DisplacedElementQuery: g_over_omega must be >= 0");
    }
};

inline double displaced_fock_element(const DisplacedElementQuery& q) {
    q.validate();
    return displaced_element_real(q.l, q.n, q.lambda * q.g_over_omega);
}

// Full table T(l, n) = <l| e^{beta (a - a^dag)} |n> on a dim-dimensional cutoff.
// One scaled-diagonal recurrence per superscript; O(dim^2) total.
inline RealMatrix displaced_element_table(double beta, int dim) {
    if (dim < 1) throw std::domain_error("displaced_element_table: dim must be >= 1");
    RealMatrix t(dim, dim);
    if (beta == 0.0) {
        t.setIdentity();
        return t;
    }
    const double x = beta * beta;
    std::vector<double> diag(dim);
    for (int d = 0; d < dim; ++d) {
        displaced_diagonal_scaled(d, x, dim - d, diag.data());
        const double sign_upper = (beta > 0.0 && (d % 2 != 0)) ? -1.0 : 1.0;
        const double sign_lower = (beta < 0.0 && (d % 2 != 0)) ? -1.0 : 1.0;
        for (int n = 0; n + d < dim; ++n) {
            t(n + d, n) = sign_upper * diag[n];
            t(n, n + d) = sign_lower * diag[n];
        }
    }
    return t;
}

} // namespace tla::specfun
