#pragma once

#include <map>
#include <utility>
#include <vector>

#include "coopnet/code.hpp"
#include "coopnet/relay_select.hpp"

namespace coopnet {

/// Gaussian tail probability.
double q_function(double x);

/// (1/pi) int_0^{pi/2} sin^4 / ((sin^2+a)(sin^2+b)) dtheta, closed form.
/// Near-coincident arguments are routed to quadrature of the integrand.
double i1(double a, double b);

/// Three-factor counterpart of i1 (sin^6 over three poles).
double i2(double a, double b, double c);

/// A fading block entering the pairwise-error MGF product. The block MGF is
/// sum_j sign_j / (1 + weight * gamma_bar_j * s); plain exponential blocks
/// have a single +1 term.
struct MgfFactor {
    double weight = 0.0;
    std::vector<std::pair<int, double>> terms;  // (sign, gamma_bar)

    static MgfFactor exponential(double weight, double gamma_bar) {
        return {weight, {{1, gamma_bar}}};
    }
};

/// Independent oracle: adaptive quadrature of
/// (1/pi) int_0^{pi/2} prod_i MGF_i(1/sin^2) dtheta.
double mgf_quadrature_oracle(const std::vector<MgfFactor>& factors,
                             double abs_tol = 1e-14);

/// Hypergeometric probability of d2 relayed weights out of d, with L relayed
/// positions among N.
double pattern_prob_parc(int d, int d2, int N, int L);

/// PARC pairwise error probability averaged over fading (Theorem 1 cases).
double upep_parc(int d, int d2, const LinkBudget& budget, int source = 0);

/// NCC pairwise error probability for pattern (d1, d2, dR) (Theorem 3 cases).
/// Patterns with two or more zero entries are rejected.
double upep_ncc(int d1, int d2, int dr, const LinkBudget& budget);

struct BerBoundResult {
    std::map<int, double> per_d;  // d -> contribution (raw convention)
    double total = 0.0;           // standard per-bit union bound
    double per_info_bit = 0.0;    // total / K
    int d_max = 0;
};

/// Union bound on PARC BER: sum_d w(d) sum_d2 p(D_d) UPEP(d, d2).
/// N is the codeword length in symbols; L = N/2 relayed positions.
BerBoundResult ber_bound_parc(const DistanceSpectrum& spectrum,
                              const LinkBudget& budget, int N, int K,
                              int source = 0);

/// Union bound on NCC BER for one source, with the leading 1/2 factor:
/// (1/2) sum_{W_d} w_i(W_d) UPEP(d | W_d).
BerBoundResult ber_bound_ncc(const CompoundSpectrum& spectrum,
                             const LinkBudget& budget, int source, int K);

int asymptotic_diversity_parc(int d1, int d2, int n_relays);
int asymptotic_diversity_ncc(int d1, int d2, int dr, int n_relays);

/// Local negative slope of log BER vs log SNR at interior grid points
/// (central differences). Input curve: (gamma_bar dB, BER), sorted, BER > 0.
std::vector<std::pair<double, double>> instantaneous_diversity(
    const std::vector<std::pair<double, double>>& curve);

}  // namespace coopnet
