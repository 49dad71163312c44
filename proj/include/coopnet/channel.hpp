#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "coopnet/code.hpp"

namespace coopnet {

/// Average per-link SNRs (linear) for the two-source, n-relay, one-destination
/// topology. Noise is normalized to unit variance; transmit power and pathloss
/// are folded into the averages.
struct LinkBudget {
    int n_relays = 0;
    std::array<double, 2> sd{};                 // source i -> destination
    std::array<std::vector<double>, 2> sr;      // source i -> relay j
    std::vector<double> rd;                     // relay j -> destination

    /// Symmetric geometry: unit source-destination distance, relays on the
    /// line at relay_position from the sources. Per-link average SNR is the
    /// base SNR scaled by distance^(-pathloss_exponent).
    static LinkBudget build(double snr_sd_db, int n_relays,
                            double pathloss_exponent = 3.5,
                            double relay_position = 0.5);

    void write_csv(std::ostream& os) const;
};

/// One cooperation period of block fading: every link gets a single complex
/// Gaussian coefficient h (unit variance) and gamma = gamma_bar * |h|^2.
struct ChannelRealization {
    std::array<std::complex<double>, 2> h_sd{};
    std::array<std::vector<std::complex<double>>, 2> h_sr;
    std::vector<std::complex<double>> h_rd;
    std::array<double, 2> sd{};
    std::array<std::vector<double>, 2> sr;
    std::vector<double> rd;
};

ChannelRealization draw_realization(const LinkBudget& budget,
                                    std::mt19937_64& rng);

/// BPSK over the real sufficient statistic: y = sqrt(gamma)*x + n with
/// n ~ N(0, 1/2), mapping 0 -> +1, 1 -> -1. llr[k] = 4*sqrt(gamma)*y[k]
/// (positive = bit 0 more likely).
struct TxResult {
    std::vector<double> y;
    std::vector<double> llr;
};

TxResult transmit(const BitVec& bits, double gamma, std::mt19937_64& rng);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace coopnet
