#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coopnet/schemes.hpp"

namespace coopnet {

struct CampaignConfig {
    std::vector<Scheme> schemes{Scheme::Parc};
    std::vector<std::string> codes{"133,165,171"};  // octal generator lists
    std::vector<int> n_relays{2};
    std::vector<double> snr_grid_db{0, 2, 4, 6, 8, 10};
    int K = 1024;
    long min_bit_errors = 100;
    long max_packets = 200000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    double pathloss_exponent = 3.5;
    double relay_position = 0.5;
    bool ncc_scale_relay_llr = true;
};

struct BerRecord {
    std::string scheme;
    std::string code;
    int n_relays = 0;
    double snr_db = 0.0;
    long packets = 0;
    long bits = 0;
    long bit_errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;  // half-width, normal approximation of the binomial
    double seconds = 0.0;
    bool reached_min_errors = false;
};

/// Runs every (scheme, code, n_relays, snr) cell until min_bit_errors or
/// max_packets. Per-trial rng stream = hash(seed, cell, trial); packets are
/// consumed in fixed-size batches so results do not depend on thread count.
std::vector<BerRecord> run_campaign(const CampaignConfig& cfg,
                                    std::ostream* progress = nullptr);

/// Fixed column order: scheme,code,n_relays,snr_db,packets,bits,bit_errors,
/// ber,ci95,seconds. Comment lines (prefixed '#') may precede the header.
void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records,
                   const std::vector<std::string>& comments = {});

std::vector<BerRecord> read_ber_csv(std::istream& is);

/// Log-linear interpolation of the SNR at which the curve crosses target_ber.
/// Records must belong to one curve, sorted by snr_db ascending.
std::optional<double> estimate_crossing(const std::vector<BerRecord>& records,
                                        double target_ber);

/// SNR grid string "start:step:stop" (dB) -> sorted grid.
std::vector<double> parse_snr_grid(const std::string& spec);

}  // namespace coopnet
