#pragma once

#include <vector>

#include "coopnet/code.hpp"

namespace coopnet {

/// Per-symbol ML decision on coherent BPSK statistics: bit 0 if y >= 0.
BitVec relay_ml_detect(const std::vector<double>& y);

/// C-MRC weight lambda = min(gamma_SR, gamma_RD) / gamma_RD, in [0, 1].
/// gamma_RD = 0 returns 0 (relayed branch dropped).
double cmrc_lambda(double gamma_sr, double gamma_rd);

/// Combined LLRs: direct-path LLR everywhere, plus lambda-weighted relayed
/// LLR at the relayed indices theta. theta[i] is the codeword position of
/// relayed_llr[i].
std::vector<double> cmrc_combine(const std::vector<double>& direct_llr,
                                 const std::vector<int>& theta,
                                 const std::vector<double>& relayed_llr,
                                 double lambda);

BitVec xor_encode(const BitVec& c1_hat, const BitVec& c2_hat);

/// LLRs of the network-coded stream, scaled by
/// lambda_NC = min(gamma_S1R, gamma_S2R, gamma_RD) / gamma_RD.
std::vector<double> ncc_relay_llr(const std::vector<double>& relayed_llr,
                                  double gamma_rd, double gamma_s1r,
                                  double gamma_s2r);

}  // namespace coopnet
