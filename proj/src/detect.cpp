#include "coopnet/detect.hpp"

#include <algorithm>
#include <stdexcept>

namespace coopnet {

BitVec relay_ml_detect(const std::vector<double>& y) {
    BitVec bits(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) bits[k] = y[k] < 0.0 ? 1 : 0;
    return bits;
}

double cmrc_lambda(double gamma_sr, double gamma_rd) {
    if (gamma_sr < 0.0 || gamma_rd < 0.0)
        throw std::invalid_argument("negative SNR");
    if (gamma_rd == 0.0) return 0.0;
    return std::min(gamma_sr, gamma_rd) / gamma_rd;
}

std::vector<double> cmrc_combine(const std::vector<double>& direct_llr,
                                 const std::vector<int>& theta,
                                 const std::vector<double>& relayed_llr,
                                 double lambda) {
    if (theta.size() != relayed_llr.size())
        throw std::invalid_argument("theta / relayed LLR length mismatch");
    std::vector<double> combined = direct_llr;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        int k = theta[i];
        if (k < 0 || k >= static_cast<int>(direct_llr.size()))
            throw std::out_of_range("relayed index out of range");
        combined[k] += lambda * relayed_llr[i];
    }
    return combined;
}

BitVec xor_encode(const BitVec& c1_hat, const BitVec& c2_hat) {
    if (c1_hat.size() != c2_hat.size())
        throw std::invalid_argument("XOR operand length mismatch");
    BitVec out(c1_hat.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (c1_hat[k] ^ c2_hat[k]) & 1;
    return out;
}

std::vector<double> ncc_relay_llr(const std::vector<double>& relayed_llr,
                                  double gamma_rd, double gamma_s1r,
                                  double gamma_s2r) {
    if (gamma_rd < 0.0 || gamma_s1r < 0.0 || gamma_s2r < 0.0)
        throw std::invalid_argument("negative SNR");
    double lambda = gamma_rd == 0.0
                        ? 0.0
                        : std::min({gamma_s1r, gamma_s2r, gamma_rd}) / gamma_rd;
    std::vector<double> out(relayed_llr.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = lambda * relayed_llr[k];
    return out;
}

}  // namespace coopnet
