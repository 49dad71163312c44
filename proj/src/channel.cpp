#include "coopnet/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace coopnet {

LinkBudget LinkBudget::build(double snr_sd_db, int n_relays,
                             double pathloss_exponent, double relay_position) {
    if (n_relays < 1) throw std::invalid_argument("n_relays must be >= 1");
    if (!(relay_position > 0.0 && relay_position < 1.0))
        throw std::invalid_argument("relay_position must be in (0,1)");
    if (pathloss_exponent < 0.0)
        throw std::invalid_argument("pathloss_exponent must be >= 0");
    double base = db_to_linear(snr_sd_db);
    if (!(base > 0.0)) throw std::invalid_argument("non-positive base SNR");

    LinkBudget b;
    b.n_relays = n_relays;
    double g_sr = base * std::pow(relay_position, -pathloss_exponent);
    double g_rd = base * std::pow(1.0 - relay_position, -pathloss_exponent);
    for (int i = 0; i < 2; ++i) {
        b.sd[i] = base;
        b.sr[i].assign(n_relays, g_sr);
    }
    b.rd.assign(n_relays, g_rd);
    return b;
}

void LinkBudget::write_csv(std::ostream& os) const {
    os << "link,gamma_bar_db\n";
    for (int i = 0; i < 2; ++i)
        os << 'S' << (i + 1) << "D," << linear_to_db(sd[i]) << '\n';
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < n_relays; ++j)
            os << 'S' << (i + 1) << 'R' << (j + 1) << ','
               << linear_to_db(sr[i][j]) << '\n';
    for (int j = 0; j < n_relays; ++j)
        os << 'R' << (j + 1) << "D," << linear_to_db(rd[j]) << '\n';
}

namespace {

inline std::complex<double> draw_h(std::mt19937_64& rng) {
    // circularly-symmetric complex Gaussian, E{|h|^2} = 1
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

}  // namespace

ChannelRealization draw_realization(const LinkBudget& budget,
                                    std::mt19937_64& rng) {
    ChannelRealization r;
    for (int i = 0; i < 2; ++i) {
        r.h_sd[i] = draw_h(rng);
        r.sd[i] = budget.sd[i] * std::norm(r.h_sd[i]);
        r.h_sr[i].resize(budget.n_relays);
        r.sr[i].resize(budget.n_relays);
        for (int j = 0; j < budget.n_relays; ++j) {
            r.h_sr[i][j] = draw_h(rng);
            r.sr[i][j] = budget.sr[i][j] * std::norm(r.h_sr[i][j]);
        }
    }
    r.h_rd.resize(budget.n_relays);
    r.rd.resize(budget.n_relays);
    for (int j = 0; j < budget.n_relays; ++j) {
        r.h_rd[j] = draw_h(rng);
        r.rd[j] = budget.rd[j] * std::norm(r.h_rd[j]);
    }
    return r;
}

TxResult transmit(const BitVec& bits, double gamma, std::mt19937_64& rng) {
    if (gamma < 0.0) throw std::invalid_argument("negative SNR");
    double amp = std::sqrt(gamma);
    std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
    TxResult res;
    res.y.resize(bits.size());
    res.llr.resize(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        double x = bits[k] ? -1.0 : 1.0;
        res.y[k] = amp * x + noise(rng);
        res.llr[k] = 4.0 * amp * res.y[k];
    }
    return res;
}

}  // namespace coopnet
