#include "coopnet/relay_select.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace coopnet {

Selection select_parc(const ChannelRealization& realization, int source) {
    if (source < 0 || source > 1) throw std::invalid_argument("bad source");
    const int nr = static_cast<int>(realization.rd.size());
    if (nr < 1) throw std::invalid_argument("no relays");
    Selection best{0, std::min(realization.sr[source][0], realization.rd[0])};
    for (int j = 1; j < nr; ++j) {
        double g = std::min(realization.sr[source][j], realization.rd[j]);
        if (g > best.gamma) best = {j, g};
    }
    return best;
}

Selection select_ncc(const ChannelRealization& realization) {
    const int nr = static_cast<int>(realization.rd.size());
    if (nr < 1) throw std::invalid_argument("no relays");
    auto eq = [&](int j) {
        return std::min({realization.sr[0][j], realization.sr[1][j],
                         realization.rd[j]});
    };
    Selection best{0, eq(0)};
    for (int j = 1; j < nr; ++j) {
        double g = eq(j);
        if (g > best.gamma) best = {j, g};
    }
    return best;
}

std::vector<std::pair<int, double>> selection_mgf_terms(
    const LinkBudget& budget, SelectionMode mode) {
    const int nr = budget.n_relays;
    if (nr > 16)
        throw std::invalid_argument("subset enumeration limited to 16 relays");
    // per-relay inverse mean of the equivalent single-hop channel
    std::vector<double> inv(nr);
    for (int j = 0; j < nr; ++j) {
        switch (mode) {
            case SelectionMode::ParcSource1:
                inv[j] = 1.0 / budget.sr[0][j] + 1.0 / budget.rd[j];
                break;
            case SelectionMode::ParcSource2:
                inv[j] = 1.0 / budget.sr[1][j] + 1.0 / budget.rd[j];
                break;
            case SelectionMode::Ncc:
                inv[j] = 1.0 / budget.sr[0][j] + 1.0 / budget.sr[1][j] +
                         1.0 / budget.rd[j];
                break;
        }
    }
    std::vector<std::pair<int, double>> terms;
    terms.reserve((1u << nr) - 1);
    for (unsigned mask = 1; mask < (1u << nr); ++mask) {
        double rate = 0.0;
        for (int j = 0; j < nr; ++j)
            if (mask & (1u << j)) rate += inv[j];
        int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
        terms.emplace_back(sign, 1.0 / rate);
    }
    return terms;
}

double mgf_selected(const LinkBudget& budget, SelectionMode mode, double s) {
    if (s < 0.0) throw std::invalid_argument("MGF argument must be >= 0");
    double v = 0.0;
    for (const auto& [sign, gbar] : selection_mgf_terms(budget, mode))
        v += sign / (1.0 + gbar * s);
    return v;
}

}  // namespace coopnet
