#pragma once

#include <utility>
#include <vector>

#include "coopnet/channel.hpp"

namespace coopnet {

struct Selection {
    int relay = 0;    // 0-based index; ties broken by lowest index
    double gamma = 0.0;
};

/// Max-min selection for PARC: argmax_j min(gamma_SRj, gamma_RjD) for the
/// given source.
Selection select_parc(const ChannelRealization& realization, int source);

/// Max-min selection for NCC: argmax_j min(gamma_S1Rj, gamma_S2Rj, gamma_RjD).
Selection select_ncc(const ChannelRealization& realization);

enum class SelectionMode { ParcSource1, ParcSource2, Ncc };

/// Inclusion-exclusion terms of the selected equivalent channel's MGF: one
/// (sign, gamma_bar_S) pair per non-empty relay subset S, where
/// 1/gamma_bar_S sums the constituent-link inverse means over S and
/// sign = (-1)^(|S|+1). MGF(s) = sum sign / (1 + gamma_bar_S * s).
std::vector<std::pair<int, double>> selection_mgf_terms(
    const LinkBudget& budget, SelectionMode mode);

double mgf_selected(const LinkBudget& budget, SelectionMode mode, double s);

}  // namespace coopnet
