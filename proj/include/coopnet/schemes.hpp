#pragma once

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "coopnet/channel.hpp"
#include "coopnet/code.hpp"
#include "coopnet/detect.hpp"
#include "coopnet/relay_select.hpp"

namespace coopnet {

enum class Scheme { Parc, Ncc, Ref1, Ref2, P2p, Uncoded };

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct SchemeConfig {
    Scheme scheme = Scheme::Parc;
    CodeSpec code;
    int n_relays = 1;
    int K = 1024;                     // info bits per source
    bool ncc_scale_relay_llr = true;  // lambda_NC weighting of the NC stream
};

struct RoundResult {
    std::array<long, 2> bit_errors{};
    std::array<long, 2> bits{};
    std::array<bool, 2> frame_error{};
    long relayed_symbols = 0;  // total across all relays in the period
};

/// One cooperation period of a scheme. Trellises are built once at
/// construction and never mutated, so a runner is safe to share across
/// concurrent trials (each with its own rng stream).
class SchemeRunner {
  public:
    explicit SchemeRunner(const SchemeConfig& cfg);

    RoundResult run_round(const LinkBudget& budget, std::mt19937_64& rng) const;

    const SchemeConfig& config() const { return cfg_; }
    int codeword_length() const { return N_; }

  private:
    RoundResult run_parc(const LinkBudget&, std::mt19937_64&) const;
    RoundResult run_ncc(const LinkBudget&, std::mt19937_64&) const;
    RoundResult run_ref1(const LinkBudget&, std::mt19937_64&) const;
    RoundResult run_ref2(const LinkBudget&, std::mt19937_64&) const;
    RoundResult run_p2p(const LinkBudget&, std::mt19937_64&) const;
    RoundResult run_uncoded(const LinkBudget&, std::mt19937_64&) const;

    SchemeConfig cfg_;
    int N_ = 0;  // codeword symbols incl. tail
    std::shared_ptr<const CompoundTrellis> compound_;
};

}  // namespace coopnet
