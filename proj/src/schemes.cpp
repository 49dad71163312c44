#include "coopnet/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coopnet {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Parc: return "parc";
        case Scheme::Ncc: return "ncc";
        case Scheme::Ref1: return "ref1";
        case Scheme::Ref2: return "ref2";
        case Scheme::P2p: return "p2p";
        case Scheme::Uncoded: return "uncoded";
    }
    return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::Parc, Scheme::Ncc, Scheme::Ref1, Scheme::Ref2,
                     Scheme::P2p, Scheme::Uncoded})
        if (scheme_name(s) == name) return s;
    return std::nullopt;
}

namespace {

BitVec random_message(int K, std::mt19937_64& rng) {
    BitVec u(K);
    std::uint64_t word = 0;
    for (int i = 0; i < K; ++i) {
        if (i % 64 == 0) word = rng();
        u[i] = (word >> (i % 64)) & 1;
    }
    return u;
}

// first `count` entries of a random permutation of 0..n-1 (partial
// Fisher-Yates); used both for Theta and for the REF fragment partitions
std::vector<int> random_indices(int n, int count, std::mt19937_64& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

BitVec subset_bits(const BitVec& c, const std::vector<int>& idx) {
    BitVec out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = c[idx[i]];
    return out;
}

long count_errors(const BitVec& a, const BitVec& b) {
    long e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e += a[i] != b[i];
    return e;
}

}  // namespace

SchemeRunner::SchemeRunner(const SchemeConfig& cfg) : cfg_(cfg) {
    if (cfg.K < 1) throw std::invalid_argument("K must be >= 1");
    if (cfg.n_relays < 1 && cfg.scheme != Scheme::P2p &&
        cfg.scheme != Scheme::Uncoded)
        throw std::invalid_argument("n_relays must be >= 1");
    if (cfg.scheme != Scheme::Uncoded) {
        N_ = cfg.code.n_outputs() * (cfg.K + cfg.code.memory());
        if (cfg.scheme == Scheme::Ncc || cfg.scheme == Scheme::Ref2)
            compound_ = std::make_shared<const CompoundTrellis>(
                build_compound_code(cfg.code));
    } else {
        N_ = cfg.K;
    }
}

RoundResult SchemeRunner::run_round(const LinkBudget& budget,
                                    std::mt19937_64& rng) const {
    switch (cfg_.scheme) {
        case Scheme::Parc: return run_parc(budget, rng);
        case Scheme::Ncc: return run_ncc(budget, rng);
        case Scheme::Ref1: return run_ref1(budget, rng);
        case Scheme::Ref2: return run_ref2(budget, rng);
        case Scheme::P2p: return run_p2p(budget, rng);
        case Scheme::Uncoded: return run_uncoded(budget, rng);
    }
    throw std::logic_error("unknown scheme");
}

RoundResult SchemeRunner::run_parc(const LinkBudget& budget,
                                   std::mt19937_64& rng) const {
    RoundResult res;
    const ChannelRealization ch = draw_realization(budget, rng);
    const int L = N_ / 2;
    for (int i = 0; i < 2; ++i) {
        BitVec u = random_message(cfg_.K, rng);
        BitVec c = encode(u, cfg_.code);
        TxResult direct = transmit(c, ch.sd[i], rng);

        Selection sel = select_parc(ch, i);
        std::vector<int> theta = random_indices(N_, L, rng);
        TxResult relay_obs = transmit(subset_bits(c, theta), ch.sr[i][sel.relay], rng);
        BitVec relay_bits = relay_ml_detect(relay_obs.y);
        TxResult relayed = transmit(relay_bits, ch.rd[sel.relay], rng);

        double lambda = cmrc_lambda(ch.sr[i][sel.relay], ch.rd[sel.relay]);
        std::vector<double> combined =
            cmrc_combine(direct.llr, theta, relayed.llr, lambda);
        BcjrResult dec = bcjr_decode(combined, cfg_.code);

        res.bit_errors[i] = count_errors(dec.bits, u);
        res.bits[i] = cfg_.K;
        res.frame_error[i] = res.bit_errors[i] > 0;
        res.relayed_symbols += L;
    }
    return res;
}

RoundResult SchemeRunner::run_ncc(const LinkBudget& budget,
                                  std::mt19937_64& rng) const {
    RoundResult res;
    const ChannelRealization ch = draw_realization(budget, rng);
    BitVec u1 = random_message(cfg_.K, rng);
    BitVec u2 = random_message(cfg_.K, rng);
    BitVec c1 = encode(u1, cfg_.code);
    BitVec c2 = encode(u2, cfg_.code);
    TxResult d1 = transmit(c1, ch.sd[0], rng);
    TxResult d2 = transmit(c2, ch.sd[1], rng);

    Selection sel = select_ncc(ch);
    TxResult obs1 = transmit(c1, ch.sr[0][sel.relay], rng);
    TxResult obs2 = transmit(c2, ch.sr[1][sel.relay], rng);
    BitVec c_nc = xor_encode(relay_ml_detect(obs1.y), relay_ml_detect(obs2.y));
    TxResult relayed = transmit(c_nc, ch.rd[sel.relay], rng);

    std::vector<double> llr_nc =
        cfg_.ncc_scale_relay_llr
            ? ncc_relay_llr(relayed.llr, ch.rd[sel.relay],
                            ch.sr[0][sel.relay], ch.sr[1][sel.relay])
            : relayed.llr;
    JointDecodeResult dec = joint_decode_ncc(d1.llr, d2.llr, llr_nc, *compound_);

    res.bit_errors[0] = count_errors(dec.bits1, u1);
    res.bit_errors[1] = count_errors(dec.bits2, u2);
    res.bits = {cfg_.K, cfg_.K};
    res.frame_error = {res.bit_errors[0] > 0, res.bit_errors[1] > 0};
    res.relayed_symbols = N_;
    return res;
}

RoundResult SchemeRunner::run_ref1(const LinkBudget& budget,
                                   std::mt19937_64& rng) const {
    RoundResult res;
    const ChannelRealization ch = draw_realization(budget, rng);
    const int nr = budget.n_relays;
    const int frag = N_ / (2 * nr);
    for (int i = 0; i < 2; ++i) {
        BitVec u = random_message(cfg_.K, rng);
        BitVec c = encode(u, cfg_.code);
        TxResult direct = transmit(c, ch.sd[i], rng);

        // disjoint random fragments across relays
        std::vector<int> part = random_indices(N_, frag * nr, rng);
        std::vector<double> combined = direct.llr;
        for (int j = 0; j < nr; ++j) {
            std::vector<int> theta(part.begin() + j * frag,
                                   part.begin() + (j + 1) * frag);
            TxResult obs = transmit(subset_bits(c, theta), ch.sr[i][j], rng);
            TxResult relayed = transmit(relay_ml_detect(obs.y), ch.rd[j], rng);
            double lambda = cmrc_lambda(ch.sr[i][j], ch.rd[j]);
            combined = cmrc_combine(combined, theta, relayed.llr, lambda);
            res.relayed_symbols += frag;
        }
        BcjrResult dec = bcjr_decode(combined, cfg_.code);
        res.bit_errors[i] = count_errors(dec.bits, u);
        res.bits[i] = cfg_.K;
        res.frame_error[i] = res.bit_errors[i] > 0;
    }
    return res;
}

RoundResult SchemeRunner::run_ref2(const LinkBudget& budget,
                                   std::mt19937_64& rng) const {
    RoundResult res;
    const ChannelRealization ch = draw_realization(budget, rng);
    const int nr = budget.n_relays;
    const int frag = N_ / nr;
    BitVec u1 = random_message(cfg_.K, rng);
    BitVec u2 = random_message(cfg_.K, rng);
    BitVec c1 = encode(u1, cfg_.code);
    BitVec c2 = encode(u2, cfg_.code);
    TxResult d1 = transmit(c1, ch.sd[0], rng);
    TxResult d2 = transmit(c2, ch.sd[1], rng);

    std::vector<int> part = random_indices(N_, frag * nr, rng);
    std::vector<double> llr_nc(N_, 0.0);
    for (int j = 0; j < nr; ++j) {
        std::vector<int> theta(part.begin() + j * frag,
                               part.begin() + (j + 1) * frag);
        TxResult obs1 = transmit(subset_bits(c1, theta), ch.sr[0][j], rng);
        TxResult obs2 = transmit(subset_bits(c2, theta), ch.sr[1][j], rng);
        BitVec frag_nc =
            xor_encode(relay_ml_detect(obs1.y), relay_ml_detect(obs2.y));
        TxResult relayed = transmit(frag_nc, ch.rd[j], rng);
        std::vector<double> scaled =
            cfg_.ncc_scale_relay_llr
                ? ncc_relay_llr(relayed.llr, ch.rd[j], ch.sr[0][j], ch.sr[1][j])
                : relayed.llr;
        for (std::size_t t = 0; t < theta.size(); ++t)
            llr_nc[theta[t]] = scaled[t];
        res.relayed_symbols += frag;
    }
    JointDecodeResult dec = joint_decode_ncc(d1.llr, d2.llr, llr_nc, *compound_);
    res.bit_errors[0] = count_errors(dec.bits1, u1);
    res.bit_errors[1] = count_errors(dec.bits2, u2);
    res.bits = {cfg_.K, cfg_.K};
    res.frame_error = {res.bit_errors[0] > 0, res.bit_errors[1] > 0};
    return res;
}

RoundResult SchemeRunner::run_p2p(const LinkBudget& budget,
                                  std::mt19937_64& rng) const {
    RoundResult res;
    const ChannelRealization ch = draw_realization(budget, rng);
    for (int i = 0; i < 2; ++i) {
        BitVec u = random_message(cfg_.K, rng);
        BitVec c = encode(u, cfg_.code);
        TxResult direct = transmit(c, ch.sd[i], rng);
        BcjrResult dec = bcjr_decode(direct.llr, cfg_.code);
        res.bit_errors[i] = count_errors(dec.bits, u);
        res.bits[i] = cfg_.K;
        res.frame_error[i] = res.bit_errors[i] > 0;
    }
    return res;
}

RoundResult SchemeRunner::run_uncoded(const LinkBudget& budget,
                                      std::mt19937_64& rng) const {
    // i.i.d. Rayleigh fading per symbol, hard BPSK decisions
    RoundResult res;
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    long errors = 0;
    for (int k = 0; k < cfg_.K; ++k) {
        std::uint8_t bit = static_cast<std::uint8_t>(rng() & 1);
        double hr = gauss(rng), hi = gauss(rng);
        double gamma = budget.sd[0] * (hr * hr + hi * hi);
        double y = std::sqrt(gamma) * (bit ? -1.0 : 1.0) + gauss(rng);
        errors += (y < 0.0 ? 1 : 0) != bit;
    }
    res.bit_errors[0] = errors;
    res.bits[0] = cfg_.K;
    res.frame_error[0] = errors > 0;
    return res;
}

}  // namespace coopnet
