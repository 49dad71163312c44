#include "coopnet/code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace coopnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double maxstar(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

inline int bit_width_u32(std::uint32_t x) {
    return x == 0 ? 0 : 32 - std::countl_zero(x);
}

}  // namespace

CodeSpec CodeSpec::from_octal(const std::string& text) {
    CodeSpec code;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::uint32_t g = 0;
        for (char c : tok) {
            if (c == ' ') continue;
            if (c < '0' || c > '7')
                throw std::invalid_argument("invalid octal generator: " + tok);
            g = g * 8 + static_cast<std::uint32_t>(c - '0');
        }
        if (g == 0) throw std::invalid_argument("zero generator polynomial");
        code.generators.push_back(g);
    }
    if (code.generators.empty())
        throw std::invalid_argument("empty generator list: " + text);
    for (std::uint32_t g : code.generators)
        code.constraint_length = std::max(code.constraint_length, bit_width_u32(g));
    return code;
}

std::string CodeSpec::octal_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) os << ',';
        os << std::oct << generators[i] << std::dec;
    }
    return os.str();
}

Trellis Trellis::build(const CodeSpec& code) {
    Trellis t;
    const int m = code.memory();
    t.n_states = 1 << m;
    t.n_out = code.n_outputs();
    t.next.resize(t.n_states);
    t.out.resize(t.n_states);
    for (int s = 0; s < t.n_states; ++s) {
        for (int u = 0; u < 2; ++u) {
            // register: current input in the high bit, older bits below
            std::uint32_t reg = (static_cast<std::uint32_t>(u) << m) |
                                static_cast<std::uint32_t>(s);
            std::uint32_t out = 0;
            for (int j = 0; j < t.n_out; ++j)
                out |= static_cast<std::uint32_t>(
                           std::popcount(code.generators[j] & reg) & 1)
                       << j;
            t.next[s][u] = reg >> 1;
            t.out[s][u] = out;
        }
    }
    return t;
}

BitVec encode(const BitVec& data_bits, const CodeSpec& code) {
    const Trellis trellis = Trellis::build(code);
    const int m = code.memory();
    const int n = code.n_outputs();
    BitVec out;
    out.reserve(n * (data_bits.size() + m));
    std::uint32_t s = 0;
    auto step = [&](int u) {
        std::uint32_t o = trellis.out[s][u];
        for (int j = 0; j < n; ++j) out.push_back((o >> j) & 1);
        s = trellis.next[s][u];
    };
    for (std::uint8_t b : data_bits) step(b & 1);
    for (int i = 0; i < m; ++i) step(0);  // zero tail
    return out;
}

BcjrResult bcjr_decode(const std::vector<double>& channel_llrs,
                       const CodeSpec& code) {
    const Trellis trellis = Trellis::build(code);
    const int n = code.n_outputs();
    const int m = code.memory();
    if (channel_llrs.size() % n != 0)
        throw std::invalid_argument("LLR vector length not a multiple of n");
    const int T = static_cast<int>(channel_llrs.size()) / n;
    const int K = T - m;
    if (K < 1) throw std::invalid_argument("LLR vector too short");
    const int S = trellis.n_states;

    // branch metric for (step, state, input); positive LLR favors coded bit 0
    auto gamma = [&](int t, int s, int u) {
        double g = 0.0;
        std::uint32_t o = trellis.out[s][u];
        for (int j = 0; j < n; ++j) {
            double l = channel_llrs[t * n + j];
            g += ((o >> j) & 1) ? -0.5 * l : 0.5 * l;
        }
        return g;
    };

    std::vector<double> alpha(static_cast<std::size_t>(T + 1) * S, kNegInf);
    alpha[0] = 0.0;  // zero-tail: starts and ends in state 0
    for (int t = 0; t < T; ++t) {
        const int u_max = (t < K) ? 2 : 1;  // tail forces input 0
        double* a = &alpha[static_cast<std::size_t>(t) * S];
        double* an = &alpha[static_cast<std::size_t>(t + 1) * S];
        for (int s = 0; s < S; ++s) {
            if (a[s] == kNegInf) continue;
            for (int u = 0; u < u_max; ++u) {
                int ns = trellis.next[s][u];
                an[ns] = maxstar(an[ns], a[s] + gamma(t, s, u));
            }
        }
        double mx = *std::max_element(an, an + S);
        for (int s = 0; s < S; ++s) an[s] -= mx;
    }

    std::vector<double> beta(S, kNegInf), beta_prev(S);
    beta[0] = 0.0;
    BcjrResult res;
    res.bits.assign(K, 0);
    res.info_llr.assign(K, 0.0);
    for (int t = T - 1; t >= 0; --t) {
        const int u_max = (t < K) ? 2 : 1;
        const double* a = &alpha[static_cast<std::size_t>(t) * S];
        double m0 = kNegInf, m1 = kNegInf;
        std::fill(beta_prev.begin(), beta_prev.end(), kNegInf);
        for (int s = 0; s < S; ++s) {
            for (int u = 0; u < u_max; ++u) {
                int ns = trellis.next[s][u];
                if (beta[ns] == kNegInf) continue;
                double g = gamma(t, s, u) + beta[ns];
                beta_prev[s] = maxstar(beta_prev[s], g);
                if (t < K) {
                    double p = a[s] + g;
                    (u == 0 ? m0 : m1) = maxstar(u == 0 ? m0 : m1, p);
                }
            }
        }
        if (t < K) {
            res.info_llr[t] = m0 - m1;
            res.bits[t] = res.info_llr[t] < 0.0 ? 1 : 0;
        }
        double mx = *std::max_element(beta_prev.begin(), beta_prev.end());
        for (int s = 0; s < S; ++s) beta_prev[s] -= mx;
        beta.swap(beta_prev);
    }
    return res;
}

namespace {

struct EventNode {
    long long cnt = 0;
    long long wsum = 0;  // total input weight over all paths in this node
};

}  // namespace

DistanceSpectrum compute_distance_spectrum(const CodeSpec& code, int d_max) {
    if (d_max < 1) throw std::invalid_argument("d_max must be >= 1");
    const Trellis trellis = Trellis::build(code);
    const int S = trellis.n_states;
    const int W = d_max + 1;

    DistanceSpectrum spec;
    spec.d_max = d_max;

    // frontier[s*W + d]: paths currently in state s with accumulated output
    // weight d, not yet returned to the zero state
    std::vector<EventNode> cur(static_cast<std::size_t>(S) * W);
    std::vector<EventNode> nxt(cur.size());

    // diverge from the zero state with input 1
    {
        int d0 = std::popcount(trellis.out[0][1]);
        if (d0 <= d_max) {
            int ns = trellis.next[0][1];
            cur[static_cast<std::size_t>(ns) * W + d0] = {1, 1};
        }
    }

    const long kMaxSteps = 200000;  // trips only on catastrophic codes
    for (long step = 1; step <= kMaxSteps; ++step) {
        bool any = false;
        std::fill(nxt.begin(), nxt.end(), EventNode{});
        for (int s = 1; s < S; ++s) {  // state 0 would have ended the event
            for (int d = 0; d <= d_max; ++d) {
                const EventNode& node = cur[static_cast<std::size_t>(s) * W + d];
                if (node.cnt == 0) continue;
                for (int u = 0; u < 2; ++u) {
                    int nd = d + std::popcount(trellis.out[s][u]);
                    if (nd > d_max) continue;
                    int ns = trellis.next[s][u];
                    long long w = node.wsum + static_cast<long long>(u) * node.cnt;
                    if (ns == 0) {
                        spec.entries[nd] += w;
                        spec.event_count[nd] += node.cnt;
                        int len = static_cast<int>(step + 1);
                        auto it = spec.max_event_len.find(nd);
                        if (it == spec.max_event_len.end() || it->second < len)
                            spec.max_event_len[nd] = len;
                    } else {
                        EventNode& t = nxt[static_cast<std::size_t>(ns) * W + nd];
                        t.cnt += node.cnt;
                        t.wsum += w;
                        any = true;
                    }
                }
            }
        }
        cur.swap(nxt);
        if (!any) break;
        if (step == kMaxSteps)
            throw std::runtime_error(
                "distance spectrum search did not terminate (catastrophic "
                "code?)");
    }

    if (spec.entries.empty())
        throw std::runtime_error("no error event found with d <= " +
                                 std::to_string(d_max));
    spec.f = spec.entries.begin()->first;
    return spec;
}

CompoundTrellis build_compound_code(const CodeSpec& g) {
    const Trellis base = Trellis::build(g);
    CompoundTrellis ct;
    ct.g = g;
    const int m = g.memory();
    const int Sb = base.n_states;
    ct.n_states = Sb * Sb;
    ct.n_out = g.n_outputs();
    ct.next.resize(ct.n_states);
    ct.label.resize(ct.n_states);
    for (int s1 = 0; s1 < Sb; ++s1) {
        for (int s2 = 0; s2 < Sb; ++s2) {
            int s = (s1 << m) | s2;
            for (int u = 0; u < 4; ++u) {
                int u1 = (u >> 1) & 1, u2 = u & 1;  // source 1 is high bit
                std::uint32_t o1 = base.out[s1][u1];
                std::uint32_t o2 = base.out[s2][u2];
                ct.next[s][u] = (base.next[s1][u1] << m) | base.next[s2][u2];
                ct.label[s][u] = o1 | (o2 << ct.n_out) | ((o1 ^ o2) << (2 * ct.n_out));
            }
        }
    }
    return ct;
}

namespace {

struct CompoundNode {
    long long cnt = 0;
    long long w1 = 0;
    long long w2 = 0;
};

// packed key: state (low 24 bits) | d1 | d2 | dr (6 bits each)
inline std::uint64_t pack_key(int s, int d1, int d2, int dr) {
    return static_cast<std::uint64_t>(s) |
           (static_cast<std::uint64_t>(d1) << 24) |
           (static_cast<std::uint64_t>(d2) << 32) |
           (static_cast<std::uint64_t>(dr) << 40);
}

}  // namespace

CompoundSpectrum compute_compound_spectrum(const CompoundTrellis& trellis,
                                           int d_max) {
    const DistanceSpectrum single =
        compute_distance_spectrum(trellis.g, (d_max + 1) / 2);
    if (d_max < 2 * single.f)
        throw std::invalid_argument("d_max below 2f = " +
                                    std::to_string(2 * single.f));
    const int n = trellis.n_out;

    std::map<std::array<int, 3>, CompoundPattern> found;
    std::unordered_map<std::uint64_t, CompoundNode> cur, nxt;
    cur.reserve(1 << 16);

    auto block_weights = [&](std::uint32_t lab) {
        std::uint32_t mask = (1u << n) - 1;
        return std::array<int, 3>{std::popcount(lab & mask),
                                  std::popcount((lab >> n) & mask),
                                  std::popcount((lab >> (2 * n)) & mask)};
    };

    auto emit = [&](int d1, int d2, int dr, const CompoundNode& node) {
        CompoundPattern& p = found[{d1, d2, dr}];
        p.d1 = d1;
        p.d2 = d2;
        p.dr = dr;
        p.count += node.cnt;
        p.w1 += node.w1;
        p.w2 += node.w2;
    };

    // diverge from the zero compound state with any non-zero input pair
    for (int u = 1; u < 4; ++u) {
        auto w = block_weights(trellis.label[0][u]);
        int d = w[0] + w[1] + w[2];
        if (d > d_max) continue;
        CompoundNode node{1, (u >> 1) & 1, u & 1};
        int ns = trellis.next[0][u];
        if (ns == 0)
            emit(w[0], w[1], w[2], node);
        else {
            CompoundNode& t = cur[pack_key(ns, w[0], w[1], w[2])];
            t.cnt += node.cnt;
            t.w1 += node.w1;
            t.w2 += node.w2;
        }
    }

    const long kMaxSteps = 200000;
    for (long step = 1; !cur.empty(); ++step) {
        if (step > kMaxSteps)
            throw std::runtime_error(
                "compound spectrum search did not terminate");
        nxt.clear();
        for (const auto& [key, node] : cur) {
            int s = static_cast<int>(key & 0xffffff);
            int d1 = static_cast<int>((key >> 24) & 0x3f);
            int d2 = static_cast<int>((key >> 32) & 0x3f);
            int dr = static_cast<int>((key >> 40) & 0x3f);
            for (int u = 0; u < 4; ++u) {
                auto w = block_weights(trellis.label[s][u]);
                int nd1 = d1 + w[0], nd2 = d2 + w[1], ndr = dr + w[2];
                if (nd1 + nd2 + ndr > d_max) continue;
                CompoundNode out{node.cnt, node.w1 + ((u >> 1) & 1) * node.cnt,
                                 node.w2 + (u & 1) * node.cnt};
                int ns = trellis.next[s][u];
                if (ns == 0) {
                    emit(nd1, nd2, ndr, out);
                } else {
                    CompoundNode& t = nxt[pack_key(ns, nd1, nd2, ndr)];
                    t.cnt += out.cnt;
                    t.w1 += out.w1;
                    t.w2 += out.w2;
                }
            }
        }
        cur.swap(nxt);
    }

    CompoundSpectrum spec;
    spec.d_max = d_max;
    for (auto& [k, p] : found) spec.entries.push_back(p);
    std::sort(spec.entries.begin(), spec.entries.end(),
              [](const CompoundPattern& a, const CompoundPattern& b) {
                  return std::array<int, 4>{a.d(), a.d1, a.d2, a.dr} <
                         std::array<int, 4>{b.d(), b.d1, b.d2, b.dr};
              });
    if (spec.entries.empty())
        throw std::runtime_error("compound spectrum search found no events");
    spec.min_distance = spec.entries.front().d();
    if (spec.min_distance != 2 * single.f)
        throw std::runtime_error("compound minimum distance " +
                                 std::to_string(spec.min_distance) +
                                 " != 2f = " + std::to_string(2 * single.f));
    return spec;
}

JointDecodeResult joint_decode_ncc(const std::vector<double>& llr_s1,
                                   const std::vector<double>& llr_s2,
                                   const std::vector<double>& llr_nc,
                                   const CompoundTrellis& trellis) {
    if (llr_s1.size() != llr_s2.size() || llr_s1.size() != llr_nc.size())
        throw std::invalid_argument("LLR stream length mismatch");
    const int n = trellis.n_out;
    if (llr_s1.size() % n != 0)
        throw std::invalid_argument("LLR stream length not a multiple of n");
    const int T = static_cast<int>(llr_s1.size()) / n;
    const int m = trellis.g.memory();
    const int K = T - m;
    if (K < 1) throw std::invalid_argument("LLR streams too short");
    const int S = trellis.n_states;
    const int n_labels = 1 << (3 * n);

    // per-step metric of each possible 3n-bit output label, built
    // incrementally by flipping one bit at a time
    std::vector<double> lm(static_cast<std::size_t>(T) * n_labels);
    {
        std::vector<double> half(3 * n);
        for (int t = 0; t < T; ++t) {
            double base = 0.0;
            for (int j = 0; j < n; ++j) {
                half[j] = llr_s1[t * n + j];
                half[n + j] = llr_s2[t * n + j];
                half[2 * n + j] = llr_nc[t * n + j];
            }
            for (int j = 0; j < 3 * n; ++j) base += 0.5 * half[j];
            double* row = &lm[static_cast<std::size_t>(t) * n_labels];
            row[0] = base;
            for (int lab = 1; lab < n_labels; ++lab) {
                int low = std::countr_zero(static_cast<unsigned>(lab));
                row[lab] = row[lab & (lab - 1)] - half[low];
            }
        }
    }

    std::vector<double> alpha(static_cast<std::size_t>(T + 1) * S, kNegInf);
    alpha[0] = 0.0;
    for (int t = 0; t < T; ++t) {
        const int u_max = (t < K) ? 4 : 1;
        const double* row = &lm[static_cast<std::size_t>(t) * n_labels];
        const double* a = &alpha[static_cast<std::size_t>(t) * S];
        double* an = &alpha[static_cast<std::size_t>(t + 1) * S];
        for (int s = 0; s < S; ++s) {
            if (a[s] == kNegInf) continue;
            for (int u = 0; u < u_max; ++u) {
                int ns = trellis.next[s][u];
                an[ns] = maxstar(an[ns], a[s] + row[trellis.label[s][u]]);
            }
        }
        double mx = *std::max_element(an, an + S);
        for (int s = 0; s < S; ++s) an[s] -= mx;
    }

    JointDecodeResult res;
    res.bits1.assign(K, 0);
    res.bits2.assign(K, 0);
    res.info_llr1.assign(K, 0.0);
    res.info_llr2.assign(K, 0.0);

    std::vector<double> beta(S, kNegInf), beta_prev(S);
    beta[0] = 0.0;
    for (int t = T - 1; t >= 0; --t) {
        const int u_max = (t < K) ? 4 : 1;
        const double* row = &lm[static_cast<std::size_t>(t) * n_labels];
        const double* a = &alpha[static_cast<std::size_t>(t) * S];
        std::fill(beta_prev.begin(), beta_prev.end(), kNegInf);
        double m1[2] = {kNegInf, kNegInf};
        double m2[2] = {kNegInf, kNegInf};
        for (int s = 0; s < S; ++s) {
            for (int u = 0; u < u_max; ++u) {
                int ns = trellis.next[s][u];
                if (beta[ns] == kNegInf) continue;
                double g = row[trellis.label[s][u]] + beta[ns];
                beta_prev[s] = maxstar(beta_prev[s], g);
                if (t < K && a[s] != kNegInf) {
                    double p = a[s] + g;
                    int u1 = (u >> 1) & 1, u2 = u & 1;
                    m1[u1] = maxstar(m1[u1], p);
                    m2[u2] = maxstar(m2[u2], p);
                }
            }
        }
        if (t < K) {
            res.info_llr1[t] = m1[0] - m1[1];
            res.info_llr2[t] = m2[0] - m2[1];
            res.bits1[t] = res.info_llr1[t] < 0.0 ? 1 : 0;
            res.bits2[t] = res.info_llr2[t] < 0.0 ? 1 : 0;
        }
        double mx = *std::max_element(beta_prev.begin(), beta_prev.end());
        for (int s = 0; s < S; ++s) beta_prev[s] -= mx;
        beta.swap(beta_prev);
    }
    return res;
}

void write_spectrum_csv(std::ostream& os, const DistanceSpectrum& spectrum) {
    os << "d,d1,d2,dR,w1,w2\n";
    for (const auto& [d, w] : spectrum.entries)
        os << d << ',' << d << ",0,0," << w << ",0\n";
}

void write_spectrum_csv(std::ostream& os, const CompoundSpectrum& spectrum) {
    os << "d,d1,d2,dR,w1,w2\n";
    for (const auto& p : spectrum.entries)
        os << p.d() << ',' << p.d1 << ',' << p.d2 << ',' << p.dr << ',' << p.w1
           << ',' << p.w2 << '\n';
}

}  // namespace coopnet
