#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace coopnet {

using BitVec = std::vector<std::uint8_t>;

/// Rate-1/n binary convolutional code given by octal generator polynomials.
/// Zero-tail termination: encode() appends constraint_length-1 zero bits so
/// every codeword path ends in the all-zero state.
struct CodeSpec {
    std::vector<std::uint32_t> generators;  // binary masks, LSB = oldest tap
    int constraint_length = 0;

    // Parses e.g. "133,165,171" (octal).
    static CodeSpec from_octal(const std::string& text);

    int n_outputs() const { return static_cast<int>(generators.size()); }
    int memory() const { return constraint_length - 1; }
    std::string octal_string() const;
};

/// Trellis of a CodeSpec. State = previous memory() input bits, newest bit in
/// the high position. 2 outgoing and 2 incoming transitions per state.
struct Trellis {
    int n_states = 0;
    int n_out = 0;
    // [state][input] -> next state / packed output bits (bit i = generator i)
    std::vector<std::array<std::uint32_t, 2>> next;
    std::vector<std::array<std::uint32_t, 2>> out;

    static Trellis build(const CodeSpec& code);
};

BitVec encode(const BitVec& data_bits, const CodeSpec& code);

struct BcjrResult {
    BitVec bits;                   // length K hard decisions
    std::vector<double> info_llr;  // positive = bit 0 more likely
};

/// Log-domain BCJR with max-star recursion. channel_llrs must have length
/// n_outputs*(K+memory); K is inferred. Positive LLR = coded bit 0.
BcjrResult bcjr_decode(const std::vector<double>& channel_llrs,
                       const CodeSpec& code);

/// Error-event distance spectrum: entries[d] = total input weight of all
/// events (paths leaving the zero state once and first returning to it) with
/// output Hamming weight d <= d_max.
struct DistanceSpectrum {
    std::map<int, long long> entries;      // d -> w(d)
    std::map<int, long long> event_count;  // d -> number of events
    std::map<int, int> max_event_len;      // d -> longest event (input bits)
    int f = 0;                             // minimum distance
    int d_max = 0;
};

DistanceSpectrum compute_distance_spectrum(const CodeSpec& code, int d_max);

/// Product trellis of the compound code [[g,0,g],[0,g,g]]: state is
/// (state1, state2), input index is (bit1 << 1) | bit2 (source 1 is the
/// high-order bit), output label packs (c1, c2, c1 xor c2) branch bits.
struct CompoundTrellis {
    CodeSpec g;
    int n_states = 0;  // 2^(2*memory)
    int n_out = 0;     // per stream
    std::vector<std::array<std::uint32_t, 4>> next;
    // label = o1 | (o2 << n_out) | (oR << 2*n_out)
    std::vector<std::array<std::uint32_t, 4>> label;

    int state1(int s) const { return s >> (g.memory()); }
    int state2(int s) const { return s & ((1 << g.memory()) - 1); }
};

CompoundTrellis build_compound_code(const CodeSpec& g);

struct CompoundPattern {
    int d1 = 0, d2 = 0, dr = 0;   // per-block output weights, d = d1+d2+dr
    long long w1 = 0, w2 = 0;     // total input weight per source
    long long count = 0;          // number of events
    int d() const { return d1 + d2 + dr; }
};

struct CompoundSpectrum {
    std::vector<CompoundPattern> entries;  // sorted by (d, d1, d2, dr)
    int min_distance = 0;                  // F
    int d_max = 0;
};

/// Enumerates compound error events up to total output weight d_max and
/// verifies F = 2f against the single-code spectrum (Lemma 1).
CompoundSpectrum compute_compound_spectrum(const CompoundTrellis& trellis,
                                           int d_max);

struct JointDecodeResult {
    BitVec bits1, bits2;
    std::vector<double> info_llr1, info_llr2;
};

/// BCJR over the compound trellis; the three LLR streams correspond to the
/// (c1, c2, c1 xor c2) branch labels and must be aligned symbol-by-symbol.
JointDecodeResult joint_decode_ncc(const std::vector<double>& llr_s1,
                                   const std::vector<double>& llr_s2,
                                   const std::vector<double>& llr_nc,
                                   const CompoundTrellis& trellis);

void write_spectrum_csv(std::ostream& os, const DistanceSpectrum& spectrum);
void write_spectrum_csv(std::ostream& os, const CompoundSpectrum& spectrum);

}  // namespace coopnet
