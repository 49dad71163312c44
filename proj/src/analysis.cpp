#include "coopnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coopnet {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

// Extended precision throughout the analytic path: the inclusion-exclusion
// subset sums of the selected-relay MGF cancel through n_relays orders, so a
// result of magnitude v is assembled from terms up to ~v * gamma^n_relays;
// double precision cannot certify better than ~1e-8 relative at 25 dB.
using real = long double;

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
struct GK15Result {
    real value;
    real error;
    real abs_value;  // integral of |f|, scales the roundoff noise floor
};

template <typename F>
GK15Result gk15(const F& f, real a, real b) {
    static const real nodes[8] = {
        0.0L,
        0.405845151377397166906606412076961L,
        0.741531185599394439863864773280788L,
        0.949107912342758524526189684047851L,
        0.207784955007898467600689403773245L,
        0.586087235467691130294144838258730L,
        0.864864423359769072789712788640926L,
        0.991455371120812639206854697526329L};
    static const real wg[4] = {
        0.417959183673469387755102040816327L,
        0.381830050505118944950369775488975L,
        0.279705391489276667901467771423780L,
        0.129484966168869693270611432679082L};
    static const real wk[8] = {
        0.209482141084727828012999174891714L,
        0.190350578064785409913256402421014L,
        0.140653259715525918745189590510238L,
        0.063092092629978553290700663189204L,
        0.204432940075298892414161999234649L,
        0.169004726639267902826583426598550L,
        0.104790010322250183839876322541518L,
        0.022935322010529224963732008058970L};
    real c = 0.5L * (a + b), h = 0.5L * (b - a);
    real f0 = f(c);
    real g = wg[0] * f0, k = wk[0] * f0, ak = wk[0] * std::abs(f0);
    for (int i = 1; i < 4; ++i) {
        real p = f(c + h * nodes[i]), q = f(c - h * nodes[i]);
        g += wg[i] * (p + q);
        k += wk[i] * (p + q);
        ak += wk[i] * (std::abs(p) + std::abs(q));
    }
    for (int i = 4; i < 8; ++i) {
        real p = f(c + h * nodes[i]), q = f(c - h * nodes[i]);
        k += wk[i] * (p + q);
        ak += wk[i] * (std::abs(p) + std::abs(q));
    }
    return {k * h, std::abs((k - g) * h), ak * h};
}

template <typename F>
real adaptive_quad(const F& f, real a, real b, real tol, int depth) {
    auto r = gk15(f, a, b);
    // the noise floor stops subdivision once the requested tolerance drops
    // below the roundoff of evaluating a (possibly signed, cancellative)
    // integrand; without it cancellation-dominated integrands recurse forever
    real floor_tol = 2e-19L * r.abs_value;
    if (r.error <= std::max(tol, floor_tol) || depth >= 40) {
        if (depth >= 40 && r.error > std::max(1e3L * tol, 1e-12L * r.abs_value))
            throw std::runtime_error("quadrature failed to reach tolerance");
        return r.value;
    }
    real c = 0.5L * (a + b);
    return adaptive_quad(f, a, c, 0.5L * tol, depth + 1) +
           adaptive_quad(f, c, b, 0.5L * tol, depth + 1);
}

constexpr real kHalfPi = 1.570796326794896619231321691639751442L;

}  // namespace

double mgf_quadrature_oracle(const std::vector<MgfFactor>& factors,
                             double abs_tol) {
    for (const auto& fac : factors) {
        if (fac.weight < 0.0) throw std::invalid_argument("negative weight");
        for (const auto& [sign, gbar] : fac.terms)
            if (gbar < 0.0) throw std::invalid_argument("negative mean SNR");
    }
    // noise: first-order roundoff bound of the product, driven by the signed
    // (inclusion-exclusion) sums inside each factor, which can cancel far
    // below the magnitude of their terms
    auto eval = [&](real theta, real* noise) {
        real t = std::sin(theta);
        t *= t;
        real prod = 1.0L, nz = 0.0L;
        for (const auto& fac : factors) {
            real v = 0.0L, m = 0.0L;
            for (const auto& [sign, gbar] : fac.terms) {
                real term = t / (t + static_cast<real>(fac.weight) * gbar);
                v += sign * term;
                m += term;
            }
            nz = nz * std::abs(v) + std::abs(prod) * 6e-20L * m;
            prod *= v;
        }
        if (noise) *noise = nz;
        return prod;
    };
    // requesting a tolerance below the evaluation noise only makes the
    // subdivision diverge; clamp to a sampled bound of the noise integral
    real noise_max = 0.0L;
    for (int i = 1; i <= 32; ++i) {
        real nz;
        eval(kHalfPi * i / 32.0L, &nz);
        noise_max = std::max(noise_max, nz);
    }
    real tol = std::max(static_cast<real>(abs_tol), 8.0L * noise_max * kHalfPi);
    auto integrand = [&](real theta) { return eval(theta, nullptr); };
    return static_cast<double>(adaptive_quad(integrand, 0.0L, kHalfPi, tol, 0) /
                               (2.0L * kHalfPi));
}

namespace {

inline real rayleigh_pep(real a) {
    // single-block case: (1/pi) int sin^2/(sin^2+a) = (1 - sqrt(a/(1+a)))/2
    // in the stable 1 - s = 1/((1+a)(1+s)) arrangement
    real sa = std::sqrt(a / (1.0L + a));
    return 0.5L / ((1.0L + a) * (1.0L + sa));
}

real i1_impl(real a, real b) {
    // Algebraic rearrangement of the textbook two-pole form. The direct form
    // computes 1/2 - (nearly 1/2) and loses all precision for large or
    // near-coincident arguments; here the difference terms are extracted
    // analytically, so every quantity is O(1) and positive.
    real sa = std::sqrt(a / (1.0L + a)), sb = std::sqrt(b / (1.0L + b));
    real qa = std::sqrt(a * (1.0L + a)), qb = std::sqrt(b * (1.0L + b));
    real t2 = qa + qb > 0.0L ? sa * sb * (1.0L + a + b) / (qa + qb) : 0.0L;
    real t3 = a > 0.0L && b > 0.0L
                  ? a * b / ((1.0L + a) * (1.0L + b) * (sa + sb))
                  : 0.0L;
    return (1.0L + t2 - t3) /
           (2.0L * (1.0L + a) * (1.0L + b) * (1.0L + sa) * (1.0L + sb));
}

real i2_impl(real a, real b, real c) {
    // a zero argument cancels one sin^2 of the numerator
    if (c == 0.0L) return i1_impl(a, b);
    if (b == 0.0L) return i1_impl(a, c);
    if (a == 0.0L) return i1_impl(b, c);

    // three-pole Lagrange form with a running bound on the cancellation
    // error; large or near-coincident arguments exceed the bound and are
    // routed to quadrature of the defining integrand
    if (a != b && a != c && b != c) {
        const real x[3] = {a, b, c};
        real sum = 0.0L, mag = 1.0L;
        for (int i = 0; i < 3; ++i) {
            int j = (i + 1) % 3, k = (i + 2) % 3;
            real term = x[i] * x[i] / ((x[i] - x[j]) * (x[i] - x[k])) *
                        std::sqrt(x[i] / (x[i] + 1.0L));
            sum += term;
            mag = std::max(mag, std::abs(term));
        }
        real v = 0.5L * (1.0L - sum);
        if (v > 0.0L && 1e-19L * mag < 1e-15L * v) return v;
    }

    // integrand peaks at theta = pi/2 and the integral is >= 0.49 * fmax, so
    // an fmax-scaled absolute tolerance certifies the relative error
    auto integrand = [&](real theta) {
        real t = std::sin(theta);
        t *= t;
        return t * t * t / ((t + a) * (t + b) * (t + c));
    };
    real fmax = 1.0L / ((1.0L + a) * (1.0L + b) * (1.0L + c));
    return adaptive_quad(integrand, 0.0L, kHalfPi, 1e-17L * fmax, 0) /
           (2.0L * kHalfPi);
}

}  // namespace

double i1(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("i1: negative input");
    if (a == 0.0 && b == 0.0)
        throw std::invalid_argument("i1: both arguments zero");
    return static_cast<double>(i1_impl(a, b));
}

double i2(double a, double b, double c) {
    if (a < 0.0 || b < 0.0 || c < 0.0)
        throw std::invalid_argument("i2: negative input");
    return static_cast<double>(i2_impl(a, b, c));
}

namespace {

double lchoose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(n - k + 1.0);
}

}  // namespace

double pattern_prob_parc(int d, int d2, int N, int L) {
    if (d < 0 || d > N || L < 0 || L > N)
        throw std::invalid_argument("pattern_prob_parc: bad N/L/d");
    if (d2 < 0 || d2 > std::min(d, L) || d - d2 > N - L)
        throw std::invalid_argument("pattern_prob_parc: pattern out of domain");
    int d1 = d - d2;
    if (d > 150)  // log-domain for huge weights; product form otherwise
        return std::exp(lchoose(N - L, d1) + lchoose(L, d2) - lchoose(N, d));
    // sampling-without-replacement form: C(d,d2) * prod (L-k) * prod (N-L-k)
    // / prod (N-k); interleaved to keep intermediates O(1), error O(d*eps)
    double p = 1.0;
    for (int k = 0; k < std::min(d2, d1); ++k)
        p *= static_cast<double>(d - k) / (k + 1);  // C(d, min(d1,d2)) exactly
    for (int k = 0; k < d; ++k)
        p *= static_cast<double>(k < d2 ? L - k : N - L - (k - d2)) / (N - k);
    return p;
}

double upep_parc(int d, int d2, const LinkBudget& budget, int source) {
    if (d < 1 || d2 < 0 || d2 > d)
        throw std::invalid_argument("upep_parc: invalid pattern");
    real gsd = budget.sd[source];
    if (d2 == 0) return static_cast<double>(rayleigh_pep(d * gsd));
    auto mode = source == 0 ? SelectionMode::ParcSource1
                            : SelectionMode::ParcSource2;
    // the signed selection-subset sum cancels through n_relays orders and
    // amplifies roundoff by ~gbar^(n_relays-1); accumulate in extended
    // precision
    real v = 0.0L;
    for (const auto& [sign, gbar] : selection_mgf_terms(budget, mode))
        v += sign * i1_impl(d * gsd, d2 * static_cast<real>(gbar));
    return static_cast<double>(v);
}

double upep_ncc(int d1, int d2, int dr, const LinkBudget& budget) {
    if (d1 < 0 || d2 < 0 || dr < 0)
        throw std::invalid_argument("upep_ncc: negative weight");
    int zeros = (d1 == 0) + (d2 == 0) + (dr == 0);
    if (zeros >= 2)
        throw std::invalid_argument(
            "upep_ncc: pattern with two zero entries violates Lemma 2");
    real g1 = d1 * static_cast<real>(budget.sd[0]);
    real g2 = d2 * static_cast<real>(budget.sd[1]);
    if (dr == 0) return static_cast<double>(i1_impl(g1, g2));
    const auto terms = selection_mgf_terms(budget, SelectionMode::Ncc);
    // see upep_parc: extended-precision accumulation of the cancelling sum
    real v = 0.0L;
    if (d1 == 0) {
        for (const auto& [sign, gbar] : terms)
            v += sign * i1_impl(g2, dr * static_cast<real>(gbar));
    } else if (d2 == 0) {
        for (const auto& [sign, gbar] : terms)
            v += sign * i1_impl(g1, dr * static_cast<real>(gbar));
    } else {
        for (const auto& [sign, gbar] : terms)
            v += sign * i2_impl(g1, g2, dr * static_cast<real>(gbar));
    }
    return static_cast<double>(v);
}

BerBoundResult ber_bound_parc(const DistanceSpectrum& spectrum,
                              const LinkBudget& budget, int N, int K,
                              int source) {
    if (spectrum.entries.empty())
        throw std::invalid_argument("empty distance spectrum");
    const int L = N / 2;
    BerBoundResult res;
    res.d_max = spectrum.d_max;
    for (const auto& [d, w] : spectrum.entries) {
        if (w == 0) continue;
        double pu = 0.0;
        int lo = std::max(0, d - (N - L));
        int hi = std::min(d, L);
        for (int d2 = lo; d2 <= hi; ++d2)
            pu += pattern_prob_parc(d, d2, N, L) * upep_parc(d, d2, budget, source);
        double contrib = static_cast<double>(w) * pu;
        res.per_d[d] = contrib;
        res.total += contrib;
    }
    res.per_info_bit = res.total / K;
    return res;
}

BerBoundResult ber_bound_ncc(const CompoundSpectrum& spectrum,
                             const LinkBudget& budget, int source, int K) {
    if (spectrum.entries.empty())
        throw std::invalid_argument("empty compound spectrum");
    if (source < 0 || source > 1) throw std::invalid_argument("bad source");
    BerBoundResult res;
    res.d_max = spectrum.d_max;
    for (const auto& p : spectrum.entries) {
        long long w = source == 0 ? p.w1 : p.w2;
        if (w == 0) continue;
        double contrib = 0.5 * static_cast<double>(w) *
                         upep_ncc(p.d1, p.d2, p.dr, budget);
        res.per_d[p.d()] += contrib;
        res.total += contrib;
    }
    res.per_info_bit = res.total / K;
    return res;
}

int asymptotic_diversity_parc(int d1, int d2, int n_relays) {
    if (d1 < 0 || d2 < 0 || d1 + d2 < 1)
        throw std::invalid_argument("invalid PARC pattern");
    return d2 == 0 ? 1 : n_relays + 1;
}

int asymptotic_diversity_ncc(int d1, int d2, int dr, int n_relays) {
    int zeros = (d1 == 0) + (d2 == 0) + (dr == 0);
    if (d1 < 0 || d2 < 0 || dr < 0 || zeros >= 2)
        throw std::invalid_argument("invalid NCC pattern");
    if (dr == 0) return 2;
    if (d1 == 0 || d2 == 0) return n_relays + 1;
    return n_relays + 2;
}

std::vector<std::pair<double, double>> instantaneous_diversity(
    const std::vector<std::pair<double, double>>& curve) {
    if (curve.size() < 3)
        throw std::invalid_argument("need at least 3 curve points");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve[i].second <= 0.0)
            throw std::invalid_argument("non-positive BER in curve");
        if (i > 0 && curve[i].first <= curve[i - 1].first)
            throw std::invalid_argument("curve not sorted by SNR");
    }
    std::vector<std::pair<double, double>> slopes;
    slopes.reserve(curve.size() - 2);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        double dlog_ber =
            std::log10(curve[i + 1].second) - std::log10(curve[i - 1].second);
        double dlog_snr = (curve[i + 1].first - curve[i - 1].first) / 10.0;
        slopes.emplace_back(curve[i].first, -dlog_ber / dlog_snr);
    }
    return slopes;
}

}  // namespace coopnet
