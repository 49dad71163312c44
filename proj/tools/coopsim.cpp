// coopsim: Monte Carlo simulation and closed-form analysis of two-source
// multi-relay cooperative links (PARC / NCC / reference schemes).
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopnet/analysis.hpp"
#include "coopnet/sim.hpp"

using namespace coopnet;

namespace {

struct OutputTarget {
    std::string path;  // empty = stdout

    // returns the stream to write to; file is kept open by `file`
    std::ostream& open(std::ofstream& file) {
        if (path.empty()) return std::cout;
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output: " + path);
        return file;
    }
};

std::vector<std::string> config_comments(
    const std::vector<std::pair<std::string, std::string>>& kv) {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv) out.push_back(k + "=" + v);
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ";";
        s += v[i];
    }
    return s;
}

template <typename T>
std::string join_num(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ";";
        os << v[i];
    }
    return os.str();
}

int run_simulate(const std::vector<std::string>& scheme_names,
                 const std::vector<std::string>& codes,
                 const std::vector<int>& relays, const std::string& snr,
                 int K, long min_errors, long max_packets, std::uint64_t seed,
                 int threads, double pathloss, double relay_position,
                 bool no_ncc_scale, bool quiet, OutputTarget out) {
    CampaignConfig cfg;
    cfg.schemes.clear();
    for (const auto& name : scheme_names) {
        auto s = scheme_from_name(name);
        if (!s) throw CLI::ValidationError("--scheme", "unknown scheme " + name);
        cfg.schemes.push_back(*s);
    }
    cfg.codes = codes;
    cfg.n_relays = relays;
    cfg.snr_grid_db = parse_snr_grid(snr);
    cfg.K = K;
    cfg.min_bit_errors = min_errors;
    cfg.max_packets = max_packets;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.pathloss_exponent = pathloss;
    cfg.relay_position = relay_position;
    cfg.ncc_scale_relay_llr = !no_ncc_scale;

    auto records = run_campaign(cfg, quiet ? nullptr : &std::cerr);

    std::ostringstream seed_s;
    seed_s << seed;
    auto comments = config_comments(
        {{"command", "simulate"},
         {"scheme", join(scheme_names)},
         {"code", join(codes)},
         {"relays", join_num(relays)},
         {"snr", snr},
         {"K", std::to_string(K)},
         {"min_errors", std::to_string(min_errors)},
         {"max_packets", std::to_string(max_packets)},
         {"seed", seed_s.str()},
         {"pathloss", std::to_string(pathloss)},
         {"relay_position", std::to_string(relay_position)},
         {"ncc_scale", no_ncc_scale ? "0" : "1"}});
    std::ofstream file;
    write_ber_csv(out.open(file), records, comments);

    for (const auto& r : records)
        if (r.packets < 0) {
            std::cerr << "error: one or more simulation cells failed\n";
            return 2;
        }
    return 0;
}

int run_analyze(const std::string& scheme_name_in, const std::string& code_text,
                const std::vector<int>& relays, const std::string& snr, int K,
                int d_max, double pathloss, double relay_position,
                bool per_info_bit, OutputTarget out, OutputTarget slopes_out) {
    auto scheme = scheme_from_name(scheme_name_in);
    if (!scheme || (*scheme != Scheme::Parc && *scheme != Scheme::Ncc))
        throw CLI::ValidationError("--scheme",
                                   "analytic bounds exist for parc and ncc");
    CodeSpec code = CodeSpec::from_octal(code_text);
    auto grid = parse_snr_grid(snr);
    const int N = code.n_outputs() * (K + code.memory());

    std::optional<DistanceSpectrum> spec;
    std::optional<CompoundSpectrum> cspec;
    if (*scheme == Scheme::Parc) {
        DistanceSpectrum s =
            compute_distance_spectrum(code, d_max > 0 ? d_max : 64);
        if (d_max <= 0) {
            d_max = s.f + 10;
            s = compute_distance_spectrum(code, d_max);
        }
        spec = s;
    } else {
        auto trellis = build_compound_code(code);
        if (d_max <= 0) {
            DistanceSpectrum s = compute_distance_spectrum(code, 64);
            d_max = 2 * s.f + 8;
        }
        cspec = compute_compound_spectrum(trellis, d_max);
    }

    std::vector<BerRecord> records;
    std::map<int, std::vector<std::pair<double, double>>> curve_by_nr;
    for (int nr : relays) {
        for (double snr_db : grid) {
            LinkBudget budget =
                LinkBudget::build(snr_db, nr, pathloss, relay_position);
            BerBoundResult bound =
                *scheme == Scheme::Parc
                    ? ber_bound_parc(*spec, budget, N, K)
                    : ber_bound_ncc(*cspec, budget, 0, K);
            BerRecord rec;
            rec.scheme = scheme_name(*scheme);
            rec.code = code.octal_string();
            rec.n_relays = nr;
            rec.snr_db = snr_db;
            rec.ber = per_info_bit ? bound.per_info_bit : bound.total;
            records.push_back(rec);
            if (rec.ber > 0.0) curve_by_nr[nr].emplace_back(snr_db, rec.ber);
        }
    }

    auto comments = config_comments(
        {{"command", "analyze"},
         {"scheme", scheme_name(*scheme)},
         {"code", code_text},
         {"relays", join_num(relays)},
         {"snr", snr},
         {"K", std::to_string(K)},
         {"d_max", std::to_string(d_max)},
         {"pathloss", std::to_string(pathloss)},
         {"relay_position", std::to_string(relay_position)},
         {"ber_convention", per_info_bit ? "per_info_bit" : "union_bound"}});
    std::ofstream file;
    write_ber_csv(out.open(file), records, comments);

    std::ofstream sfile;
    std::ostream& ss = slopes_out.open(sfile);
    for (const auto& c : comments) ss << "# " << c << '\n';
    ss << "scheme,code,n_relays,snr_db,diversity\n";
    char buf[32];
    for (const auto& [nr, curve] : curve_by_nr) {
        if (curve.size() < 3) continue;
        for (const auto& [snr_db, slope] : instantaneous_diversity(curve)) {
            std::snprintf(buf, sizeof buf, "%.4f", slope);
            ss << scheme_name(*scheme) << ",\"" << code.octal_string() << "\","
               << nr << ',' << snr_db << ',' << buf << '\n';
        }
    }
    return 0;
}

int run_spectrum(const std::string& code_text, int d_max, bool compound,
                 OutputTarget out) {
    CodeSpec code = CodeSpec::from_octal(code_text);
    std::ofstream file;
    std::ostream& os = out.open(file);
    if (compound) {
        if (d_max <= 0) {
            DistanceSpectrum s = compute_distance_spectrum(code, 64);
            d_max = 2 * s.f + 8;
        }
        write_spectrum_csv(os,
                           compute_compound_spectrum(build_compound_code(code),
                                                     d_max));
    } else {
        DistanceSpectrum s =
            compute_distance_spectrum(code, d_max > 0 ? d_max : 64);
        if (d_max <= 0) s = compute_distance_spectrum(code, s.f + 10);
        write_spectrum_csv(os, s);
    }
    return 0;
}

int run_diversity(const std::string& input, OutputTarget out) {
    std::ifstream in_file;
    std::istream* is = &std::cin;
    if (!input.empty() && input != "-") {
        in_file.open(input);
        if (!in_file) throw std::runtime_error("cannot open input: " + input);
        is = &in_file;
    }
    auto records = read_ber_csv(*is);

    // group rows into curves and differentiate each
    std::map<std::string, std::vector<const BerRecord*>> curves;
    for (const auto& r : records)
        curves[r.scheme + "|" + r.code + "|" + std::to_string(r.n_relays)]
            .push_back(&r);

    std::ofstream file;
    std::ostream& os = out.open(file);
    os << "scheme,code,n_relays,snr_db,diversity\n";
    char buf[32];
    for (auto& [key, rows] : curves) {
        std::vector<std::pair<double, double>> curve;
        for (const BerRecord* r : rows)
            if (r->ber > 0.0) curve.emplace_back(r->snr_db, r->ber);
        if (curve.size() < 3) continue;
        for (const auto& [snr_db, slope] : instantaneous_diversity(curve)) {
            std::snprintf(buf, sizeof buf, "%.4f", slope);
            os << rows[0]->scheme << ",\"" << rows[0]->code << "\","
               << rows[0]->n_relays << ',' << snr_db << ',' << buf << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative relaying link simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Configuration file (ini/toml; flags win)");

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "Monte Carlo BER campaign");
    std::vector<std::string> schemes{"parc"};
    std::vector<std::string> codes{"133,165,171"};
    std::vector<int> relays{2};
    std::string snr = "0:2:20";
    int K = 1024;
    long min_errors = 100, max_packets = 200000;
    std::uint64_t seed = 1;
    int threads = 0;
    double pathloss = 3.5, relay_position = 0.5;
    bool no_ncc_scale = false, quiet = false;
    OutputTarget sim_out;
    sim->add_option("--scheme", schemes,
                    "parc|ncc|ref1|ref2|p2p|uncoded (repeatable)")
        ->capture_default_str();
    sim->add_option("--code", codes, "octal generators, e.g. 133,165,171")
        ->capture_default_str();
    sim->add_option("--relays", relays, "relay counts (repeatable)")
        ->capture_default_str();
    sim->add_option("--snr", snr, "SNR grid start:step:stop in dB")
        ->capture_default_str();
    sim->add_option("--K", K, "info bits per source")->capture_default_str();
    sim->add_option("--min-errors", min_errors, "bit errors per point")
        ->capture_default_str();
    sim->add_option("--max-packets", max_packets, "packet cap per point")
        ->capture_default_str();
    sim->add_option("--seed", seed, "master seed")->capture_default_str();
    sim->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->envname("COOPSIM_THREADS")
        ->capture_default_str();
    sim->add_option("--pathloss", pathloss, "pathloss exponent")
        ->capture_default_str();
    sim->add_option("--relay-position", relay_position,
                    "relay distance from sources on the unit S-D line")
        ->capture_default_str();
    sim->add_flag("--no-ncc-scale", no_ncc_scale,
                  "disable bottleneck weighting of the network-coded stream");
    sim->add_flag("--quiet", quiet, "suppress per-cell progress on stderr");
    sim->add_option("--output", sim_out.path, "CSV path (default stdout)");

    // --- analyze ---
    auto* ana = app.add_subcommand("analyze",
                                   "closed-form BER bounds and diversity");
    std::string ana_scheme = "parc", ana_code = "133,165,171";
    std::vector<int> ana_relays{2};
    std::string ana_snr = "0:2:40";
    int ana_K = 1024, ana_dmax = 0;
    double ana_pathloss = 3.5, ana_relay_position = 0.5;
    bool per_info_bit = false;
    OutputTarget ana_out, slopes_out{"diversity.csv"};
    ana->add_option("--scheme", ana_scheme, "parc|ncc")->capture_default_str();
    ana->add_option("--code", ana_code, "octal generators")
        ->capture_default_str();
    ana->add_option("--relays", ana_relays, "relay counts")
        ->capture_default_str();
    ana->add_option("--snr", ana_snr, "SNR grid start:step:stop in dB")
        ->capture_default_str();
    ana->add_option("--K", ana_K, "info bits per source")
        ->capture_default_str();
    ana->add_option("--d-max", ana_dmax,
                    "spectrum truncation (0 = f+10, compound 2f+8)")
        ->capture_default_str();
    ana->add_option("--pathloss", ana_pathloss, "pathloss exponent")
        ->capture_default_str();
    ana->add_option("--relay-position", ana_relay_position,
                    "relay distance from sources")
        ->capture_default_str();
    ana->add_flag("--per-info-bit", per_info_bit,
                  "divide the union bound by K");
    ana->add_option("--output", ana_out.path, "bound CSV (default stdout)");
    ana->add_option("--slopes-output", slopes_out.path,
                    "instantaneous diversity CSV")
        ->capture_default_str();

    // --- spectrum ---
    auto* spc = app.add_subcommand("spectrum", "distance spectrum search");
    std::string spc_code = "133,165,171";
    int spc_dmax = 0;
    bool spc_compound = false;
    OutputTarget spc_out;
    spc->add_option("--code", spc_code, "octal generators")
        ->capture_default_str();
    spc->add_option("--d-max", spc_dmax,
                    "truncation depth (0 = f+10, compound 2f+8)")
        ->capture_default_str();
    spc->add_flag("--compound", spc_compound,
                  "two-source-plus-XOR compound code");
    spc->add_option("--output", spc_out.path, "CSV path (default stdout)");

    // --- diversity ---
    auto* div = app.add_subcommand("diversity",
                                   "local log-log slopes of a BER CSV");
    std::string div_input = "-";
    OutputTarget div_out;
    div->add_option("--input", div_input, "BER CSV ('-' = stdin)")
        ->capture_default_str();
    div->add_option("--output", div_out.path, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // configuration error
    }

    try {
        if (sim->parsed())
            return run_simulate(schemes, codes, relays, snr, K, min_errors,
                                max_packets, seed, threads, pathloss,
                                relay_position, no_ncc_scale, quiet, sim_out);
        if (ana->parsed())
            return run_analyze(ana_scheme, ana_code, ana_relays, ana_snr,
                               ana_K, ana_dmax, ana_pathloss,
                               ana_relay_position, per_info_bit, ana_out,
                               slopes_out);
        if (spc->parsed())
            return run_spectrum(spc_code, spc_dmax, spc_compound, spc_out);
        if (div->parsed()) return run_diversity(div_input, div_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
