#include "coopnet/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "coopnet/rng.hpp"

namespace coopnet {

namespace {

struct CellTally {
    long packets = 0;
    long bits = 0;
    long bit_errors = 0;
};

constexpr long kBatchPackets = 32;  // stopping granularity (thread-invariant)

CellTally run_batch(const SchemeRunner& runner, const LinkBudget& budget,
                    std::uint64_t seed, std::uint64_t cell, long first_trial,
                    long n_trials, int threads) {
    std::atomic<long> cursor{0};
    std::mutex mtx;
    CellTally tally;
    auto worker = [&]() {
        CellTally local;
        for (;;) {
            long i = cursor.fetch_add(1);
            if (i >= n_trials) break;
            auto rng = make_stream(seed, cell, first_trial + i);
            RoundResult r = runner.run_round(budget, rng);
            local.packets += 1;
            local.bits += r.bits[0] + r.bits[1];
            local.bit_errors += r.bit_errors[0] + r.bit_errors[1];
        }
        std::lock_guard<std::mutex> lock(mtx);
        tally.packets += local.packets;
        tally.bits += local.bits;
        tally.bit_errors += local.bit_errors;
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return tally;
}

}  // namespace

std::vector<BerRecord> run_campaign(const CampaignConfig& cfg,
                                    std::ostream* progress) {
    if (cfg.min_bit_errors < 1)
        throw std::invalid_argument("min_bit_errors must be >= 1");
    for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
        if (cfg.snr_grid_db[i] <= cfg.snr_grid_db[i - 1])
            throw std::invalid_argument("SNR grid must be sorted ascending");
    int threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::vector<BerRecord> records;
    for (Scheme scheme : cfg.schemes) {
        for (const std::string& code_text : cfg.codes) {
            for (int nr : cfg.n_relays) {
                SchemeConfig scfg;
                scfg.scheme = scheme;
                scfg.code = CodeSpec::from_octal(code_text);
                scfg.n_relays = nr;
                scfg.K = cfg.K;
                scfg.ncc_scale_relay_llr = cfg.ncc_scale_relay_llr;
                SchemeRunner runner(scfg);
                for (double snr : cfg.snr_grid_db) {
                    BerRecord rec;
                    rec.scheme = scheme_name(scheme);
                    rec.code = scfg.code.octal_string();
                    rec.n_relays = nr;
                    rec.snr_db = snr;
                    std::ostringstream cell_id;
                    cell_id << rec.scheme << '|' << rec.code << '|' << nr
                            << '|' << snr;
                    std::uint64_t cell = fnv1a(cell_id.str());
                    auto t0 = std::chrono::steady_clock::now();
                    try {
                        LinkBudget budget = LinkBudget::build(
                            snr, nr, cfg.pathloss_exponent, cfg.relay_position);
                        CellTally tally;
                        while (tally.bit_errors < cfg.min_bit_errors &&
                               tally.packets < cfg.max_packets) {
                            long n = std::min(kBatchPackets,
                                              cfg.max_packets - tally.packets);
                            CellTally b = run_batch(runner, budget, cfg.seed,
                                                    cell, tally.packets, n,
                                                    threads);
                            tally.packets += b.packets;
                            tally.bits += b.bits;
                            tally.bit_errors += b.bit_errors;
                        }
                        rec.packets = tally.packets;
                        rec.bits = tally.bits;
                        rec.bit_errors = tally.bit_errors;
                        rec.ber = tally.bits > 0
                                      ? static_cast<double>(tally.bit_errors) /
                                            static_cast<double>(tally.bits)
                                      : 0.0;
                        rec.ci95 = tally.bits > 0
                                       ? 1.96 * std::sqrt(rec.ber *
                                                          (1.0 - rec.ber) /
                                                          tally.bits)
                                       : 0.0;
                        rec.reached_min_errors =
                            tally.bit_errors >= cfg.min_bit_errors;
                    } catch (const std::exception& e) {
                        // isolate per-cell failures; campaign continues
                        if (progress)
                            *progress << "# cell " << cell_id.str()
                                      << " failed: " << e.what() << '\n';
                        rec.packets = -1;
                    }
                    rec.seconds =
                        std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
                    records.push_back(rec);
                    if (progress && rec.packets >= 0)
                        *progress << "# " << cell_id.str() << " ber=" << rec.ber
                                  << " errors=" << rec.bit_errors
                                  << " packets=" << rec.packets << '\n';
                }
            }
        }
    }
    return records;
}

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records,
                   const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << '\n';
    os << "scheme,code,n_relays,snr_db,packets,bits,bit_errors,ber,ci95,"
          "seconds\n";
    char buf[64];
    for (const auto& r : records) {
        os << r.scheme << ",\"" << r.code << "\"," << r.n_relays << ','
           << r.snr_db << ',' << r.packets << ',' << r.bits << ','
           << r.bit_errors << ',';
        std::snprintf(buf, sizeof buf, "%.8e,%.8e,%.3f", r.ber, r.ci95,
                      r.seconds);
        os << buf << '\n';
    }
}

std::vector<BerRecord> read_ber_csv(std::istream& is) {
    std::vector<BerRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // header row
            continue;
        }
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') {
                quoted = !quoted;
            } else if (c == ',' && !quoted) {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        fields.push_back(cur);
        if (fields.size() != 10)
            throw std::runtime_error("malformed BER CSV row: " + line);
        BerRecord r;
        r.scheme = fields[0];
        r.code = fields[1];
        r.n_relays = std::stoi(fields[2]);
        r.snr_db = std::stod(fields[3]);
        r.packets = std::stol(fields[4]);
        r.bits = std::stol(fields[5]);
        r.bit_errors = std::stol(fields[6]);
        r.ber = std::stod(fields[7]);
        r.ci95 = std::stod(fields[8]);
        r.seconds = std::stod(fields[9]);
        out.push_back(r);
    }
    return out;
}

std::optional<double> estimate_crossing(const std::vector<BerRecord>& records,
                                        double target_ber) {
    if (target_ber <= 0.0) throw std::invalid_argument("target must be > 0");
    for (std::size_t i = 1; i < records.size(); ++i) {
        double b0 = records[i - 1].ber, b1 = records[i].ber;
        if (b0 <= 0.0) continue;
        if (b0 >= target_ber && b1 <= target_ber && b1 > 0.0) {
            if (b0 == b1) return records[i - 1].snr_db;
            double t = (std::log10(b0) - std::log10(target_ber)) /
                       (std::log10(b0) - std::log10(b1));
            return records[i - 1].snr_db +
                   t * (records[i].snr_db - records[i - 1].snr_db);
        }
    }
    return std::nullopt;
}

std::vector<double> parse_snr_grid(const std::string& spec) {
    double start, step, stop;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        step <= 0.0 || stop < start)
        throw std::invalid_argument("bad SNR grid (want start:step:stop): " +
                                    spec);
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    return grid;
}

}  // namespace coopnet
