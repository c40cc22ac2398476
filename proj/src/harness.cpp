#include "mdpsm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "mdpsm/detector.hpp"
#include "mdpsm/rng.hpp"

namespace mdpsm {

namespace {

// Fixed batch/wave geometry keeps results independent of the worker count:
// a wave of batches is always consumed whole, and per-batch RNG streams are
// derived from logical indices, so the aggregate depends only on the seed.
constexpr long kBatchUses = 1000;
constexpr long kWaveBatches = 32;

struct BatchTotals {
    long bit_errors = 0;
    long bits = 0;
    long uses = 0;
};

template <typename BatchFn>
BerPoint run_point(double snr_db, const StopRule& stop, int jobs, BatchFn&& batch_fn) {
    BerPoint pt;
    pt.snr_db = snr_db;
    long next_batch = 0;
    while (pt.bit_errors < stop.min_bit_errors &&
           pt.channel_uses < stop.max_channel_uses) {
        const long wave_begin = next_batch;
        const long wave_end = wave_begin + kWaveBatches;
        std::vector<BatchTotals> slots(kWaveBatches);
        std::atomic<long> cursor{wave_begin};
        auto worker = [&]() {
            for (;;) {
                const long b = cursor.fetch_add(1);
                if (b >= wave_end) return;
                slots[static_cast<std::size_t>(b - wave_begin)] = batch_fn(b);
            }
        };
        if (jobs <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(jobs));
            for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        for (const BatchTotals& s : slots) {
            pt.bit_errors += s.bit_errors;
            pt.bits_tested += s.bits;
            pt.channel_uses += s.uses;
        }
        next_batch = wave_end;
    }
    pt.capped = pt.bit_errors < stop.min_bit_errors;
    pt.ber = pt.bits_tested > 0
                 ? static_cast<double>(pt.bit_errors) / static_cast<double>(pt.bits_tested)
                 : 0.0;
    return pt;
}

long batch_uses_for(const StopRule& stop) {
    return std::min(kBatchUses, std::max<long>(1, stop.max_channel_uses / kWaveBatches));
}

}  // namespace

BerCurve run_ber_psm(const PsmConfig& cfg, std::span<const double> snr_db,
                     const StopRule& stop, std::uint64_t seed,
                     const SimOptions& opts) {
    cfg.validate();
    const Constellation c = make_constellation(cfg.mod, cfg.q());
    const int m_bits = cfg.bits_per_use();
    const std::uint32_t mask = (1u << m_bits) - 1u;
    const long uses_per_batch = batch_uses_for(stop);
    const int block = std::max(1, opts.channel_block);

    BerCurve curve;
    curve.scheme_tag = "psm";
    curve.config_summary = cfg.summary();
    curve.seed = seed;
    for (std::size_t p = 0; p < snr_db.size(); ++p) {
        const double sigma2 = noise_for_snr_db(cfg, snr_db[p]).sigma2;
        auto batch_fn = [&, p](long batch_index) {
            std::mt19937_64 rng = make_stream_rng(seed, p, static_cast<std::uint64_t>(batch_index));
            BatchTotals totals;
            ChannelRealization chan;
            for (long u = 0; u < uses_per_batch; ++u) {
                if (u % block == 0) chan = draw_channel(cfg.n_t, cfg.n_r, rng);
                const std::uint32_t bits = static_cast<std::uint32_t>(rng()) & mask;
                const PsmMessage msg = map_bits_psm(bits, cfg, c);
                const Eigen::VectorXcd y = transmit_psm(msg, chan, c, sigma2, rng);
                const Eigen::VectorXcd r = normalize_received(y, chan.beta);
                const PsmDetectionResult det = detect_psm(r, c);
                const std::uint32_t det_bits = message_bits_psm(det.i, det.k, cfg, c);
                totals.bit_errors += count_bit_errors(bits, det_bits, m_bits);
            }
            totals.bits = uses_per_batch * m_bits;
            totals.uses = uses_per_batch;
            return totals;
        };
        curve.points.push_back(run_point(snr_db[p], stop, opts.jobs, batch_fn));
    }
    return curve;
}

BerCurve run_ber_mdpsm(const SystemConfig& cfg, std::span<const double> snr_db,
                       const StopRule& stop, std::uint64_t seed,
                       const SimOptions& opts) {
    cfg.validate();
    const Constellation c1 = make_constellation(cfg.mod1, cfg.q1());
    const Constellation c2 = make_constellation(cfg.mod2, cfg.q2());
    const ReceiveSet rs = build_receive_set(c1, rotate(c2, cfg.theta_deg));
    if (!rs.uniqueness_ok) {
        throw std::invalid_argument("receive set is not uniquely decodable at theta=" +
                                    std::to_string(cfg.theta_deg));
    }
    const PrecomputedTerms terms = precompute_terms(rs);
    const int m_bits = cfg.bits_per_use();
    const std::uint32_t mask = (1u << m_bits) - 1u;
    const long uses_per_batch = batch_uses_for(stop);
    const int block = std::max(1, opts.channel_block);

    BerCurve curve;
    curve.scheme_tag = "mdpsm";
    curve.config_summary = cfg.summary();
    curve.seed = seed;
    for (std::size_t p = 0; p < snr_db.size(); ++p) {
        const double sigma2 = noise_for_snr_db(cfg, snr_db[p]).sigma2;
        auto batch_fn = [&, p](long batch_index) {
            std::mt19937_64 rng = make_stream_rng(seed, p, static_cast<std::uint64_t>(batch_index));
            BatchTotals totals;
            DualChannel dual;
            for (long u = 0; u < uses_per_batch; ++u) {
                if (u % block == 0) {
                    dual = draw_dual_channel(cfg.n_t1, cfg.n_t2, cfg.n_r, rng);
                }
                const std::uint32_t bits = static_cast<std::uint32_t>(rng()) & mask;
                const TransmitMessage msg = map_bits(bits, cfg, c1, c2);
                const Eigen::VectorXcd y = transmit_mdpsm(msg, dual, rs, sigma2, rng);
                const Eigen::VectorXcd r = normalize_received(y, dual.unified);
                const DetectionResult det = detect_mdpsm_fast(r, rs, terms);
                const std::uint32_t det_bits =
                    message_bits(det.i1, det.i2, det.k1, det.k2, cfg, c1, c2);
                totals.bit_errors += count_bit_errors(bits, det_bits, m_bits);
            }
            totals.bits = uses_per_batch * m_bits;
            totals.uses = uses_per_batch;
            return totals;
        };
        curve.points.push_back(run_point(snr_db[p], stop, opts.jobs, batch_fn));
    }
    return curve;
}

DiversityEstimate estimate_diversity(const BerCurve& curve, double fit_lo_db,
                                     double fit_hi_db) {
    std::vector<std::pair<double, double>> samples;  // (snr_db, log10 ber)
    for (const BerPoint& pt : curve.points) {
        if (pt.snr_db < fit_lo_db || pt.snr_db > fit_hi_db) continue;
        if (pt.bit_errors < 100 || pt.ber <= 0.0) continue;
        samples.emplace_back(pt.snr_db, std::log10(pt.ber));
    }
    if (samples.size() < 3) {
        throw std::runtime_error("diversity fit needs at least 3 points with >=100 errors");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : samples) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(samples.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (const auto& [x, y] : samples) {
        const double e = y - (intercept + slope * x);
        rss += e * e;
    }
    DiversityEstimate est;
    est.order = -10.0 * slope;  // decades per 10 dB
    est.fit_lo_db = fit_lo_db;
    est.fit_hi_db = fit_hi_db;
    est.residual = std::sqrt(rss / n);
    est.points_used = static_cast<int>(samples.size());
    return est;
}

DiversityEstimate estimate_diversity_auto(const BerCurve& curve) {
    double hi = -std::numeric_limits<double>::infinity();
    for (const BerPoint& pt : curve.points) {
        if (pt.bit_errors >= 100 && pt.ber > 0.0 && pt.ber < 1e-2) {
            hi = std::max(hi, pt.snr_db);
        }
    }
    if (!std::isfinite(hi)) {
        throw std::runtime_error("no usable points below BER 1e-2");
    }
    return estimate_diversity(curve, hi - 10.0, hi);
}

int theoretical_diversity_psm(const PsmConfig& cfg) { return cfg.n_t - cfg.n_r + 1; }

int theoretical_diversity_mdpsm(const SystemConfig& cfg) {
    return cfg.n_t1 + cfg.n_t2 - 2 * cfg.n_r + 2;
}

double diversity_reference(double snr_db, int order) {
    return std::pow(10.0, -order * snr_db / 10.0);
}

double snr_at_ber(const BerCurve& curve, double target_ber) {
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const BerPoint& a = curve.points[i];
        const BerPoint& b = curve.points[i + 1];
        if (a.ber <= 0.0 || b.ber <= 0.0) continue;
        if (a.ber >= target_ber && b.ber <= target_ber) {
            const double la = std::log10(a.ber);
            const double lb = std::log10(b.ber);
            const double lt = std::log10(target_ber);
            if (la == lb) return a.snr_db;
            return a.snr_db + (b.snr_db - a.snr_db) * (lt - la) / (lb - la);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void write_ber_csv(const std::string& path, const BerCurve& curve,
                   const std::string& spec_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "# spec_hash=" << spec_hash << " seed=" << curve.seed << "\n";
    os << "snr_db,ber,bit_errors,bits_tested,capped\n";
    char buf[128];
    for (const BerPoint& pt : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%ld,%ld,%d\n", pt.snr_db, pt.ber,
                      pt.bit_errors, pt.bits_tested, pt.capped ? 1 : 0);
        os << buf;
    }
}

void write_run_manifest(const std::string& path, const BerCurve& curve,
                        const std::string& spec_hash) {
    nlohmann::json j;
    j["scheme"] = curve.scheme_tag;
    j["config"] = curve.config_summary;
    j["seed"] = curve.seed;
    j["spec_hash"] = spec_hash;
    j["version"] = version_string();
    j["timestamp"] = static_cast<long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << j.dump(2) << "\n";
}

std::string version_string() { return "mdpsm 0.1.0"; }

}  // namespace mdpsm
