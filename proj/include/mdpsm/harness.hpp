#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdpsm/link.hpp"

namespace mdpsm {

/// Per-SNR-point termination: stop after min_bit_errors, or give up at
/// max_channel_uses (the point is then flagged as capped).
struct StopRule {
    long min_bit_errors = 200;
    long max_channel_uses = 20'000'000;
};

struct BerPoint {
    double snr_db = 0.0;
    double ber = 0.0;
    long bit_errors = 0;
    long bits_tested = 0;
    long channel_uses = 0;
    bool capped = false;
};

struct BerCurve {
    std::vector<BerPoint> points;
    std::string scheme_tag;       // "psm" or "mdpsm"
    std::string config_summary;
    std::uint64_t seed = 0;
};

/// Simulation options shared by both schemes. channel_block > 1 reuses one
/// channel realization for a block of consecutive uses.
struct SimOptions {
    int jobs = 1;
    int channel_block = 1;
};

BerCurve run_ber_psm(const PsmConfig& cfg, std::span<const double> snr_db,
                     const StopRule& stop, std::uint64_t seed,
                     const SimOptions& opts = {});

BerCurve run_ber_mdpsm(const SystemConfig& cfg, std::span<const double> snr_db,
                       const StopRule& stop, std::uint64_t seed,
                       const SimOptions& opts = {});

/// Least-squares slope of log10(BER) against SNR in dB, reported in
/// diversity decades per 10 dB. Points need at least 100 bit errors.
struct DiversityEstimate {
    double order = 0.0;
    double fit_lo_db = 0.0;
    double fit_hi_db = 0.0;
    double residual = 0.0;  // rms of the fit residuals, log10 domain
    int points_used = 0;
};

DiversityEstimate estimate_diversity(const BerCurve& curve, double fit_lo_db,
                                     double fit_hi_db);

/// Fit window rule: the top 10 dB of the simulated range where BER < 1e-2.
DiversityEstimate estimate_diversity_auto(const BerCurve& curve);

int theoretical_diversity_psm(const PsmConfig& cfg);      // n_T - n_R + 1
int theoretical_diversity_mdpsm(const SystemConfig& cfg); // n_T1 + n_T2 - 2 n_R + 2

/// gamma_b^{-d} reference value at an SNR grid point.
double diversity_reference(double snr_db, int order);

/// SNR (dB) where the curve crosses target_ber, log-linear interpolation
/// between the bracketing points. NaN if the curve never reaches it.
double snr_at_ber(const BerCurve& curve, double target_ber);

/// CSV body: snr_db,ber,bit_errors,bits_tested,capped. The header comment
/// carries the spec hash and seed so artifacts are self-identifying.
void write_ber_csv(const std::string& path, const BerCurve& curve,
                   const std::string& spec_hash);

/// JSON run manifest (config summary, seed, spec hash, version, timestamps).
void write_run_manifest(const std::string& path, const BerCurve& curve,
                        const std::string& spec_hash);

/// Version string embedded in manifests.
std::string version_string();

}  // namespace mdpsm
