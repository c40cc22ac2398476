#pragma once

#include <cstdint>
#include <random>

#include "mdpsm/channel.hpp"
#include "mdpsm/constellation.hpp"

namespace mdpsm {

/// Two-BS system parameters. Bits per signal symbol are implied by the
/// modulation schemes; K = log2(n_r) spatial bits are spent per BS.
struct SystemConfig {
    int n_t1 = 0;
    int n_t2 = 0;
    int n_r = 0;
    Scheme mod1 = Scheme::qpsk;
    Scheme mod2 = Scheme::qpsk;
    double theta_deg = 0.0;

    int q1() const { return scheme_bits(mod1); }
    int q2() const { return scheme_bits(mod2); }
    int spatial_bits() const;               // K
    int bits_per_use() const { return q1() + q2() + 2 * spatial_bits(); }
    void validate() const;                  // throws std::invalid_argument
    std::string summary() const;            // "(n_t1, n_t2, n_r, q1, q2) mod1-mod2@theta"
};

/// Single-BS baseline parameters.
struct PsmConfig {
    int n_t = 0;
    int n_r = 0;
    Scheme mod = Scheme::qpsk;

    int q() const { return scheme_bits(mod); }
    int spatial_bits() const;
    int bits_per_use() const { return q() + spatial_bits(); }
    void validate() const;
    std::string summary() const;            // "(n_t, n_r, q) mod"
};

/// Per-bit SNR and the implied per-dimension noise variance
/// sigma2 = 1 / ((qbar + K) * gamma_b).
struct NoiseModel {
    double gamma_b = 0.0;  // linear SNR per bit
    double sigma2 = 0.0;
};

NoiseModel noise_for_snr_db(const SystemConfig& cfg, double snr_db);
NoiseModel noise_for_snr_db(const PsmConfig& cfg, double snr_db);

/// One channel use worth of source bits mapped onto indices. Bit blocks are
/// packed LSB-first into a word; fields in block order are
/// (K spatial1, q1 signal1, K spatial2, q2 signal2).
struct TransmitMessage {
    int i1 = 0;  // receive antenna targeted by BS1, 0-based
    int i2 = 0;
    int k1 = 0;  // symbol index into the BS1 alphabet
    int k2 = 0;
    std::uint32_t bits = 0;
};

/// PSM block order is (q signal, K spatial).
struct PsmMessage {
    int i = 0;
    int k = 0;
    std::uint32_t bits = 0;
};

TransmitMessage map_bits(std::uint32_t bits, const SystemConfig& cfg,
                         const Constellation& c1, const Constellation& c2);
PsmMessage map_bits_psm(std::uint32_t bits, const PsmConfig& cfg,
                        const Constellation& c);

/// Inverse mappings, reconstructing the bit block from indices.
std::uint32_t message_bits(int i1, int i2, int k1, int k2, const SystemConfig& cfg,
                           const Constellation& c1, const Constellation& c2);
std::uint32_t message_bits_psm(int i, int k, const PsmConfig& cfg,
                               const Constellation& c);

int count_bit_errors(std::uint32_t a, std::uint32_t b, int n_bits);

/// Adds circularly-symmetric complex Gaussian noise, variance sigma2 per
/// complex dimension. sigma2 = 0 is a no-op; negative sigma2 throws.
void add_awgn(Eigen::VectorXcd& y, double sigma2, std::mt19937_64& rng);

/// y = sqrt(beta) * H * P * e_i * s + n
Eigen::VectorXcd transmit_psm(const PsmMessage& msg, const ChannelRealization& chan,
                              const Constellation& c, double sigma2,
                              std::mt19937_64& rng);

/// Superposition of the two precoded downlinks, both scaled by the unified
/// normalization factor.
Eigen::VectorXcd transmit_mdpsm(const TransmitMessage& msg, const DualChannel& dual,
                                const ReceiveSet& rs, double sigma2,
                                std::mt19937_64& rng);

inline Eigen::VectorXcd normalize_received(const Eigen::VectorXcd& y, double beta) {
    return y / std::sqrt(beta);
}

}  // namespace mdpsm
