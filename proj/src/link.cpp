#include "mdpsm/link.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpsm {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_int(int v) { return std::countr_zero(static_cast<unsigned>(v)); }

std::uint32_t field(std::uint32_t word, int offset, int width) {
    return (word >> offset) & ((1u << width) - 1u);
}

}  // namespace

int SystemConfig::spatial_bits() const { return log2_int(n_r); }

void SystemConfig::validate() const {
    if (!is_pow2(n_r) || n_r < 2) {
        throw std::invalid_argument("n_r must be a power of two >= 2");
    }
    if (n_t1 < n_r || n_t2 < n_r) {
        throw std::invalid_argument("each BS needs n_t >= n_r");
    }
}

std::string SystemConfig::summary() const {
    std::ostringstream os;
    os << "(" << n_t1 << "," << n_t2 << "," << n_r << "," << q1() << "," << q2()
       << ") " << scheme_name(mod1) << "-" << scheme_name(mod2) << "@" << theta_deg;
    return os.str();
}

int PsmConfig::spatial_bits() const { return log2_int(n_r); }

void PsmConfig::validate() const {
    if (!is_pow2(n_r) || n_r < 2) {
        throw std::invalid_argument("n_r must be a power of two >= 2");
    }
    if (n_t < n_r) {
        throw std::invalid_argument("n_t must be >= n_r");
    }
}

std::string PsmConfig::summary() const {
    std::ostringstream os;
    os << "(" << n_t << "," << n_r << "," << q() << ") " << scheme_name(mod);
    return os.str();
}

NoiseModel noise_for_snr_db(const SystemConfig& cfg, double snr_db) {
    NoiseModel nm;
    nm.gamma_b = std::pow(10.0, snr_db / 10.0);
    const double qbar = 0.5 * (cfg.q1() + cfg.q2());
    nm.sigma2 = 1.0 / ((qbar + cfg.spatial_bits()) * nm.gamma_b);
    return nm;
}

NoiseModel noise_for_snr_db(const PsmConfig& cfg, double snr_db) {
    NoiseModel nm;
    nm.gamma_b = std::pow(10.0, snr_db / 10.0);
    nm.sigma2 = 1.0 / ((cfg.q() + cfg.spatial_bits()) * nm.gamma_b);
    return nm;
}

TransmitMessage map_bits(std::uint32_t bits, const SystemConfig& cfg,
                         const Constellation& c1, const Constellation& c2) {
    const int k = cfg.spatial_bits();
    TransmitMessage m;
    m.bits = bits;
    m.i1 = static_cast<int>(field(bits, 0, k));
    m.k1 = c1.label_to_index[field(bits, k, cfg.q1())];
    m.i2 = static_cast<int>(field(bits, k + cfg.q1(), k));
    m.k2 = c2.label_to_index[field(bits, 2 * k + cfg.q1(), cfg.q2())];
    return m;
}

PsmMessage map_bits_psm(std::uint32_t bits, const PsmConfig& cfg,
                        const Constellation& c) {
    PsmMessage m;
    m.bits = bits;
    m.k = c.label_to_index[field(bits, 0, cfg.q())];
    m.i = static_cast<int>(field(bits, cfg.q(), cfg.spatial_bits()));
    return m;
}

std::uint32_t message_bits(int i1, int i2, int k1, int k2, const SystemConfig& cfg,
                           const Constellation& c1, const Constellation& c2) {
    const int k = cfg.spatial_bits();
    std::uint32_t w = static_cast<std::uint32_t>(i1);
    w |= c1.labels[static_cast<std::size_t>(k1)] << k;
    w |= static_cast<std::uint32_t>(i2) << (k + cfg.q1());
    w |= c2.labels[static_cast<std::size_t>(k2)] << (2 * k + cfg.q1());
    return w;
}

std::uint32_t message_bits_psm(int i, int k, const PsmConfig& cfg,
                               const Constellation& c) {
    return c.labels[static_cast<std::size_t>(k)] |
           (static_cast<std::uint32_t>(i) << cfg.q());
}

int count_bit_errors(std::uint32_t a, std::uint32_t b, int n_bits) {
    const std::uint32_t mask = (n_bits >= 32) ? ~0u : ((1u << n_bits) - 1u);
    return std::popcount((a ^ b) & mask);
}

void add_awgn(Eigen::VectorXcd& y, double sigma2, std::mt19937_64& rng) {
    if (sigma2 < 0.0) {
        throw std::domain_error("noise variance must be nonnegative");
    }
    if (sigma2 == 0.0) return;
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * sigma2));
    for (Eigen::Index l = 0; l < y.size(); ++l) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        y(l) += cplx{re, im};
    }
}

Eigen::VectorXcd transmit_psm(const PsmMessage& msg, const ChannelRealization& chan,
                              const Constellation& c, double sigma2,
                              std::mt19937_64& rng) {
    const cplx s = c.points[static_cast<std::size_t>(msg.k)];
    Eigen::VectorXcd y =
        std::sqrt(chan.beta) * (chan.h * (chan.p.col(msg.i) * s));
    add_awgn(y, sigma2, rng);
    return y;
}

Eigen::VectorXcd transmit_mdpsm(const TransmitMessage& msg, const DualChannel& dual,
                                const ReceiveSet& rs, double sigma2,
                                std::mt19937_64& rng) {
    const cplx s1 = rs.first.points[static_cast<std::size_t>(msg.k1)];
    const cplx s2 = rs.second.points[static_cast<std::size_t>(msg.k2)];
    const double scale = std::sqrt(dual.unified);
    Eigen::VectorXcd y = scale * (dual.bs1.h * (dual.bs1.p.col(msg.i1) * s1) +
                                  dual.bs2.h * (dual.bs2.p.col(msg.i2) * s2));
    add_awgn(y, sigma2, rng);
    return y;
}

}  // namespace mdpsm
