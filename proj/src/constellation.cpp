#include "mdpsm/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace mdpsm {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint32_t gray_code(std::uint32_t k) { return k ^ (k >> 1); }

// Counter-clockwise M-PSK starting at 1, Gray labels along the ring.
Constellation make_psk(Scheme scheme, int m) {
    Constellation c;
    c.scheme = scheme;
    c.order = m;
    c.bits_per_symbol = scheme_bits(scheme);
    c.points.reserve(m);
    c.labels.reserve(m);
    for (int k = 0; k < m; ++k) {
        const double ang = 2.0 * kPi * k / m;
        c.points.push_back({std::cos(ang), std::sin(ang)});
        c.labels.push_back(gray_code(static_cast<std::uint32_t>(k)));
    }
    return c;
}

// Square QAM on odd levels +-1, +-3, ..., scaled to unit average energy.
// Per-axis Gray labels, I bits above Q bits.
Constellation make_square_qam(Scheme scheme, int side) {
    Constellation c;
    c.scheme = scheme;
    c.order = side * side;
    c.bits_per_symbol = scheme_bits(scheme);
    double energy = 0.0;
    for (int i = 0; i < side; ++i) {
        const double lvl = -(side - 1) + 2.0 * i;
        energy += lvl * lvl;
    }
    energy = 2.0 * energy / side;  // mean |point|^2 before scaling
    const double scale = 1.0 / std::sqrt(energy);
    const int axis_bits = scheme_bits(scheme) / 2;
    for (int i = 0; i < side; ++i) {
        for (int q = 0; q < side; ++q) {
            const double re = (-(side - 1) + 2.0 * i) * scale;
            const double im = (-(side - 1) + 2.0 * q) * scale;
            c.points.push_back({re, im});
            c.labels.push_back((gray_code(static_cast<std::uint32_t>(i)) << axis_bits) |
                               gray_code(static_cast<std::uint32_t>(q)));
        }
    }
    return c;
}

void build_inverse_labels(Constellation& c) {
    c.label_to_index.assign(static_cast<std::size_t>(c.order), -1);
    for (int k = 0; k < c.order; ++k) {
        c.label_to_index[c.labels[static_cast<std::size_t>(k)]] = k;
    }
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

int scheme_bits(Scheme s) {
    switch (s) {
        case Scheme::bpsk: return 1;
        case Scheme::qpsk: return 2;
        case Scheme::psk8: return 3;
        case Scheme::qam16: return 4;
        case Scheme::qam64: return 6;
    }
    throw std::invalid_argument("unknown scheme");
}

int scheme_order(Scheme s) { return 1 << scheme_bits(s); }

bool scheme_is_psk(Scheme s) {
    return s == Scheme::bpsk || s == Scheme::qpsk || s == Scheme::psk8;
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::bpsk: return "bpsk";
        case Scheme::qpsk: return "qpsk";
        case Scheme::psk8: return "8psk";
        case Scheme::qam16: return "16qam";
        case Scheme::qam64: return "64qam";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
    if (name == "bpsk") return Scheme::bpsk;
    if (name == "qpsk" || name == "4psk") return Scheme::qpsk;
    if (name == "8psk") return Scheme::psk8;
    if (name == "16qam") return Scheme::qam16;
    if (name == "64qam") return Scheme::qam64;
    return std::nullopt;
}

Constellation make_constellation(Scheme scheme, int q) {
    if (q != scheme_bits(scheme)) {
        throw std::invalid_argument("bits per symbol " + std::to_string(q) +
                                    " does not match scheme " + scheme_name(scheme));
    }
    Constellation c;
    switch (scheme) {
        case Scheme::bpsk:
        case Scheme::qpsk:
        case Scheme::psk8:
            c = make_psk(scheme, scheme_order(scheme));
            break;
        case Scheme::qam16:
            c = make_square_qam(scheme, 4);
            break;
        case Scheme::qam64:
            c = make_square_qam(scheme, 8);
            break;
    }
    build_inverse_labels(c);
    return c;
}

RotatedConstellation rotate(const Constellation& c, double theta_deg) {
    RotatedConstellation r;
    r.base = c;
    r.theta_deg = theta_deg;
    const double t = theta_deg * kPi / 180.0;
    const cplx w{std::cos(t), std::sin(t)};
    r.points.reserve(c.points.size());
    for (const cplx& p : c.points) r.points.push_back(p * w);
    return r;
}

ReceiveSet build_receive_set(const Constellation& a, const RotatedConstellation& b) {
    ReceiveSet rs;
    rs.first = a;
    rs.second = b;
    rs.sums.reserve(a.points.size() * b.points.size());
    for (const cplx& pa : a.points) {
        for (const cplx& pb : b.points) {
            rs.sums.push_back(pa + pb);
        }
    }
    rs.combined.reserve(a.points.size() + b.points.size() + rs.sums.size());
    rs.combined.insert(rs.combined.end(), a.points.begin(), a.points.end());
    rs.combined.insert(rs.combined.end(), b.points.begin(), b.points.end());
    rs.combined.insert(rs.combined.end(), rs.sums.begin(), rs.sums.end());

    // Distinctness of the full receive alphabet covers both paper
    // conditions: BS alphabets disjoint, and the Minkowski map injective.
    rs.uniqueness_ok = true;
    for (std::size_t i = 0; i + 1 < rs.combined.size() && rs.uniqueness_ok; ++i) {
        for (std::size_t j = i + 1; j < rs.combined.size(); ++j) {
            if (std::abs(rs.combined[i] - rs.combined[j]) < kCollisionTol) {
                rs.uniqueness_ok = false;
                break;
            }
        }
    }
    return rs;
}

double min_distance(std::span<const cplx> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("min_distance needs at least two points");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, std::abs(points[i] - points[j]));
        }
    }
    return best;
}

std::vector<SubsetDescriptor> qam16_subsets() {
    const double alpha = std::atan(1.0 / 3.0);
    return {
        {std::sqrt(0.2), kPi / 4.0, 4},
        {std::sqrt(1.8), kPi / 4.0, 4},
        {1.0, alpha, 4},
        {1.0, kPi / 2.0 - alpha, 4},
    };
}

std::vector<EnergyTerm> closed_form_energy_terms(Scheme a, Scheme b, double theta_deg) {
    const double t = theta_deg * kPi / 180.0;
    std::vector<EnergyTerm> out;

    if (scheme_is_psk(a) && scheme_is_psk(b)) {
        const int m1 = scheme_order(a);
        const int m2 = scheme_order(b);
        if (m1 > m2) {
            throw UnsupportedClosedForm(
                "PSK-PSK closed form is tabulated for M1 <= M2 only");
        }
        // A sum e^{ja} + e^{j(b+t)} = e^{ja} (1 + e^{j(t+d)}) depends on
        // the phase difference d = b - a, which takes M2 values on the
        // 2*pi/M2 grid; each difference class is one circle of M1 symbols.
        out.reserve(static_cast<std::size_t>(m2));
        for (int j = 0; j < m2; ++j) {
            const double d = 2.0 * kPi * j / m2;
            const cplx w = 1.0 + cplx{std::cos(t + d), std::sin(t + d)};
            EnergyTerm term;
            term.value = 1.0 + std::cos(t + d);
            term.multiplicity = m1;
            term.phi = (std::abs(w) < kCollisionTol) ? 0.0 : std::arg(w);
            out.push_back(term);
        }
        return out;
    }

    if (scheme_is_psk(a) && b == Scheme::qam16) {
        const int m1 = scheme_order(a);
        // Each scaled-QPSK ring of the 16QAM set combines with the M1 PSK
        // phases on a lcm(4, M1) phase-difference grid.
        const int classes = lcm_int(4, m1);
        const int mult = 4 * m1 / classes;
        for (const SubsetDescriptor& sub : qam16_subsets()) {
            for (int j = 0; j < classes; ++j) {
                EnergyTerm term;
                term.value = 0.5 * (1.0 + sub.radius * sub.radius) +
                             sub.radius * std::cos(t + sub.phi + 2.0 * kPi * j / classes);
                term.multiplicity = mult;
                out.push_back(term);
            }
        }
        return out;
    }

    if (a == Scheme::qam16 && b == Scheme::qam16) {
        throw UnsupportedClosedForm(
            "16QAM-16QAM has no tabulated closed form; use brute-force enumeration");
    }
    throw UnsupportedClosedForm("no closed form for " + scheme_name(a) + "-" +
                                scheme_name(b));
}

SymbolProbabilities symbol_probabilities(int n_r, int m1, int m2) {
    if (n_r < 2 || (n_r & (n_r - 1)) != 0) {
        throw std::invalid_argument("n_r must be a power of two >= 2");
    }
    SymbolProbabilities p;
    p.class_first = 1.0 - 1.0 / n_r;
    p.class_second = 1.0 - 1.0 / n_r;
    p.class_sum = 1.0 / n_r;
    p.per_symbol_first = static_cast<double>(n_r - 1) / (static_cast<double>(m1) * n_r);
    p.per_symbol_second = static_cast<double>(n_r - 1) / (static_cast<double>(m2) * n_r);
    p.per_symbol_sum = 1.0 / (static_cast<double>(m1) * m2 * n_r);
    return p;
}

std::string constellation_to_json(const Constellation& c) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        if (k) os << ",";
        os << "[" << c.points[k].real() << "," << c.points[k].imag() << ","
           << c.labels[k] << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace mdpsm
