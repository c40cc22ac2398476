#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdpsm {

using cplx = std::complex<double>;

/// Two complex points closer than this are treated as the same symbol.
/// Exact float equality is brittle under e^{j*theta} arithmetic.
inline constexpr double kCollisionTol = 1e-9;

enum class Scheme { bpsk, qpsk, psk8, qam16, qam64 };

int scheme_bits(Scheme s);   // bits per signal symbol
int scheme_order(Scheme s);  // alphabet size M = 2^q
bool scheme_is_psk(Scheme s);
std::string scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(const std::string& name);

/// Unit-average-energy modulation alphabet with Gray-coded bit labels.
/// points[k] is the k-th symbol in canonical order (PSK: counter-clockwise
/// from angle 0; QAM: row-major over the I/Q level grid). labels[k] is the
/// bit pattern mapped onto points[k].
struct Constellation {
    std::vector<cplx> points;
    std::vector<std::uint32_t> labels;
    std::vector<int> label_to_index;  // inverse of labels
    Scheme scheme = Scheme::bpsk;
    int order = 0;            // M
    int bits_per_symbol = 0;  // q

    const cplx& point_for_label(std::uint32_t label) const {
        return points[static_cast<std::size_t>(label_to_index[label])];
    }
};

/// Builds the alphabet for a scheme. q must match the scheme's bit count.
Constellation make_constellation(Scheme scheme, int q);

struct RotatedConstellation {
    Constellation base;
    double theta_deg = 0.0;
    std::vector<cplx> points;  // base.points[k] * e^{j*theta}
};

RotatedConstellation rotate(const Constellation& c, double theta_deg);

/// The alphabet seen on a nonzero receive antenna: the two per-BS alphabets
/// plus their Minkowski sum (both BSs hitting the same antenna).
struct ReceiveSet {
    Constellation first;          // BS1 alphabet
    RotatedConstellation second;  // BS2 alphabet, rotated
    std::vector<cplx> sums;       // all pairwise sums, index k3 = k1*M2 + k2
    std::vector<cplx> combined;   // first ++ second ++ sums (duplicates kept)
    bool uniqueness_ok = false;   // true iff all combined points are distinct
};

ReceiveSet build_receive_set(const Constellation& a, const RotatedConstellation& b);

/// Minimum pairwise Euclidean distance. Throws std::invalid_argument for
/// fewer than two points; duplicate points give 0.
double min_distance(std::span<const cplx> points);

struct UnsupportedClosedForm : std::domain_error {
    using std::domain_error::domain_error;
};

/// One group of equal-energy sum symbols: |s|^2/2 value, how many sum
/// symbols share it, and (PSK-PSK only) the angle of the group's first
/// symbol. The group's symbols sit at phi + 2*pi*l/count on one circle.
struct EnergyTerm {
    double value = 0.0;
    int multiplicity = 0;
    std::optional<double> phi;  // radians
};

/// Closed-form half-square-norms of the Minkowski-sum alphabet as a
/// function of the rotation angle. Supported: PSK-PSK with M1 <= M2, and
/// PSK-16QAM. Throws UnsupportedClosedForm otherwise (16QAM-16QAM has 40
/// distinct values and is evaluated by brute force instead).
std::vector<EnergyTerm> closed_form_energy_terms(Scheme a, Scheme b, double theta_deg);

/// A scaled-QPSK ring: radius, angle of first symbol, symbol count.
struct SubsetDescriptor {
    double radius = 0.0;
    double phi = 0.0;
    int count = 0;
};

/// The four disjoint scaled-QPSK rings that make up unit-energy 16QAM:
/// radii {sqrt(0.2), sqrt(1.8), 1, 1}, first angles {pi/4, pi/4, alpha,
/// pi/2 - alpha} with alpha = arctan(1/3).
std::vector<SubsetDescriptor> qam16_subsets();

/// Membership and per-symbol probabilities of the noiseless nonzero
/// receive sample, driven by Pr[i1 = i2] = 1/n_R.
struct SymbolProbabilities {
    double class_first = 0.0;   // Pr[sample in BS1 alphabet] = 1 - 1/n_R
    double class_second = 0.0;  // Pr[sample in BS2 alphabet] = 1 - 1/n_R
    double class_sum = 0.0;     // Pr[sample in sum alphabet] = 1/n_R
    double per_symbol_first = 0.0;
    double per_symbol_second = 0.0;
    double per_symbol_sum = 0.0;
};

SymbolProbabilities symbol_probabilities(int n_r, int m1, int m2);

/// Debug serialization: JSON list of [re, im, label] triples.
std::string constellation_to_json(const Constellation& c);

}  // namespace mdpsm
