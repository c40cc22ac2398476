#include "mdpsm/detector.hpp"

#include <limits>
#include <stdexcept>

namespace mdpsm {

namespace {

inline double half_norm(const cplx& s) { return 0.5 * std::norm(s); }

inline double correlation(const cplx& r, const cplx& s) {
    // Re{r^* s}
    return r.real() * s.real() + r.imag() * s.imag();
}

struct Hypothesis {
    double cost = std::numeric_limits<double>::infinity();
    int i1 = 0, i2 = 0, k1 = 0, k2 = 0;

    bool better_than(const Hypothesis& o) const {
        if (cost != o.cost) return cost < o.cost;
        if (i1 != o.i1) return i1 < o.i1;
        if (i2 != o.i2) return i2 < o.i2;
        if (k1 != o.k1) return k1 < o.k1;
        return k2 < o.k2;
    }
};

struct SideCandidate {
    double cost = std::numeric_limits<double>::infinity();
    int i = -1, k = 0;
};

// Best (antenna, symbol) per BS, Eq.-style split metric. PSK alphabets use
// the equal-energy shortcut: maximizing Re{r^* s} reorders nothing.
SideCandidate best_side(const Eigen::VectorXcd& r, const std::vector<cplx>& pts,
                        const std::vector<double>& half_energy, bool equal_energy,
                        int skip_antenna) {
    SideCandidate best;
    double best_corr = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < r.size(); ++i) {
        if (i == skip_antenna) continue;
        for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
            if (equal_energy) {
                const double c = correlation(r(i), pts[static_cast<std::size_t>(k)]);
                if (c > best_corr) {
                    best_corr = c;
                    best = {half_energy[static_cast<std::size_t>(k)] - c, i, k};
                }
            } else {
                const double c = half_energy[static_cast<std::size_t>(k)] -
                                 correlation(r(i), pts[static_cast<std::size_t>(k)]);
                if (c < best.cost) best = {c, i, k};
            }
        }
    }
    return best;
}

Hypothesis best_equal_index(const Eigen::VectorXcd& r, const ReceiveSet& rs,
                            const PrecomputedTerms& terms) {
    const int m2 = rs.second.base.order;
    Hypothesis best;
    for (int i = 0; i < r.size(); ++i) {
        for (int k3 = 0; k3 < static_cast<int>(rs.sums.size()); ++k3) {
            const double cost =
                terms.half_energy_sum[static_cast<std::size_t>(k3)] -
                correlation(r(i), rs.sums[static_cast<std::size_t>(k3)]);
            Hypothesis h{cost, i, i, k3 / m2, k3 % m2};
            if (h.better_than(best)) best = h;
        }
    }
    return best;
}

void require_unique(const ReceiveSet& rs) {
    if (!rs.uniqueness_ok) {
        throw std::invalid_argument(
            "receive set is not uniquely decodable; detection is undefined");
    }
}

}  // namespace

PrecomputedTerms precompute_terms(const ReceiveSet& rs) {
    PrecomputedTerms t;
    t.half_energy_first.reserve(rs.first.points.size());
    for (const cplx& s : rs.first.points) t.half_energy_first.push_back(half_norm(s));
    t.half_energy_second.reserve(rs.second.points.size());
    for (const cplx& s : rs.second.points) t.half_energy_second.push_back(half_norm(s));
    t.half_energy_sum.reserve(rs.sums.size());
    for (const cplx& s : rs.sums) t.half_energy_sum.push_back(half_norm(s));
    return t;
}

PsmDetectionResult detect_psm(const Eigen::VectorXcd& r, const Constellation& c) {
    PsmDetectionResult best;
    best.cost = std::numeric_limits<double>::infinity();
    const bool equal_energy = scheme_is_psk(c.scheme);
    double best_corr = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < r.size(); ++i) {
        for (int k = 0; k < c.order; ++k) {
            const cplx& s = c.points[static_cast<std::size_t>(k)];
            if (equal_energy) {
                const double corr = correlation(r(i), s);
                if (corr > best_corr) {
                    best_corr = corr;
                    best = {i, k, half_norm(s) - corr, 0};
                }
            } else {
                const double cost = half_norm(s) - correlation(r(i), s);
                if (cost < best.cost) best = {i, k, cost, 0};
            }
        }
    }
    return best;
}

DetectionResult detect_mdpsm_joint(const Eigen::VectorXcd& r, const ReceiveSet& rs,
                                   const PrecomputedTerms& terms) {
    require_unique(rs);
    const int m1 = rs.first.order;
    const int m2 = rs.second.base.order;
    Hypothesis best;
    for (int i1 = 0; i1 < r.size(); ++i1) {
        for (int i2 = 0; i2 < r.size(); ++i2) {
            if (i1 == i2) {
                for (int k3 = 0; k3 < m1 * m2; ++k3) {
                    const double cost =
                        terms.half_energy_sum[static_cast<std::size_t>(k3)] -
                        correlation(r(i1), rs.sums[static_cast<std::size_t>(k3)]);
                    Hypothesis h{cost, i1, i2, k3 / m2, k3 % m2};
                    if (h.better_than(best)) best = h;
                }
            } else {
                for (int k1 = 0; k1 < m1; ++k1) {
                    const double c1 =
                        terms.half_energy_first[static_cast<std::size_t>(k1)] -
                        correlation(r(i1), rs.first.points[static_cast<std::size_t>(k1)]);
                    for (int k2 = 0; k2 < m2; ++k2) {
                        const double cost =
                            c1 +
                            terms.half_energy_second[static_cast<std::size_t>(k2)] -
                            correlation(r(i2),
                                        rs.second.points[static_cast<std::size_t>(k2)]);
                        Hypothesis h{cost, i1, i2, k1, k2};
                        if (h.better_than(best)) best = h;
                    }
                }
            }
        }
    }
    return {best.i1, best.i2, best.k1, best.k2, best.cost, 0};
}

DetectionResult detect_mdpsm_fast(const Eigen::VectorXcd& r, const ReceiveSet& rs,
                                  const PrecomputedTerms& terms) {
    require_unique(rs);
    const bool psk1 = scheme_is_psk(rs.first.scheme);
    const bool psk2 = scheme_is_psk(rs.second.base.scheme);

    const SideCandidate a1 =
        best_side(r, rs.first.points, terms.half_energy_first, psk1, -1);
    const SideCandidate b1 =
        best_side(r, rs.second.points, terms.half_energy_second, psk2, -1);

    Hypothesis unequal;
    if (a1.i != b1.i) {
        unequal = {a1.cost + b1.cost, a1.i, b1.i, a1.k, b1.k};
    } else {
        // Both unconstrained winners target the same antenna. The optimal
        // unequal-index pair deviates from them in at most one coordinate,
        // so the runner-up on a different antenna repairs each side.
        const SideCandidate a2 =
            best_side(r, rs.first.points, terms.half_energy_first, psk1, a1.i);
        const SideCandidate b2 =
            best_side(r, rs.second.points, terms.half_energy_second, psk2, b1.i);
        const SideCandidate* firsts[] = {&a1, &a2, &a2};
        const SideCandidate* seconds[] = {&b2, &b1, &b2};
        for (int c = 0; c < 3; ++c) {
            const SideCandidate& fa = *firsts[c];
            const SideCandidate& fb = *seconds[c];
            if (fa.i < 0 || fb.i < 0 || fa.i == fb.i) continue;
            Hypothesis h{fa.cost + fb.cost, fa.i, fb.i, fa.k, fb.k};
            if (h.better_than(unequal)) unequal = h;
        }
    }

    const Hypothesis equal = best_equal_index(r, rs, terms);
    const Hypothesis& best = equal.better_than(unequal) ? equal : unequal;
    return {best.i1, best.i2, best.k1, best.k2, best.cost, 0};
}

long complexity_psm(int m, int n_r) {
    return static_cast<long>(m) * (3 + 2 * static_cast<long>(n_r));
}

long complexity_mdpsm(int m1, int m2, int n_r) {
    const long sz = static_cast<long>(m1) + m2 + static_cast<long>(m1) * m2;
    return sz * (3 + 2 * static_cast<long>(n_r));
}

long closed_form_saving(int m1, int m2) {
    return 3l * m1 + 3l * m1 * m2 - 4;
}

}  // namespace mdpsm
