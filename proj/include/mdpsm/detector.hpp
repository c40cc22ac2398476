#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mdpsm/constellation.hpp"

namespace mdpsm {

/// Detected indices plus the metric value of the winning hypothesis
/// (half-energy minus real correlation, so noiseless hits score -|s|^2/2).
struct DetectionResult {
    int i1 = 0;
    int i2 = 0;
    int k1 = 0;
    int k2 = 0;
    double cost = 0.0;
    std::uint32_t bits = 0;  // filled by the caller's demapper
};

struct PsmDetectionResult {
    int i = 0;
    int k = 0;
    double cost = 0.0;
    std::uint32_t bits = 0;
};

/// Deterministic |s|^2/2 tables shared by all detection calls.
struct PrecomputedTerms {
    std::vector<double> half_energy_first;   // M1
    std::vector<double> half_energy_second;  // M2
    std::vector<double> half_energy_sum;     // M1*M2, indexed like sums
};

PrecomputedTerms precompute_terms(const ReceiveSet& rs);

/// Exact single-BS MLD: argmin over (i, k) of |s_k|^2/2 - Re{r_i^* s_k}.
/// Ties break toward smaller antenna index, then smaller symbol index.
PsmDetectionResult detect_psm(const Eigen::VectorXcd& r, const Constellation& c);

/// Exhaustive two-BS MLD over all unequal-index and equal-index
/// hypotheses. Requires a uniquely decodable receive set.
DetectionResult detect_mdpsm_joint(const Eigen::VectorXcd& r, const ReceiveSet& rs,
                                   const PrecomputedTerms& terms);

/// Reduced-complexity MLD: the unequal-index case splits into two
/// independent per-BS searches; an antenna collision between the two
/// winners is repaired from the runner-up candidates. Returns the same
/// result as detect_mdpsm_joint.
DetectionResult detect_mdpsm_fast(const Eigen::VectorXcd& r, const ReceiveSet& rs,
                                  const PrecomputedTerms& terms);

/// Real-multiplication counts of one detection.
long complexity_psm(int m, int n_r);                 // M * (3 + 2 n_R)
long complexity_mdpsm(int m1, int m2, int n_r);      // (M1+M2+M1M2) * (3 + 2 n_R)
/// Multiplications saved by the closed-form energy tables: 3M1 + 3M1M2 - 4.
long closed_form_saving(int m1, int m2);

}  // namespace mdpsm
