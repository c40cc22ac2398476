#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace mdpsm {

/// One Rayleigh channel with its zero-forcing precoder. h*p = I within
/// numerical tolerance, and beta = n_R / tr(p p^H) restores unit average
/// transmit power.
struct ChannelRealization {
    Eigen::MatrixXcd h;      // n_R x n_T, i.i.d. CN(0,1) entries
    Eigen::MatrixXcd p;      // n_T x n_R, right pseudo-inverse of h
    double beta = 0.0;
    double sigma_min = 0.0;  // smallest singular value of h
    int redraws = 0;         // ill-conditioned draws rejected first
};

/// The two-BS downlink: both precode toward the same receive array and
/// share the averaged normalization factor over the backhaul.
struct DualChannel {
    ChannelRealization bs1;
    ChannelRealization bs2;
    double unified = 0.0;  // (beta1 + beta2) / 2
};

/// Zero-forcing precoder for a given channel matrix. Throws
/// std::domain_error if the channel is rank deficient beyond the
/// condition threshold (1e12).
ChannelRealization zf_precode(Eigen::MatrixXcd h);

/// n_R x n_T matrix of i.i.d. CN(0,1) entries (real/imag variance 1/2).
Eigen::MatrixXcd gaussian_matrix(int rows, int cols, std::mt19937_64& rng);

/// Draws channels until one is acceptably conditioned; the reject count is
/// recorded in the result.
ChannelRealization draw_channel(int n_t, int n_r, std::mt19937_64& rng);

DualChannel draw_dual_channel(int n_t1, int n_t2, int n_r, std::mt19937_64& rng);

/// Expected normalization factor n_T - n_R, from
/// E[tr((H H^H)^{-1})] = n_R / (n_T - n_R). Throws std::domain_error for
/// n_T <= n_R where the expectation diverges.
double expected_beta(int n_t, int n_r);

/// Arithmetic mean of the two per-BS factors. Inputs must be positive.
double unified_beta(double b1, double b2);

/// Asymptotic tail reference e^{-x - x^2/2} evaluated at x = n_R * sigma.
double min_singular_tail(int n_r, double sigma_threshold);

}  // namespace mdpsm
