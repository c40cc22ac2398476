#include "mdpsm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mdpsm {

namespace {

constexpr double kCondThreshold = 1e12;

}  // namespace

ChannelRealization zf_precode(Eigen::MatrixXcd h) {
    const auto n_r = h.rows();
    const auto n_t = h.cols();
    if (n_t < n_r || n_r < 1) {
        throw std::invalid_argument("zf_precode needs n_t >= n_r >= 1");
    }
    // Right pseudo-inverse through the Gram matrix g = h h^H, which is
    // Hermitian positive definite for full-rank h. The eigendecomposition
    // also yields the singular values of h for the conditioning guard.
    const Eigen::MatrixXcd g = h * h.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
    if (eig.info() != Eigen::Success) {
        throw std::domain_error("eigendecomposition of h h^H failed");
    }
    const Eigen::VectorXd ev = eig.eigenvalues();  // ascending
    const double lmin = ev(0);
    const double lmax = ev(n_r - 1);
    if (!(lmin > 0.0) || std::sqrt(lmax / lmin) > kCondThreshold) {
        throw std::domain_error("channel matrix is numerically singular");
    }
    ChannelRealization cr;
    cr.h = std::move(h);
    const Eigen::MatrixXcd g_inv =
        eig.eigenvectors() * ev.cwiseInverse().asDiagonal() *
        eig.eigenvectors().adjoint();
    cr.p = cr.h.adjoint() * g_inv;
    // tr(p p^H) = tr(g^{-1}) = sum of 1/eigenvalues
    cr.beta = static_cast<double>(n_r) / ev.cwiseInverse().sum();
    cr.sigma_min = std::sqrt(lmin);
    return cr;
}

Eigen::MatrixXcd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd h(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(r, c) = {re, im};
        }
    }
    return h;
}

ChannelRealization draw_channel(int n_t, int n_r, std::mt19937_64& rng) {
    if (n_t < n_r || n_r < 1) {
        throw std::invalid_argument("draw_channel needs n_t >= n_r >= 1");
    }
    int rejected = 0;
    for (;;) {
        try {
            ChannelRealization cr = zf_precode(gaussian_matrix(n_r, n_t, rng));
            cr.redraws = rejected;
            return cr;
        } catch (const std::domain_error&) {
            ++rejected;
        }
    }
}

DualChannel draw_dual_channel(int n_t1, int n_t2, int n_r, std::mt19937_64& rng) {
    DualChannel dc;
    dc.bs1 = draw_channel(n_t1, n_r, rng);
    dc.bs2 = draw_channel(n_t2, n_r, rng);
    dc.unified = unified_beta(dc.bs1.beta, dc.bs2.beta);
    return dc;
}

double expected_beta(int n_t, int n_r) {
    if (n_t <= n_r) {
        throw std::domain_error("expected beta is undefined for n_t <= n_r");
    }
    return static_cast<double>(n_t - n_r);
}

double unified_beta(double b1, double b2) {
    if (!(b1 > 0.0) || !(b2 > 0.0)) {
        throw std::domain_error("normalization factors must be positive");
    }
    return 0.5 * (b1 + b2);
}

double min_singular_tail(int n_r, double sigma_threshold) {
    if (sigma_threshold < 0.0) {
        throw std::domain_error("threshold must be nonnegative");
    }
    const double x = n_r * sigma_threshold;
    return std::exp(-x - 0.5 * x * x);
}

}  // namespace mdpsm
