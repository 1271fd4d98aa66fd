#include "kgmasd/sgdlab.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kgmasd::sgd {

QuadraticProblem::QuadraticProblem(std::vector<double> hessian_eigs, std::uint64_t rotation_seed) {
    if (hessian_eigs.empty()) throw std::invalid_argument("QuadraticProblem: no eigenvalues");
    const int n = static_cast<int>(hessian_eigs.size());
    mu_ = hessian_eigs[0];
    l_ = hessian_eigs[0];
    for (double e : hessian_eigs) {
        if (e <= 0.0) throw std::invalid_argument("QuadraticProblem: eigenvalues must be > 0");
        mu_ = std::min(mu_, e);
        l_ = std::max(l_, e);
    }

    Eigen::VectorXd lambda =
        Eigen::Map<const Eigen::VectorXd>(hessian_eigs.data(), n);
    if (n == 1) {
        hessian_ = lambda.asDiagonal();
        return;
    }
    // Random orthogonal basis: QR of a seeded Gaussian matrix.
    std::mt19937_64 rng(rotation_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    hessian_ = q * lambda.asDiagonal() * q.transpose();
    hessian_ = 0.5 * (hessian_ + hessian_.transpose());  // exact symmetry
}

double QuadraticProblem::value(const Eigen::VectorXd& theta) const {
    return 0.5 * theta.dot(hessian_ * theta);
}

Eigen::VectorXd QuadraticProblem::gradient(const Eigen::VectorXd& theta) const {
    return hessian_ * theta;
}

double NoiseModel::variance() const { return sigma0_sq * (1.0 - c * gamma); }

void NoiseModel::validate() const {
    if (sigma0_sq <= 0.0) throw std::invalid_argument("NoiseModel: sigma0_sq must be > 0");
    if (c <= 0.0 || c > 1.0) throw std::invalid_argument("NoiseModel: c must be in (0,1]");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("NoiseModel: gamma in [0,1]");
    if (variance() < 0.0) throw std::invalid_argument("NoiseModel: negative variance");
}

double grad_check(const QuadraticProblem& problem, const Eigen::VectorXd& point, double h) {
    if (h <= 0.0) throw std::invalid_argument("grad_check: h must be > 0");
    const Eigen::VectorXd g = problem.gradient(point);
    double worst = 0.0;
    for (int i = 0; i < problem.dim(); ++i) {
        Eigen::VectorXd plus = point, minus = point;
        plus(i) += h;
        minus(i) -= h;
        const double fd = (problem.value(plus) - problem.value(minus)) / (2.0 * h);
        const double rel = std::abs(fd - g(i)) / (1.0 + std::abs(g(i)));
        worst = std::max(worst, rel);
    }
    return worst;
}

SgdTrace run_sgd(const QuadraticProblem& problem, const NoiseModel& noise, double alpha,
                 int steps, int n_seeds, std::uint64_t base_seed) {
    noise.validate();
    if (alpha <= 0.0 || alpha >= 2.0 / problem.smoothness())
        throw std::invalid_argument("run_sgd: alpha must lie in (0, 2/L)");
    if (steps < 1 || n_seeds < 1) throw std::invalid_argument("run_sgd: steps, n_seeds >= 1");

    const int n = problem.dim();
    const double sigma_sq = noise.variance();
    const double coord_sd = sigma_sq > 0.0 ? std::sqrt(sigma_sq / n) : 0.0;

    std::vector<double> sum(static_cast<std::size_t>(steps) + 1, 0.0);
    std::vector<double> sum_sq(static_cast<std::size_t>(steps) + 1, 0.0);

    for (int seed = 0; seed < n_seeds; ++seed) {
        std::mt19937_64 rng(base_seed + static_cast<std::uint64_t>(seed));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
        theta(0) = 1.0;
        for (int k = 0; k <= steps; ++k) {
            const double f = problem.value(theta);
            sum[static_cast<std::size_t>(k)] += f;
            sum_sq[static_cast<std::size_t>(k)] += f * f;
            if (k == steps) break;
            Eigen::VectorXd g = problem.gradient(theta);
            if (coord_sd > 0.0)
                for (int i = 0; i < n; ++i) g(i) += coord_sd * normal(rng);
            theta -= alpha * g;
        }
    }

    SgdTrace trace;
    trace.mean_subopt.resize(sum.size());
    trace.stderr_subopt.resize(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
        const double mean = sum[k] / n_seeds;
        trace.mean_subopt[k] = mean;
        if (n_seeds > 1) {
            const double var = std::max(0.0, (sum_sq[k] - n_seeds * mean * mean) / (n_seeds - 1));
            trace.stderr_subopt[k] = std::sqrt(var / n_seeds);
        }
    }
    return trace;
}

double noise_floor(const QuadraticProblem& problem, const NoiseModel& noise, double alpha) {
    return alpha * problem.smoothness() * noise.variance() / (2.0 * problem.mu());
}

double theorem2_bound(const QuadraticProblem& problem, const NoiseModel& noise, double alpha,
                      int k, double initial_gap) {
    noise.validate();
    const double contraction = std::pow(1.0 - alpha * problem.mu(), k);
    return contraction * initial_gap + noise_floor(problem, noise, alpha);
}

}  // namespace kgmasd::sgd
