#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace kgmasd::sgd {

// Quadratic f(theta) = 1/2 theta^T H theta with known spectrum. Realizes
// the PL and L-smoothness assumptions exactly: mu = min eig, L = max eig,
// minimizer theta* = 0.
class QuadraticProblem {
  public:
    QuadraticProblem(std::vector<double> hessian_eigs, std::uint64_t rotation_seed = 0);

    int dim() const { return static_cast<int>(hessian_.rows()); }
    double mu() const { return mu_; }
    double smoothness() const { return l_; }
    const Eigen::MatrixXd& hessian() const { return hessian_; }

    double value(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;

  private:
    Eigen::MatrixXd hessian_;
    double mu_ = 0.0;
    double l_ = 0.0;
};

// sigma^2(gamma) = sigma0_sq * (1 - c * gamma); gradient noise shrinks as
// the prior-quality index grows.
struct NoiseModel {
    double sigma0_sq = 1.0;
    double c = 1.0;
    double gamma = 0.0;

    double variance() const;
    void validate() const;
};

struct SgdTrace {
    std::vector<double> mean_subopt;  // length steps + 1, index = iteration k
    std::vector<double> stderr_subopt;
};

// Max relative error of central finite differences against the analytic
// gradient H theta.
double grad_check(const QuadraticProblem& problem, const Eigen::VectorXd& point, double h);

// theta_{k+1} = theta_k - alpha (H theta_k + xi_k), xi_k isotropic
// Gaussian with total variance sigma^2(gamma). theta_0 = e_1. Step size
// must lie in (0, 2/L). Seeds are base_seed..base_seed+n_seeds-1.
SgdTrace run_sgd(const QuadraticProblem& problem, const NoiseModel& noise, double alpha,
                 int steps, int n_seeds, std::uint64_t base_seed = 1);

// RHS of the linear-rate bound: (1-alpha*mu)^k * initial_gap
// + alpha*L*sigma^2(gamma) / (2*mu).
double theorem2_bound(const QuadraticProblem& problem, const NoiseModel& noise, double alpha,
                      int k, double initial_gap);

double noise_floor(const QuadraticProblem& problem, const NoiseModel& noise, double alpha);

}  // namespace kgmasd::sgd
