#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kgmasd::ctrl {

// Closed-loop agent network: A = -L - B K.
struct LinearAgentSystem {
    Eigen::MatrixXd laplacian;  // n x n, valid graph Laplacian
    Eigen::MatrixXd b;          // n x m
    Eigen::MatrixXd k_gain;     // m x n
    Eigen::MatrixXd a;          // n x n, always -laplacian - b * k_gain

    int n() const { return static_cast<int>(laplacian.rows()); }

    static LinearAgentSystem make(Eigen::MatrixXd adjacency, Eigen::MatrixXd b,
                                  Eigen::MatrixXd k_gain);

    // Shipped default: the five agents in pipeline order as a chain
    // (KG Master - Entity Extractor - Relation Extractor - KR Distiller -
    // Verifier), control input at the KG Master, K = 0.5 * ones.
    static LinearAgentSystem default_five_agent();
};

// L = D - W. Throws on asymmetric, negative, or nonzero-diagonal input.
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency);

struct ControllabilityReport {
    Eigen::MatrixXd q_c;  // [B AB ... A^{n-1}B]
    int rank = 0;
    bool controllable = false;
};

// Rank via singular values with cutoff n * eps * sigma_max.
ControllabilityReport controllability(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Exact rank of Q_c by rational Gaussian elimination (doubles converted
// exactly). Independent of the SVD path; used as the acceptance oracle.
int exact_rank(const Eigen::MatrixXd& m);

struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x;
    bool converged = false;     // ||x(T)|| <= 1e-3 ||x0||
    int divergence_step = -1;   // first non-finite step, -1 if none
};

// Fixed-step RK4 integration of xdot = a x.
Trajectory simulate(const LinearAgentSystem& system, const Eigen::VectorXd& x0, double dt,
                    int steps);

}  // namespace kgmasd::ctrl
