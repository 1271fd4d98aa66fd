#include "kgmasd/control.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace kgmasd::ctrl {

using Rational = boost::multiprecision::cpp_rational;

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency) {
    const auto n = adjacency.rows();
    if (adjacency.cols() != n) throw std::invalid_argument("laplacian: adjacency must be square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (adjacency(i, i) != 0.0)
            throw std::invalid_argument("laplacian: adjacency diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (adjacency(i, j) < 0.0)
                throw std::invalid_argument("laplacian: adjacency must be non-negative");
            if (std::abs(adjacency(i, j) - adjacency(j, i)) > 1e-12)
                throw std::invalid_argument("laplacian: adjacency must be symmetric");
        }
    }
    Eigen::MatrixXd l = -adjacency;
    for (Eigen::Index i = 0; i < n; ++i) l(i, i) = adjacency.row(i).sum();
    return l;
}

LinearAgentSystem LinearAgentSystem::make(Eigen::MatrixXd adjacency, Eigen::MatrixXd b,
                                          Eigen::MatrixXd k_gain) {
    LinearAgentSystem sys;
    sys.laplacian = kgmasd::ctrl::laplacian(adjacency);
    const auto n = sys.laplacian.rows();
    if (b.rows() != n) throw std::invalid_argument("input matrix B has wrong row count");
    if (k_gain.cols() != n || k_gain.rows() != b.cols())
        throw std::invalid_argument("gain matrix K has wrong shape");
    sys.b = std::move(b);
    sys.k_gain = std::move(k_gain);
    sys.a = -sys.laplacian - sys.b * sys.k_gain;
    return sys;
}

LinearAgentSystem LinearAgentSystem::default_five_agent() {
    constexpr int n = 5;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
    b(0, 0) = 1.0;
    Eigen::MatrixXd k = Eigen::MatrixXd::Constant(1, n, 0.5);
    return make(w, b, k);
}

ControllabilityReport controllability(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const auto n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("controllability: A must be square");
    if (b.rows() != n) throw std::invalid_argument("controllability: B has wrong row count");
    const auto m = b.cols();

    ControllabilityReport report;
    report.q_c.resize(n, n * m);
    Eigen::MatrixXd block = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        report.q_c.middleCols(k * m, m) = block;
        block = a * block;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(report.q_c);
    const auto& sv = svd.singularValues();
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       (sv.size() > 0 ? sv(0) : 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++report.rank;
    report.controllable = report.rank == n;
    return report;
}

int exact_rank(const Eigen::MatrixXd& m) {
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto cols = static_cast<std::size_t>(m.cols());
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (!std::isfinite(v)) throw std::invalid_argument("exact_rank: non-finite entry");
            a[i][j] = Rational(v);  // binary doubles convert exactly
        }

    int rank = 0;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[pivot_row]);
        const Rational pivot = a[pivot_row][col];
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            if (a[r][col] == 0) continue;
            const Rational factor = a[r][col] / pivot;
            for (std::size_t c = col; c < cols; ++c) a[r][c] -= factor * a[pivot_row][c];
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

Trajectory simulate(const LinearAgentSystem& system, const Eigen::VectorXd& x0, double dt,
                    int steps) {
    if (dt <= 0.0) throw std::invalid_argument("simulate: dt must be > 0");
    if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (x0.size() != system.n()) throw std::invalid_argument("simulate: x0 has wrong dimension");

    const Eigen::MatrixXd& a = system.a;
    Trajectory traj;
    traj.t.reserve(static_cast<std::size_t>(steps) + 1);
    traj.x.reserve(static_cast<std::size_t>(steps) + 1);
    traj.t.push_back(0.0);
    traj.x.push_back(x0);

    Eigen::VectorXd x = x0;
    for (int k = 1; k <= steps; ++k) {
        const Eigen::VectorXd k1 = a * x;
        const Eigen::VectorXd k2 = a * (x + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = a * (x + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = a * (x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.t.push_back(k * dt);
        traj.x.push_back(x);
        if (!x.allFinite()) {
            traj.divergence_step = k;
            traj.converged = false;
            return traj;
        }
    }
    traj.converged = x.norm() <= 1e-3 * x0.norm();
    return traj;
}

}  // namespace kgmasd::ctrl
