#include "kgmasd/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kgmasd::info {

namespace {
constexpr double kMassTol = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace

DiscreteJoint::DiscreteJoint(std::size_t y_card, std::size_t s_card, std::vector<double> p)
    : y_card_(y_card), s_card_(s_card), p_(std::move(p)) {
    if (y_card_ < 2) throw std::invalid_argument("DiscreteJoint: y_card must be >= 2");
    if (s_card_ < 1) throw std::invalid_argument("DiscreteJoint: s_card must be >= 1");
    if (p_.size() != y_card_ * s_card_)
        throw std::invalid_argument("DiscreteJoint: probability table has wrong shape");
    double mass = 0.0;
    for (double v : p_) {
        if (v < 0.0) throw std::invalid_argument("DiscreteJoint: negative probability entry");
        mass += v;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("DiscreteJoint: total mass differs from 1");
    // Renormalize away float drift below the reporting tolerance.
    if (std::abs(mass - 1.0) > kMassTol)
        for (double& v : p_) v /= mass;
}

std::vector<double> DiscreteJoint::y_marginal() const {
    std::vector<double> m(y_card_, 0.0);
    for (std::size_t y = 0; y < y_card_; ++y)
        for (std::size_t s = 0; s < s_card_; ++s) m[y] += p(y, s);
    return m;
}

std::vector<double> DiscreteJoint::s_marginal() const {
    std::vector<double> m(s_card_, 0.0);
    for (std::size_t y = 0; y < y_card_; ++y)
        for (std::size_t s = 0; s < s_card_; ++s) m[s] += p(y, s);
    return m;
}

GarblingKernel::GarblingKernel(std::size_t rows, std::size_t cols, std::vector<double> k)
    : rows_(rows), cols_(cols), k_(std::move(k)) {
    if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("GarblingKernel: empty shape");
    if (k_.size() != rows_ * cols_)
        throw std::invalid_argument("GarblingKernel: matrix has wrong shape");
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (k_[r * cols_ + c] < 0.0)
                throw std::invalid_argument("GarblingKernel: negative entry");
            sum += k_[r * cols_ + c];
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("GarblingKernel: row " + std::to_string(r) +
                                        " does not sum to 1");
    }
}

GarblingKernel GarblingKernel::identity(std::size_t n) {
    std::vector<double> k(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) k[i * n + i] = 1.0;
    return GarblingKernel(n, n, std::move(k));
}

double entropy_y(const DiscreteJoint& j) {
    double h = 0.0;
    for (double m : j.y_marginal()) h -= xlogx(m);
    return h;
}

double conditional_entropy(const DiscreteJoint& j) {
    const auto ps = j.s_marginal();
    double h = 0.0;
    for (std::size_t s = 0; s < j.s_card(); ++s) {
        if (ps[s] <= 0.0) continue;
        for (std::size_t y = 0; y < j.y_card(); ++y) {
            const double cond = j.p(y, s) / ps[s];
            h -= ps[s] * xlogx(cond);
        }
    }
    return h;
}

double mutual_information(const DiscreteJoint& j) {
    return entropy_y(j) - conditional_entropy(j);
}

double gamma_index(const DiscreteJoint& j) {
    const double hy = entropy_y(j);
    if (hy <= 0.0) throw std::domain_error("gamma undefined: H(Y) = 0");
    double g = mutual_information(j) / hy;
    if (g < 0.0 && g >= -kMassTol) g = 0.0;
    if (g > 1.0 && g <= 1.0 + kMassTol) g = 1.0;
    return g;
}

DiscreteJoint garble(const DiscreteJoint& j, const GarblingKernel& k) {
    if (k.rows() != j.s_card())
        throw std::invalid_argument("garble: kernel rows must match s_card");
    std::vector<double> out(j.y_card() * k.cols(), 0.0);
    for (std::size_t y = 0; y < j.y_card(); ++y)
        for (std::size_t s = 0; s < j.s_card(); ++s) {
            const double mass = j.p(y, s);
            if (mass == 0.0) continue;
            for (std::size_t sp = 0; sp < k.cols(); ++sp)
                out[y * k.cols() + sp] += mass * k.k(s, sp);
        }
    return DiscreteJoint(j.y_card(), k.cols(), std::move(out));
}

double bayes_accuracy(const DiscreteJoint& j) {
    double acc = 0.0;
    for (std::size_t s = 0; s < j.s_card(); ++s) {
        double best = 0.0;
        for (std::size_t y = 0; y < j.y_card(); ++y) best = std::max(best, j.p(y, s));
        acc += best;  // p(s) * max_y p(y|s) = max_y p(y,s)
    }
    return acc;
}

Theorem1Report check_theorem1(const DiscreteJoint& j, const GarblingKernel& k) {
    const DiscreteJoint after = garble(j, k);
    Theorem1Report r;
    r.logscore_before = -conditional_entropy(j);
    r.logscore_after = -conditional_entropy(after);
    r.accuracy_before = bayes_accuracy(j);
    r.accuracy_after = bayes_accuracy(after);
    r.holds = r.logscore_after <= r.logscore_before + 1e-9 &&
              r.accuracy_after <= r.accuracy_before + 1e-9;
    return r;
}

FanoReport fano_check(const DiscreteJoint& j) {
    FanoReport r;
    r.bayes_error = 1.0 - bayes_accuracy(j);
    r.fano_lower = (conditional_entropy(j) - 1.0) / std::log(static_cast<double>(j.y_card()));
    r.holds = r.bayes_error >= r.fano_lower - 1e-9;
    return r;
}

}  // namespace kgmasd::info
