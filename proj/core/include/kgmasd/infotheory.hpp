#pragma once

#include <cstddef>
#include <vector>

namespace kgmasd::info {

// Finite joint distribution over (Y, S), row-major p[y][s]. All entries
// non-negative, total mass 1 within 1e-12. Natural logs throughout.
class DiscreteJoint {
  public:
    DiscreteJoint(std::size_t y_card, std::size_t s_card, std::vector<double> p);

    std::size_t y_card() const { return y_card_; }
    std::size_t s_card() const { return s_card_; }
    double p(std::size_t y, std::size_t s) const { return p_[y * s_card_ + s]; }

    std::vector<double> y_marginal() const;
    std::vector<double> s_marginal() const;

  private:
    std::size_t y_card_;
    std::size_t s_card_;
    std::vector<double> p_;
};

// Row-stochastic Markov kernel k[s][s'], rows sum to 1 within 1e-12.
class GarblingKernel {
  public:
    GarblingKernel(std::size_t rows, std::size_t cols, std::vector<double> k);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double k(std::size_t s, std::size_t sp) const { return k_[s * cols_ + sp]; }

    static GarblingKernel identity(std::size_t n);

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> k_;
};

double entropy_y(const DiscreteJoint& j);        // H(Y), nats
double conditional_entropy(const DiscreteJoint& j);  // H(Y|S), nats
double mutual_information(const DiscreteJoint& j);   // I(Y;S), nats

// Normalized informativeness I(Y;S)/H(Y), clamped to [0,1] only against
// float error (<= 1e-12). Throws std::domain_error when H(Y) = 0.
double gamma_index(const DiscreteJoint& j);

// p'(y,s') = sum_s p(y,s) k[s][s']. Preserves the Y-marginal exactly.
DiscreteJoint garble(const DiscreteJoint& j, const GarblingKernel& k);

// Bayes accuracy sum_s p(s) max_y p(y|s).
double bayes_accuracy(const DiscreteJoint& j);

struct Theorem1Report {
    double logscore_before = 0.0;  // -H(Y|S), Bayes expected log-score
    double logscore_after = 0.0;
    double accuracy_before = 0.0;
    double accuracy_after = 0.0;
    bool holds = false;  // garbling never improves either reward
};

Theorem1Report check_theorem1(const DiscreteJoint& j, const GarblingKernel& k);

struct FanoReport {
    double bayes_error = 0.0;
    double fano_lower = 0.0;  // (H(Y|S) - 1) / ln |Y|
    bool holds = false;
};

FanoReport fano_check(const DiscreteJoint& j);

}  // namespace kgmasd::info
