#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace medineq {

/// An ordered sample of non-negative incomes X_{1:n} <= ... <= X_{n:n}.
///
/// Order statistics are addressed with 1-based ranks to match the usual
/// notation; `prefix_sum(i)` is X_{1:n} + ... + X_{i:n} with prefix_sum(0) = 0.
/// Immutable after construction.
class Sample {
public:
    /// Sorts (stably) a copy of `values`. Throws ValidationError on empty
    /// input or on negative / non-finite entries.
    explicit Sample(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    /// X_{i:n}, 1 <= i <= n.
    double order_statistic(std::size_t i) const;

    double prefix_sum(std::size_t i) const { return prefix_[i]; }
    double total() const { return prefix_.back(); }
    double mean() const { return total() / static_cast<double>(size()); }

    /// M = ceil(n/2).
    std::size_t median_rank() const { return (size() + 1) / 2; }
    /// floor(n/2), the number of terms in each Psi_{k,n} average.
    std::size_t half_size() const { return size() / 2; }
    double median() const { return order_statistic(median_rank()); }

private:
    std::vector<double> values_;
    std::vector<double> prefix_;
};

Sample make_sample(std::vector<double> values);

/// Q_n(p) = X_{ceil(n p):n} for 0 < p <= 1.
double empirical_quantile(const Sample& s, double p);

double psi1_n(const Sample& s);
double psi2_n(const Sample& s);
double psi3_n(const Sample& s);

/// Empirical Gini index including the +1/n small-sample correction.
double gini_n(const Sample& s);
double zenga_n(const Sample& s);
/// Davydov-Greselin index.
double dg_n(const Sample& s);
/// Gini mean difference normalized by twice the median. Can exceed 1 and,
/// for very small samples, dip slightly below 0.
double g2_n(const Sample& s);

struct IndexReport {
    double psi1 = 0.0;
    double psi2 = 0.0;
    double psi3 = 0.0;
    double gini = 0.0;
    double zenga = 0.0;
    double dg = 0.0;
    double g2 = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::size_t n_total = 0;     // n_T
    std::size_t n_positive = 0;  // n_P, the sample size
};

/// All seven indices for one cohort; `n_total` is the cohort size before
/// the positive-income filter and must be at least s.size().
IndexReport full_report(const Sample& s, std::size_t n_total);

/// Report CSV columns: label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3
std::string report_csv_header();
void write_report_csv_row(std::ostream& out, const std::string& label, const IndexReport& r,
                          int precision = 4);
void write_report_json(std::ostream& out, const std::string& label, const IndexReport& r);

}  // namespace medineq
