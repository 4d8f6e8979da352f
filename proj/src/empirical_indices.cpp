#include "medineq/empirical_indices.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "medineq/errors.hpp"

namespace medineq {

namespace {

// Above this size running sums use Neumaier compensation.
constexpr std::size_t kCompensatedThreshold = 10000;

class RunningSum {
public:
    explicit RunningSum(bool compensated) : compensated_(compensated) {}

    void add(double x) {
        if (!compensated_) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

private:
    bool compensated_;
    double sum_ = 0.0;
    double carry_ = 0.0;
};

std::string order_stat_name(std::size_t i, std::size_t n) {
    return "X_{" + std::to_string(i) + ":" + std::to_string(n) + "}";
}

void require_pairs(const Sample& s, const char* index) {
    if (s.half_size() == 0) {
        throw DegenerateSampleError(std::string(index) + " needs at least 2 observations");
    }
}

// Suffix sums: suffix[j] = X_{j+1:n} + ... + X_{n:n}, suffix[n] = 0.
std::vector<double> suffix_sums(const Sample& s) {
    const auto x = s.values();
    std::vector<double> suffix(x.size() + 1, 0.0);
    RunningSum acc(x.size() > kCompensatedThreshold);
    for (std::size_t j = x.size(); j-- > 0;) {
        acc.add(x[j]);
        suffix[j] = acc.value();
    }
    return suffix;
}

void require_top_positive(const Sample& s, const char* index) {
    if (!(s.order_statistic(s.size()) > 0.0)) {
        throw DegenerateSampleError(std::string(index) + ": upper-group income sum is zero (" +
                                    order_stat_name(s.size(), s.size()) + " = 0)");
    }
}

// 1 - (1/floor(n/2)) * sum_k X_{k:n} / X_{denominator_rank(k):n}
template <typename RankFn>
double median_ratio_index(const Sample& s, const char* index, RankFn denominator_rank) {
    require_pairs(s, index);
    const std::size_t half = s.half_size();
    double sum = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
        const std::size_t r = denominator_rank(k);
        const double denominator = s.order_statistic(r);
        if (!(denominator > 0.0)) {
            throw DegenerateSampleError(std::string(index) + ": denominator " +
                                        order_stat_name(r, s.size()) + " is zero");
        }
        sum += s.order_statistic(k) / denominator;
    }
    return 1.0 - sum / static_cast<double>(half);
}

std::string fixed(double value, int precision) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(precision);
    out << value;
    return out.str();
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ValidationError("sample is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream msg;
            msg << "sample value #" << (i + 1) << " (" << v << ") must be finite and >= 0";
            throw ValidationError(msg.str());
        }
    }
    std::stable_sort(values_.begin(), values_.end());

    prefix_.resize(values_.size() + 1);
    prefix_[0] = 0.0;
    RunningSum acc(values_.size() > kCompensatedThreshold);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        acc.add(values_[i]);
        prefix_[i + 1] = acc.value();
    }
}

double Sample::order_statistic(std::size_t i) const {
    if (i < 1 || i > values_.size()) {
        throw ValidationError("rank " + std::to_string(i) + " outside 1.." +
                              std::to_string(values_.size()));
    }
    return values_[i - 1];
}

Sample make_sample(std::vector<double> values) { return Sample(std::move(values)); }

double empirical_quantile(const Sample& s, double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "empirical_quantile: probability " << p << " outside (0, 1]";
        throw ValidationError(msg.str());
    }
    const auto n = static_cast<double>(s.size());
    auto rank = static_cast<std::size_t>(std::ceil(n * p));
    rank = std::clamp<std::size_t>(rank, 1, s.size());
    return s.order_statistic(rank);
}

double psi1_n(const Sample& s) {
    const std::size_t m = s.median_rank();
    return median_ratio_index(s, "Psi1", [m](std::size_t) { return m; });
}

double psi2_n(const Sample& s) {
    const std::size_t m = s.median_rank();
    return median_ratio_index(s, "Psi2", [m](std::size_t k) { return m + k; });
}

double psi3_n(const Sample& s) {
    const std::size_t n = s.size();
    return median_ratio_index(s, "Psi3", [n](std::size_t k) { return n - k + 1; });
}

double gini_n(const Sample& s) {
    const double n = static_cast<double>(s.size());
    const double mean = s.mean();
    if (!(mean > 0.0)) {
        throw DegenerateSampleError("Gini: sample mean is zero");
    }
    const auto x = s.values();
    RunningSum acc(x.size() > kCompensatedThreshold);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        acc.add((2.0 * (n - static_cast<double>(i)) + 1.0) * x[i - 1]);
    }
    return 1.0 - acc.value() / (mean * n * n);
}

double zenga_n(const Sample& s) {
    require_top_positive(s, "Zenga");
    const std::size_t n = s.size();
    const auto suffix = suffix_sums(s);
    RunningSum acc(n > kCompensatedThreshold);
    for (std::size_t i = 1; i < n; ++i) {
        const double lower_mean = s.prefix_sum(i) / static_cast<double>(i);
        const double upper_mean = suffix[i] / static_cast<double>(n - i);
        acc.add(lower_mean / upper_mean);
    }
    return 1.0 - acc.value() / static_cast<double>(n);
}

double dg_n(const Sample& s) {
    require_top_positive(s, "Davydov-Greselin");
    const std::size_t n = s.size();
    const auto suffix = suffix_sums(s);
    RunningSum acc(n > kCompensatedThreshold);
    for (std::size_t i = 1; i <= n; ++i) {
        acc.add(s.prefix_sum(i) / suffix[n - i]);
    }
    return 1.0 - acc.value() / static_cast<double>(n);
}

double g2_n(const Sample& s) {
    const double median = s.median();
    if (!(median > 0.0)) {
        throw DegenerateSampleError("G2: median " +
                                    order_stat_name(s.median_rank(), s.size()) + " is zero");
    }
    const double n = static_cast<double>(s.size());
    RunningSum acc(s.size() > kCompensatedThreshold);
    for (std::size_t i = 1; i <= s.size(); ++i) {
        acc.add(s.prefix_sum(i));
    }
    return s.mean() / median - 2.0 / (n * n) * (acc.value() / median);
}

IndexReport full_report(const Sample& s, std::size_t n_total) {
    if (n_total < s.size()) {
        throw ValidationError("n_T (" + std::to_string(n_total) + ") is smaller than n_P (" +
                              std::to_string(s.size()) + ")");
    }
    IndexReport r;
    r.psi1 = psi1_n(s);
    r.psi2 = psi2_n(s);
    r.psi3 = psi3_n(s);
    r.gini = gini_n(s);
    r.zenga = zenga_n(s);
    r.dg = dg_n(s);
    r.g2 = g2_n(s);
    r.mean = s.mean();
    r.median = s.median();
    r.n_total = n_total;
    r.n_positive = s.size();
    return r;
}

std::string report_csv_header() { return "label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3"; }

void write_report_csv_row(std::ostream& out, const std::string& label, const IndexReport& r,
                          int precision) {
    out << label << ',' << fixed(r.mean, precision) << ',' << fixed(r.median, precision) << ','
        << r.n_total << ',' << r.n_positive << ',' << fixed(r.gini, precision) << ','
        << fixed(r.zenga, precision) << ',' << fixed(r.dg, precision) << ','
        << fixed(r.g2, precision) << ',' << fixed(r.psi1, precision) << ','
        << fixed(r.psi2, precision) << ',' << fixed(r.psi3, precision);
}

void write_report_json(std::ostream& out, const std::string& label, const IndexReport& r) {
    const nlohmann::ordered_json doc = {
        {"label", label}, {"mean", r.mean},   {"median", r.median}, {"n_T", r.n_total},
        {"n_P", r.n_positive}, {"G", r.gini}, {"Z", r.zenga},       {"D", r.dg},
        {"G2", r.g2},     {"Psi1", r.psi1},   {"Psi2", r.psi2},     {"Psi3", r.psi3},
    };
    out << doc.dump();
}

}  // namespace medineq
