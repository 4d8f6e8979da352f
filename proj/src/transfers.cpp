#include "medineq/transfers.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace medineq {

namespace {

void require_rank(const Sample& s, std::size_t rank, const char* role) {
    if (rank < 1 || rank > s.size()) {
        throw ValidationError(std::string(role) + " rank " + std::to_string(rank) +
                              " outside 1.." + std::to_string(s.size()));
    }
}

void require_pair(const Sample& s, std::size_t receiver, std::size_t giver) {
    require_rank(s, receiver, "receiver");
    require_rank(s, giver, "giver");
    if (receiver >= giver) {
        throw ValidationError("receiver rank L=" + std::to_string(receiver) +
                              " must be below giver rank H=" + std::to_string(giver));
    }
}

void require_well_off_pair(const Sample& s, std::size_t receiver, std::size_t giver,
                           const char* what) {
    require_pair(s, receiver, giver);
    if (receiver <= s.median_rank()) {
        throw ValidationError(std::string(what) + " needs both persons above the median rank M=" +
                              std::to_string(s.median_rank()) +
                              " (got L=" + std::to_string(receiver) + ")");
    }
}

// (a y^2 - b x^2) / (b x + a y): the amount at which a/(x + c) + b/(y - c)
// returns to a/x + b/y.
double balance_point(double a, double x, double b, double y) {
    const double denominator = b * x + a * y;
    if (!(denominator > 0.0)) {
        throw ComputationError("threshold undefined: both numerator order statistics are zero");
    }
    return (a * y * y - b * x * x) / denominator;
}

std::string format_amount(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fixed(double value, int precision) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(precision);
    out << value;
    return out.str();
}

std::array<double, 3> all_psi(const Sample& s) { return {psi1_n(s), psi2_n(s), psi3_n(s)}; }

}  // namespace

std::string_view to_string(Position p) {
    switch (p) {
        case Position::Struggling: return "struggling";
        case Position::Median: return "median";
        case Position::WellOff: return "well_off";
    }
    return "?";
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Decrease: return "decrease";
        case Direction::Unchanged: return "unchanged";
        case Direction::Increase: return "increase";
    }
    return "?";
}

Position classify(const Sample& s, std::size_t rank) {
    require_rank(s, rank, "person");
    const std::size_t m = s.median_rank();
    if (rank < m) return Position::Struggling;
    if (rank == m) return Position::Median;
    return Position::WellOff;
}

double max_admissible(const Sample& s, std::size_t receiver, std::size_t giver) {
    require_pair(s, receiver, giver);
    const double xl = s.order_statistic(receiver);
    const double xh = s.order_statistic(giver);

    double bound = std::numeric_limits<double>::infinity();
    std::string limiter;
    if (receiver + 1 < giver) {
        const double room = s.order_statistic(receiver + 1) - xl;
        if (room < bound) {
            bound = room;
            limiter = "X_{L+1} - X_L";
        }
        const double room_h = xh - s.order_statistic(giver - 1);
        if (room_h < bound) {
            bound = room_h;
            limiter = "X_H - X_{H-1}";
        }
    } else {
        bound = 0.5 * (xh - xl);
        limiter = "(X_H - X_L)/2";
    }
    if (!(bound > 0.0)) {
        throw InadmissibleTransferError("no admissible transfer from H=" + std::to_string(giver) +
                                            " to L=" + std::to_string(receiver) +
                                            ": tied incomes (" + limiter + " = 0)",
                                        0.0);
    }
    return bound;
}

Sample apply_transfer(const Sample& s, const Transfer& t) {
    const double bound = max_admissible(s, t.receiver, t.giver);
    if (!(t.amount > 0.0 && t.amount < bound)) {
        throw InadmissibleTransferError(
            "inadmissible transfer L=" + std::to_string(t.receiver) +
                " H=" + std::to_string(t.giver) + " c=" + format_amount(t.amount) +
                ": amount must lie in (0, " + format_amount(bound) + ")",
            bound);
    }
    std::vector<double> values(s.values().begin(), s.values().end());
    values[t.receiver - 1] += t.amount;
    values[t.giver - 1] -= t.amount;
    return Sample(std::move(values));
}

double threshold_c2(const Sample& s, std::size_t receiver, std::size_t giver) {
    require_well_off_pair(s, receiver, giver, "threshold_c2");
    const std::size_t m = s.median_rank();
    return balance_point(s.order_statistic(receiver - m), s.order_statistic(receiver),
                         s.order_statistic(giver - m), s.order_statistic(giver));
}

double threshold_c3(const Sample& s, std::size_t receiver, std::size_t giver) {
    require_well_off_pair(s, receiver, giver, "threshold_c3");
    const std::size_t n = s.size();
    return balance_point(s.order_statistic(n - receiver + 1), s.order_statistic(receiver),
                         s.order_statistic(n - giver + 1), s.order_statistic(giver));
}

double threshold_c0(const Sample& s, std::size_t receiver, std::size_t giver) {
    require_pair(s, receiver, giver);
    return 0.5 * (s.order_statistic(giver) - s.order_statistic(receiver));
}

Direction predict_effect(const Sample& s, Strategy k, const Transfer& t) {
    const double bound = max_admissible(s, t.receiver, t.giver);
    if (!(t.amount > 0.0 && t.amount < bound)) {
        throw InadmissibleTransferError("predict_effect: amount " + format_amount(t.amount) +
                                            " outside (0, " + format_amount(bound) + ")",
                                        bound);
    }
    const auto low = classify(s, t.receiver);
    const auto high = classify(s, t.giver);
    if (low == Position::Median || high == Position::Median) {
        throw ValidationError("predict_effect: transfers involving the median person M=" +
                              std::to_string(s.median_rank()) + " are not covered");
    }

    const std::size_t n = s.size();
    const std::size_t m = s.median_rank();
    const std::size_t L = t.receiver;
    const std::size_t H = t.giver;
    auto x = [&](std::size_t i) { return s.order_statistic(i); };

    if (low == Position::Struggling && high == Position::WellOff) {
        return Direction::Decrease;
    }
    const bool well_off_pair = low == Position::WellOff;

    switch (k) {
        case Strategy::PoorVsAll:
            return Direction::Unchanged;

        case Strategy::PoorVsNonpoor: {
            if (!well_off_pair) {
                // +c / X_{M+L} - c / X_{M+H} on the ratio sum.
                return x(m + L) < x(m + H) ? Direction::Decrease : Direction::Unchanged;
            }
            const double a = x(L - m);
            const double b = x(H - m);
            if (a == 0.0 && b == 0.0) {
                return Direction::Unchanged;
            }
            const double c2 = balance_point(a, x(L), b, x(H));
            if (std::abs(t.amount - c2) <= 1e-12 * t.amount) {
                return Direction::Unchanged;
            }
            return t.amount > c2 ? Direction::Decrease : Direction::Increase;
        }

        case Strategy::PoorVsRich: {
            if (!well_off_pair) {
                return x(n - L + 1) > x(n - H + 1) ? Direction::Increase : Direction::Unchanged;
            }
            // c3 >= c0 > c: the ratio sum always shrinks unless both
            // numerators vanish.
            if (x(n - L + 1) == 0.0) {
                return Direction::Unchanged;
            }
            return Direction::Increase;
        }
    }
    return Direction::Unchanged;
}

Direction direction_of(double before, double after) {
    const double delta = after - before;
    if (std::abs(delta) <= kUnchangedTolerance) return Direction::Unchanged;
    return delta < 0.0 ? Direction::Decrease : Direction::Increase;
}

TransferOutcome evaluate_transfer(const Sample& s, const Transfer& t) {
    Sample after = apply_transfer(s, t);
    const auto before_psi = all_psi(s);
    const auto after_psi = all_psi(after);

    std::array<Direction, 3> observed{};
    for (std::size_t i = 0; i < 3; ++i) {
        observed[i] = direction_of(before_psi[i], after_psi[i]);
    }

    std::optional<std::array<Direction, 3>> predicted;
    const auto low = classify(s, t.receiver);
    const auto high = classify(s, t.giver);
    if (low != Position::Median && high != Position::Median) {
        std::array<Direction, 3> p{};
        for (Strategy k : kAllStrategies) {
            p[strategy_number(k) - 1] = predict_effect(s, k, t);
        }
        predicted = p;
    }

    std::optional<double> c2;
    std::optional<double> c3;
    if (low == Position::WellOff) {
        const std::size_t m = s.median_rank();
        const std::size_t n = s.size();
        if (s.order_statistic(t.receiver - m) > 0.0 || s.order_statistic(t.giver - m) > 0.0) {
            c2 = threshold_c2(s, t.receiver, t.giver);
        }
        if (s.order_statistic(n - t.receiver + 1) > 0.0) {
            c3 = threshold_c3(s, t.receiver, t.giver);
        }
    }

    return TransferOutcome{std::move(after),
                           predicted,
                           observed,
                           before_psi,
                           after_psi,
                           threshold_c0(s, t.receiver, t.giver),
                           c2,
                           c3};
}

std::vector<PlanStep> run_plan(const Sample& s, const std::vector<Transfer>& plan) {
    std::vector<PlanStep> steps;
    steps.reserve(plan.size());
    Sample current = s;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        try {
            auto outcome = evaluate_transfer(current, plan[i]);
            steps.push_back(PlanStep{plan[i], outcome.after, outcome.psi_after, outcome.predicted,
                                     outcome.observed});
            current = std::move(outcome.after);
        } catch (const InadmissibleTransferError& e) {
            throw InadmissibleTransferError("step " + std::to_string(i + 1) + ": " + e.what(),
                                            e.bound(), i + 1);
        } catch (const ValidationError& e) {
            throw ValidationError("step " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return steps;
}

std::vector<Transfer> parse_plan(std::istream& in) {
    std::vector<Transfer> plan;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string l_text;
        std::string h_text;
        std::string c_text;
        if (!(fields >> l_text)) {
            continue;
        }
        std::string extra;
        if (!(fields >> h_text >> c_text) || (fields >> extra)) {
            throw ValidationError("plan line " + std::to_string(line_no) +
                                  ": expected three fields 'L H c'");
        }
        auto parse_rank = [&](const std::string& text, const char* role) {
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
                throw ValidationError("plan line " + std::to_string(line_no) + ": invalid " +
                                      role + " rank '" + text + "'");
            }
            return value;
        };
        Transfer t{parse_rank(l_text, "receiver"), parse_rank(h_text, "giver"), 0.0};
        auto [ptr, ec] =
            std::from_chars(c_text.data(), c_text.data() + c_text.size(), t.amount);
        if (ec != std::errc{} || ptr != c_text.data() + c_text.size() ||
            !std::isfinite(t.amount)) {
            throw ValidationError("plan line " + std::to_string(line_no) + ": invalid amount '" +
                                  c_text + "'");
        }
        plan.push_back(t);
    }
    return plan;
}

void write_trajectory_csv(std::ostream& out, const std::vector<PlanStep>& steps, int precision,
                          bool with_directions) {
    out << "step,L,H,c,psi1,psi2,psi3";
    if (with_directions) {
        out << ",predicted1,predicted2,predicted3,observed1,observed2,observed3";
    }
    out << '\n';
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& st = steps[i];
        out << (i + 1) << ',' << st.transfer.receiver << ',' << st.transfer.giver << ','
            << format_amount(st.transfer.amount);
        for (double v : st.psi) {
            out << ',' << fixed(v, precision);
        }
        if (with_directions) {
            for (std::size_t j = 0; j < 3; ++j) {
                out << ',' << (st.predicted ? to_string((*st.predicted)[j]) : "none");
            }
            for (auto d : st.observed) {
                out << ',' << to_string(d);
            }
        }
        out << '\n';
    }
}

}  // namespace medineq
