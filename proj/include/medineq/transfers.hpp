#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medineq/empirical_indices.hpp"
#include "medineq/equality_curves.hpp"
#include "medineq/errors.hpp"

namespace medineq {

/// Rank `giver` (H) hands `amount` (c) to rank `receiver` (L), L < H.
/// Ranks are 1-based positions in the ordered sample.
struct Transfer {
    std::size_t receiver;
    std::size_t giver;
    double amount;
};

enum class Position { Struggling, Median, WellOff };
enum class Direction { Decrease, Unchanged, Increase };

std::string_view to_string(Position p);
std::string_view to_string(Direction d);

/// Index changes no larger than this count as unchanged.
inline constexpr double kUnchangedTolerance = 1e-12;

/// Raised when a transfer would break the strict income ordering.
class InadmissibleTransferError : public ValidationError {
public:
    InadmissibleTransferError(const std::string& what, double bound, std::size_t step = 0)
        : ValidationError(what), bound_(bound), step_(step) {}

    /// Supremum of admissible amounts (0 if none exists).
    double bound() const { return bound_; }
    /// 1-based plan step, or 0 outside plan replay.
    std::size_t step() const { return step_; }

private:
    double bound_;
    std::size_t step_;
};

/// Struggling below the median rank M = ceil(n/2), well-off above it.
Position classify(const Sample& s, std::size_t rank);

/// Supremum of amounts c for which receiver + c and giver - c keep the
/// strict ordering of their neighbours. Throws InadmissibleTransferError
/// when ties next to L or H leave no room at all.
double max_admissible(const Sample& s, std::size_t receiver, std::size_t giver);

/// New sample with X_L + c and X_H - c; requires 0 < c < max_admissible.
Sample apply_transfer(const Sample& s, const Transfer& t);

/// Psi_2 threshold for a transfer between two well-off persons (M < L < H):
/// amounts above it decrease Psi_2, amounts below it increase Psi_2.
double threshold_c2(const Sample& s, std::size_t receiver, std::size_t giver);

/// The analogous Psi_3 threshold; it never lies below (X_H - X_L) / 2, so no
/// order-preserving transfer between well-off persons can reach it.
double threshold_c3(const Sample& s, std::size_t receiver, std::size_t giver);

/// Ordering bound c0 = (X_H - X_L) / 2.
double threshold_c0(const Sample& s, std::size_t receiver, std::size_t giver);

/// Direction in which Psi_{k,n} moves under an admissible transfer.
///
/// Covers struggling-to-well-off, well-off pairs and struggling pairs. A
/// transfer involving the median person is outside that theory and raises
/// ValidationError.
Direction predict_effect(const Sample& s, Strategy k, const Transfer& t);

/// Direction of a change in index value, with kUnchangedTolerance.
Direction direction_of(double before, double after);

struct TransferOutcome {
    Sample after;
    std::optional<std::array<Direction, 3>> predicted;  // empty when L or H is the median
    std::array<Direction, 3> observed;
    std::array<double, 3> psi_before;
    std::array<double, 3> psi_after;
    double c0;
    std::optional<double> c2;  // well-off pairs only
    std::optional<double> c3;  // well-off pairs only
};

TransferOutcome evaluate_transfer(const Sample& s, const Transfer& t);

struct PlanStep {
    Transfer transfer;
    Sample after;
    std::array<double, 3> psi;
    std::optional<std::array<Direction, 3>> predicted;
    std::array<Direction, 3> observed;

    bool prediction_holds() const { return !predicted || *predicted == observed; }
};

/// Replays transfers one after another. Stops at the first inadmissible
/// step with an InadmissibleTransferError carrying the step number.
std::vector<PlanStep> run_plan(const Sample& s, const std::vector<Transfer>& plan);

/// Plan file: one "L H c" per line; '#' starts a comment; blank lines ignored.
std::vector<Transfer> parse_plan(std::istream& in);

/// step,L,H,c,psi1,psi2,psi3 with optional predicted/observed columns.
void write_trajectory_csv(std::ostream& out, const std::vector<PlanStep>& steps, int precision,
                          bool with_directions);

}  // namespace medineq
