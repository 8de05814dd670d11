#pragma once

#include <string>
#include <vector>

#include "lawtraverse/lawcore.hpp"

namespace lawtraverse {

struct Segment {
    double e_high = 0;
    double e_low = 0;
    std::string shape;
    bool operator==(const Segment&) const = default;
};

// Contiguous error segments, descending, each labelled with the shape whose
// inverse law is cheapest there.
struct ErrorPartition {
    std::vector<Segment> segments;
    double e_start() const { return segments.front().e_high; }
    double e_end() const { return segments.back().e_low; }
};

enum class ScheduleKind { greedy, linear, logarithmic, explicit_ };
enum class TriggerType { error, compute };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

struct Transition {
    std::string shape;
    TriggerType trigger = TriggerType::error;
    double value = 0;
    bool operator==(const Transition&) const = default;
};

struct Schedule {
    ScheduleKind kind = ScheduleKind::greedy;
    std::string initial;
    std::vector<Transition> transitions;

    // Every shape in activation order, starting with `initial`.
    std::vector<std::string> shapes() const;
};

// Throws DomainError if triggers are not strictly ordered.
void validate(const Schedule& schedule);

std::vector<std::string> candidate_set(const LawFamily& family, double error);

// Label of the reachable law with the largest inverse slope (the smallest
// compute per unit error) at `error`. Ties go to the lowest family rank.
// Returns an empty string when nothing is reachable.
std::string best_shape(const LawFamily& family, double error);

struct PartitionOptions {
    std::size_t grid_points = 512;
    // Absolute boundary tolerance; <= 0 means 1e-6 * e_start.
    double refine_tol = 0;
    // Space the grid uniformly in log(E - max asymptote) instead of in E.
    bool log_grid = false;
};

ErrorPartition partition(const LawFamily& family, double e_start, double e_end, const PartitionOptions& options = {});

Schedule greedy_schedule(const ErrorPartition& partition);

bool is_monotone(const Schedule& schedule, const LawFamily& family);

Schedule baseline_schedule(ScheduleKind kind, const std::vector<std::string>& shapes, double total_budget,
                           double min_fraction = 1e-3);

}  // namespace lawtraverse
