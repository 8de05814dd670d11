#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lawtraverse/lawcore.hpp"
#include "lawtraverse/traverse.hpp"

namespace lawtraverse {

struct TrajectorySample {
    double compute = 0;
    double error = 0;
    std::string shape;
};

struct TransitionMarker {
    double compute = 0;
    double error = 0;
    std::string from;
    std::string to;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TransitionMarker> markers;
};

// One stretch of a composed run on a single law. Within the phase the error
// after `cum` total compute is min(entry_error, law(effective + cum - begin)):
// the run resumes at the law's inverse of the current error and holds flat
// until a law that starts higher catches up.
struct Phase {
    std::string shape;
    double begin = 0;       // cumulative compute at entry
    double end = 0;         // cumulative compute at exit, +inf for the last phase
    double effective = 0;   // compute coordinate on the law at entry
    double entry_error = 0;
};

// Expands a schedule into phases under the effective-compute model.
std::vector<Phase> compose(const LawFamily& family, const Schedule& schedule, double e_start);

double error_at(const LawFamily& family, const std::vector<Phase>& phases, double compute);

// Cumulative compute at which the composed run first reaches `target`;
// +inf when it never does.
double compute_to_error(const LawFamily& family, const std::vector<Phase>& phases, double target);

struct SimulateOptions {
    std::size_t sample_count = 256;
    // Horizon: explicit compute, else the compute to reach e_target, else ten
    // times the last transition.
    std::optional<double> max_compute;
    std::optional<double> e_target;
};

Trajectory simulate(const LawFamily& family, const Schedule& schedule, double e_start,
                    const SimulateOptions& options = {});

// Closed-form compute to descend from the partition's start to `e_target`
// following the partition's shapes.
double scheduled_compute(const LawFamily& family, const ErrorPartition& partition, double e_target);

// 1 - scheduled / cheapest static law, where static laws train from zero.
double savings(const LawFamily& family, const ErrorPartition& partition, double e_target);

struct FrontierPoint {
    double compute = 0;
    double error = 0;
    std::string shape;
    std::string family;
};

struct Frontier {
    std::vector<FrontierPoint> static_points;
    // Best error reachable with a greedy schedule that may start on any law.
    std::vector<FrontierPoint> scheduled_points;
};

Frontier frontier(const std::vector<LawFamily>& families, const std::vector<double>& compute_grid,
                  const std::vector<std::string>& family_names = {});

std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct StepTransition {
    std::string shape;
    long long step = 0;
    bool operator==(const StepTransition&) const = default;
};

// Step index after which each transition fires, given per-shape cost of one
// optimizer step.
std::vector<StepTransition> to_step_schedule(const Schedule& schedule, const LawFamily& family,
                                             const std::map<std::string, double>& flops_per_step, double e_start);

}  // namespace lawtraverse
