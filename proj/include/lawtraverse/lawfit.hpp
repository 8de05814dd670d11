#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lawtraverse/lawcore.hpp"

namespace lawtraverse {

struct Measurement {
    double compute = 0;
    double error = 0;
    bool operator==(const Measurement&) const = default;
};

// Measurements from one training configuration.
struct RunSeries {
    std::vector<Measurement> points;
    std::string shape;
    CostUnit unit = CostUnit::flops;
    std::string model;
    std::optional<std::int64_t> batch_size;
    std::optional<std::uint64_t> seed;
};

enum class ResidualSpace { linear, log };

struct FitConfig {
    double huber_delta = 1e-3;
    std::size_t resample_bins = 64;
    ResidualSpace residual_space = ResidualSpace::linear;
    std::vector<double> start_b = {0.2, 0.5, 1.0, 1.5};
    // Multiples of the smallest observed error.
    std::vector<double> start_c_fraction = {0.0, 0.5, 0.9};
    // Offsets in units of the geometric-mean compute.
    std::vector<double> start_d = {0.1, 1.0, 10.0};
    std::size_t max_iterations = 2000;
    double tolerance = 1e-12;
    // Simplex restarts from the incumbent after convergence.
    std::size_t restarts = 3;

    void validate() const;
};

struct StartResult {
    double b0 = 0, c0 = 0, d0 = 0;
    double objective = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<PowerLaw> law;
};

struct FitReport {
    PowerLaw law;
    double objective = 0;
    double rmse = 0;
    std::size_t points_used = 0;
    std::vector<StartResult> starts;
    // Names of parameters pinned near the edge of their search range.
    std::vector<std::string> boundary_flags;
};

RunSeries resample_log_equidistant(const RunSeries& series, std::size_t bins);

double huber(double residual, double delta);

// Mean Huber loss of `candidate` against the series.
double objective(const RunSeries& series, const PowerLaw& candidate, const FitConfig& config);

// Fits a saturating power law by multi-start simplex descent.
// Throws InsufficientDataError below 6 resampled points and
// FitFailureError when no start produces a finite objective.
FitReport fit(const RunSeries& series, const FitConfig& config = {});

// Minimal Nelder-Mead on an unconstrained vector; exposed for tests.
struct SimplexResult {
    std::vector<double> x;
    double value = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, double initial_step, std::size_t max_iterations,
                          double tolerance);

}  // namespace lawtraverse

#include "lawtraverse/detail/nelder_mead.hpp"
