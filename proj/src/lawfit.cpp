#include "lawtraverse/lawfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lawtraverse {

void FitConfig::validate() const {
    if (!(huber_delta > 0)) throw DomainError("huber_delta must be positive");
    if (resample_bins < 2) throw DomainError("resample_bins must be at least 2");
    if (start_b.empty() || start_c_fraction.empty() || start_d.empty())
        throw DomainError("multi-start grid must be nonempty");
    if (max_iterations == 0) throw DomainError("max_iterations must be positive");
}

RunSeries resample_log_equidistant(const RunSeries& series, std::size_t bins) {
    if (series.points.empty()) throw InsufficientDataError("cannot resample an empty series");
    if (bins < 2) throw DomainError("resampling needs at least 2 bins");
    for (const auto& p : series.points)
        if (!(p.compute > 0) || !std::isfinite(p.compute)) throw DomainError("compute values must be positive");

    auto points = series.points;
    std::stable_sort(points.begin(), points.end(),
                     [](const Measurement& l, const Measurement& r) { return l.compute < r.compute; });
    const double lo = std::log(points.front().compute);
    const double hi = std::log(points.back().compute);

    RunSeries out = series;
    out.points.clear();
    if (hi <= lo) {
        double err = 0;
        for (const auto& p : points) err += p.error;
        out.points.push_back({points.front().compute, err / static_cast<double>(points.size())});
        return out;
    }

    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> log_sum(bins, 0.0), err_sum(bins, 0.0);
    std::vector<std::size_t> count(bins, 0), first(bins, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double lc = std::log(points[i].compute);
        const auto k = std::min(static_cast<std::size_t>((lc - lo) / width), bins - 1);
        if (count[k] == 0) first[k] = i;
        log_sum[k] += lc;
        err_sum[k] += points[i].error;
        ++count[k];
    }
    for (std::size_t k = 0; k < bins; ++k) {
        if (count[k] == 0) continue;
        const auto n = static_cast<double>(count[k]);
        // singleton bins keep their compute bit-exact
        const double compute = count[k] == 1 ? points[first[k]].compute : std::exp(log_sum[k] / n);
        out.points.push_back({compute, err_sum[k] / n});
    }
    return out;
}

double huber(double residual, double delta) {
    const double r = std::abs(residual);
    return r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
}

double objective(const RunSeries& series, const PowerLaw& candidate, const FitConfig& config) {
    if (series.points.empty()) return 0.0;
    double total = 0;
    for (const auto& p : series.points) {
        const double pred = candidate.a * std::pow(p.compute + candidate.d, -candidate.b) + candidate.c;
        double r;
        if (config.residual_space == ResidualSpace::log) {
            if (!(pred > 0) || !(p.error > 0)) return INFINITY;
            r = std::log(pred) - std::log(p.error);
        } else {
            r = pred - p.error;
        }
        total += huber(r, config.huber_delta);
    }
    return total / static_cast<double>(series.points.size());
}

namespace {

constexpr std::size_t kMinPoints = 6;

struct Candidate {
    StartResult result;
    std::vector<double> params;  // log a', log b, log d'[, log c]
};

PowerLaw unpack(const std::vector<double>& x, CostUnit unit, const std::string& shape) {
    PowerLaw law;
    law.a = std::exp(x[0]);
    law.b = std::exp(x[1]);
    law.d = std::exp(x[2]);
    law.c = x.size() > 3 ? std::exp(x[3]) : 0.0;
    law.shape = shape;
    law.unit = unit;
    return law;
}

}  // namespace

FitReport fit(const RunSeries& series, const FitConfig& config) {
    config.validate();
    if (series.points.size() < kMinPoints)
        throw InsufficientDataError("need at least 6 points to fit, got " + std::to_string(series.points.size()));
    const RunSeries resampled = resample_log_equidistant(series, config.resample_bins);
    if (resampled.points.size() < kMinPoints)
        throw InsufficientDataError("need at least 6 points after resampling, got " +
                                    std::to_string(resampled.points.size()));

    // Work on compute / geometric mean so every parameter is O(1).
    double log_mean = 0;
    for (const auto& p : resampled.points) log_mean += std::log(p.compute);
    const double scale = std::exp(log_mean / static_cast<double>(resampled.points.size()));
    RunSeries scaled = resampled;
    for (auto& p : scaled.points) p.compute /= scale;

    double min_error = INFINITY;
    for (const auto& p : scaled.points) min_error = std::min(min_error, p.error);
    const Measurement first = scaled.points.front();

    auto loss = [&](const std::vector<double>& x) -> double {
        for (double v : x)
            if (!std::isfinite(v) || std::abs(v) > 700) return INFINITY;
        return objective(scaled, unpack(x, series.unit, series.shape), config);
    };

    std::vector<Candidate> candidates;
    for (double b0 : config.start_b) {
        for (double cf : config.start_c_fraction) {
            for (double d0 : config.start_d) {
                const double c0 = cf * min_error;
                Candidate cand;
                cand.result.b0 = b0;
                cand.result.c0 = c0;
                cand.result.d0 = d0;
                if (!(first.error > c0) || !(b0 > 0) || !(d0 > 0)) {
                    cand.result.objective = INFINITY;
                    candidates.push_back(std::move(cand));
                    continue;
                }
                const double a0 = (first.error - c0) * std::pow(first.compute + d0, b0);
                std::vector<double> x = {std::log(a0), std::log(b0), std::log(d0)};
                if (c0 > 0) x.push_back(std::log(c0));

                SimplexResult best = nelder_mead(loss, x, 0.3, config.max_iterations, config.tolerance);
                std::size_t iterations = best.iterations;
                bool converged = best.converged;
                double step = 0.05;
                for (std::size_t r = 0; r < config.restarts && std::isfinite(best.value); ++r) {
                    SimplexResult again = nelder_mead(loss, best.x, step, config.max_iterations, config.tolerance);
                    iterations += again.iterations;
                    converged = converged || again.converged;
                    const bool improved = again.value < best.value;
                    if (improved) best = std::move(again);
                    if (!improved) break;
                    step *= 0.5;
                }
                cand.params = best.x;
                cand.result.objective = best.value;
                cand.result.iterations = iterations;
                cand.result.converged = converged && std::isfinite(best.value);
                if (std::isfinite(best.value)) {
                    PowerLaw law = unpack(best.x, series.unit, series.shape);
                    law.a *= std::pow(scale, law.b);
                    law.d *= scale;
                    cand.result.law = law;
                }
                candidates.push_back(std::move(cand));
            }
        }
    }

    const Candidate* chosen = nullptr;
    for (const auto& cand : candidates) {
        if (!cand.result.converged || !cand.result.law) continue;
        if (!chosen || cand.result.objective < chosen->result.objective ||
            (cand.result.objective == chosen->result.objective && cand.result.law->b < chosen->result.law->b))
            chosen = &cand;
    }

    FitReport report;
    for (const auto& cand : candidates) report.starts.push_back(cand.result);
    if (!chosen) {
        std::string msg = "no fit start converged for '" + series.shape + "':";
        for (const auto& s : report.starts)
            msg += " [b0=" + std::to_string(s.b0) + " c0=" + std::to_string(s.c0) + " d0=" + std::to_string(s.d0) +
                   " obj=" + std::to_string(s.objective) + "]";
        throw FitFailureError(msg);
    }

    report.law = *chosen->result.law;
    validate(report.law);
    report.objective = chosen->result.objective;
    report.points_used = resampled.points.size();

    double sq = 0;
    for (const auto& p : resampled.points) {
        const double r = evaluate(report.law, p.compute) - p.error;
        sq += r * r;
    }
    report.rmse = std::sqrt(sq / static_cast<double>(resampled.points.size()));

    const double b = report.law.b;
    const double d_scaled = report.law.d / scale;
    if (b < 1e-3 || b > 20) report.boundary_flags.push_back("b");
    if (d_scaled < 1e-6 || d_scaled > 1e6) report.boundary_flags.push_back("d");
    if (report.law.c == 0.0) report.boundary_flags.push_back("c_zero");
    if (report.law.c >= 0.999 * min_error) report.boundary_flags.push_back("c_at_min_error");
    return report;
}

}  // namespace lawtraverse
