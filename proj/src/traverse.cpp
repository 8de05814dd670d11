#include "lawtraverse/traverse.hpp"

#include <algorithm>
#include <cmath>

namespace lawtraverse {

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::greedy: return "greedy";
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::logarithmic: return "logarithmic";
    case ScheduleKind::explicit_: return "explicit";
    }
    return "greedy";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
    if (name == "greedy") return ScheduleKind::greedy;
    if (name == "linear") return ScheduleKind::linear;
    if (name == "logarithmic" || name == "log") return ScheduleKind::logarithmic;
    if (name == "explicit") return ScheduleKind::explicit_;
    throw ParseError("unknown schedule kind '" + std::string(name) + "'");
}

std::vector<std::string> Schedule::shapes() const {
    std::vector<std::string> out{initial};
    for (const auto& t : transitions) out.push_back(t.shape);
    return out;
}

void validate(const Schedule& schedule) {
    if (schedule.initial.empty()) throw DomainError("schedule has no initial shape");
    for (std::size_t i = 0; i < schedule.transitions.size(); ++i) {
        const auto& t = schedule.transitions[i];
        if (!std::isfinite(t.value)) throw DomainError("schedule trigger is not finite");
        if (i == 0) continue;
        const auto& prev = schedule.transitions[i - 1];
        if (prev.trigger != t.trigger) throw DomainError("schedule mixes error and compute triggers");
        const bool ordered = t.trigger == TriggerType::error ? t.value < prev.value : t.value > prev.value;
        if (!ordered) throw DomainError("schedule triggers are not strictly ordered");
    }
}

std::vector<std::string> candidate_set(const LawFamily& family, double error) {
    std::vector<std::string> out;
    for (const auto& law : family.laws())
        if (reachable(law, error)) out.push_back(law.shape);
    return out;
}

std::string best_shape(const LawFamily& family, double error) {
    const PowerLaw* best = nullptr;
    double best_q = 0;
    std::size_t best_rank = 0;
    for (const auto& law : family.laws()) {
        if (!reachable(law, error)) continue;
        const double q = inverse_slope(law, error);
        const std::size_t r = family.rank(law.shape);
        if (!best || q > best_q || (q == best_q && r < best_rank)) {
            best = &law;
            best_q = q;
            best_rank = r;
        }
    }
    return best ? best->shape : std::string{};
}

namespace {

// Shrinks [lo, hi] until its width is below tol, keeping pred(hi) true and
// pred(lo) false.
template <class Pred>
std::pair<double, double> bisect(double lo, double hi, double tol, Pred&& pred) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

}  // namespace

ErrorPartition partition(const LawFamily& family, double e_start, double e_end, const PartitionOptions& options) {
    if (!(e_start > e_end)) throw DomainError("partition needs e_start > e_end");
    if (options.grid_points < 16) throw DomainError("partition needs at least 16 grid points");
    const double tol = options.refine_tol > 0 ? options.refine_tol : 1e-6 * e_start;

    const double top = std::min(e_start, family.max_start_error());
    if (!(top > e_end)) throw DomainError("no law is reachable in the requested error range");

    std::vector<double> grid(options.grid_points);
    const std::size_t last = options.grid_points - 1;
    if (options.log_grid) {
        double floor_c = 0;
        for (const auto& law : family.laws()) floor_c = std::max(floor_c, law.c);
        floor_c = std::min(floor_c, e_end);
        const double lhi = std::log(top - floor_c);
        const double llo = std::log(std::max(e_end - floor_c, 1e-300));
        for (std::size_t i = 0; i <= last; ++i)
            grid[i] = floor_c + std::exp(lhi + (llo - lhi) * static_cast<double>(i) / static_cast<double>(last));
    } else {
        for (std::size_t i = 0; i <= last; ++i)
            grid[i] = top + (e_end - top) * static_cast<double>(i) / static_cast<double>(last);
    }
    grid.front() = top;
    grid.back() = e_end;

    auto any_reachable = [&](double e) { return !best_shape(family, e).empty(); };

    // Domain: the first contiguous reachable run of the grid, from the top.
    std::size_t first = 0;
    while (first <= last && !any_reachable(grid[first])) ++first;
    if (first > last) throw DomainError("no law is reachable in the requested error range");
    std::size_t end = first;
    while (end <= last && any_reachable(grid[end])) ++end;

    double domain_high = grid[first];
    if (first > 0) {
        auto [lo, hi] = bisect(grid[first], grid[first - 1], tol, [&](double e) { return !any_reachable(e); });
        (void)hi;
        domain_high = lo;
    }
    double domain_low = grid[end - 1];
    if (end <= last) {
        auto [lo, hi] = bisect(grid[end], grid[end - 1], tol, any_reachable);
        (void)lo;
        domain_low = hi;
    }

    ErrorPartition out;
    std::string current = best_shape(family, domain_high);
    double seg_high = domain_high;
    auto close_segment = [&](double boundary, std::string next) {
        if (boundary < seg_high) out.segments.push_back({seg_high, boundary, current});
        seg_high = boundary;
        current = std::move(next);
    };

    std::vector<double> points;
    points.push_back(domain_high);
    for (std::size_t i = first; i < end; ++i)
        if (grid[i] < domain_high && grid[i] > domain_low) points.push_back(grid[i]);
    points.push_back(domain_low);

    for (std::size_t i = 1; i < points.size(); ++i) {
        const double below = points[i];
        const std::string target = best_shape(family, below);
        double upper = points[i - 1];
        // Several switches may hide inside one grid cell; peel them off in order.
        while (target != current) {
            auto [lo, hi] = bisect(below, upper, tol, [&](double e) { return best_shape(family, e) == current; });
            const double boundary = 0.5 * (lo + hi);
            close_segment(boundary, best_shape(family, lo));
            upper = lo;
        }
    }
    close_segment(domain_low, current);

    // Collapse neighbours that ended up with the same label.
    std::vector<Segment> merged;
    for (auto& s : out.segments) {
        if (!merged.empty() && merged.back().shape == s.shape)
            merged.back().e_low = s.e_low;
        else
            merged.push_back(std::move(s));
    }
    out.segments = std::move(merged);
    if (out.segments.empty()) throw DomainError("partition domain is empty");
    return out;
}

Schedule greedy_schedule(const ErrorPartition& partition) {
    Schedule s;
    s.kind = ScheduleKind::greedy;
    if (partition.segments.empty()) return s;
    s.initial = partition.segments.front().shape;
    for (std::size_t i = 1; i < partition.segments.size(); ++i)
        s.transitions.push_back({partition.segments[i].shape, TriggerType::error, partition.segments[i].e_high});
    return s;
}

bool is_monotone(const Schedule& schedule, const LawFamily& family) {
    if (!family.shape_order()) throw DomainError("is_monotone needs a family with shape_order");
    const auto shapes = schedule.shapes();
    std::vector<std::size_t> ranks;
    for (const auto& s : shapes) {
        family.at(s);
        ranks.push_back(family.rank(s));
    }
    bool up = true, down = true;
    for (std::size_t i = 1; i < ranks.size(); ++i) {
        up = up && ranks[i] > ranks[i - 1];
        down = down && ranks[i] < ranks[i - 1];
    }
    return up || down;
}

Schedule baseline_schedule(ScheduleKind kind, const std::vector<std::string>& shapes, double total_budget,
                           double min_fraction) {
    if (shapes.size() < 2) throw DomainError("baseline schedules need at least two shapes");
    if (!(total_budget > 0)) throw DomainError("baseline budget must be positive");
    if (!(min_fraction > 0 && min_fraction < 1)) throw DomainError("min_fraction must lie in (0, 1)");
    if (kind != ScheduleKind::linear && kind != ScheduleKind::logarithmic)
        throw DomainError("baseline kind must be linear or logarithmic");

    Schedule s;
    s.kind = kind;
    s.initial = shapes.front();
    const auto m = static_cast<double>(shapes.size());
    const double lo = min_fraction * total_budget;
    for (std::size_t k = 1; k < shapes.size(); ++k) {
        const double frac = static_cast<double>(k) / m;
        const double at = kind == ScheduleKind::linear ? frac * total_budget : lo * std::pow(total_budget / lo, frac);
        s.transitions.push_back({shapes[k], TriggerType::compute, at});
    }
    return s;
}

}  // namespace lawtraverse
