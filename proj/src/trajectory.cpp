#include "lawtraverse/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lawtraverse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double effective_for(const PowerLaw& law, double error) {
    // At or below the asymptote the law can never move the error; any
    // coordinate works because the phase error is min(entry, law(...)).
    return error > law.c ? inverse_clamped(law, error) : 0.0;
}

double phase_error(const PowerLaw& law, const Phase& phase, double compute) {
    if (compute == kInf) return std::min(phase.entry_error, law.c);
    return std::min(phase.entry_error, evaluate(law, phase.effective + (compute - phase.begin)));
}

}  // namespace

std::vector<Phase> compose(const LawFamily& family, const Schedule& schedule, double e_start) {
    validate(schedule);
    for (const auto& s : schedule.shapes()) family.at(s);
    if (!(e_start > family.min_asymptote()))
        throw UnreachableError("start error lies at or below every asymptote in the family");

    std::vector<Phase> phases;
    const PowerLaw* law = &family.at(schedule.initial);
    Phase cur{law->shape, 0.0, kInf, effective_for(*law, e_start), e_start};

    for (const auto& t : schedule.transitions) {
        const double now = phase_error(*law, cur, cur.begin);
        double end;
        double exit_error;
        if (t.trigger == TriggerType::error) {
            if (t.value >= now) {
                end = cur.begin;
                exit_error = now;
            } else if (t.value <= law->c) {
                break;
            } else {
                end = cur.begin + std::max(0.0, inverse_clamped(*law, t.value) - cur.effective);
                exit_error = t.value;
            }
        } else {
            end = std::max(cur.begin, t.value);
            exit_error = phase_error(*law, cur, end);
        }
        cur.end = end;
        phases.push_back(cur);

        law = &family.at(t.shape);
        cur = Phase{law->shape, end, kInf, effective_for(*law, exit_error), exit_error};
    }
    cur.end = kInf;
    phases.push_back(cur);
    return phases;
}

double error_at(const LawFamily& family, const std::vector<Phase>& phases, double compute) {
    for (const auto& p : phases)
        if (compute < p.end || &p == &phases.back()) return phase_error(family.at(p.shape), p, compute);
    return kInf;
}

double compute_to_error(const LawFamily& family, const std::vector<Phase>& phases, double target) {
    for (const auto& p : phases) {
        const auto& law = family.at(p.shape);
        if (phase_error(law, p, p.begin) <= target) return p.begin;
        if (target <= law.c) continue;
        const double need = p.begin + std::max(0.0, inverse_clamped(law, target) - p.effective);
        if (need <= p.end) return need;
    }
    return kInf;
}

Trajectory simulate(const LawFamily& family, const Schedule& schedule, double e_start,
                    const SimulateOptions& options) {
    if (options.sample_count < 2) throw DomainError("simulate needs at least 2 samples");
    const auto phases = compose(family, schedule, e_start);

    double horizon = 0;
    if (options.max_compute) {
        horizon = *options.max_compute;
    } else if (options.e_target) {
        horizon = compute_to_error(family, phases, *options.e_target);
        if (!std::isfinite(horizon))
            throw UnreachableError("schedule never reaches error " + std::to_string(*options.e_target));
    } else if (phases.size() > 1) {
        horizon = 10.0 * phases[phases.size() - 2].end;
    }
    if (!(horizon > 0)) horizon = 100.0 * family.at(phases.back().shape).d;

    // (compute, phase index) pairs; ties order by phase so a marker shows the
    // outgoing shape before the incoming one.
    std::vector<std::pair<double, std::size_t>> at;
    auto phase_of = [&](double c) {
        for (std::size_t i = 0; i < phases.size(); ++i)
            if (c < phases[i].end) return i;
        return phases.size() - 1;
    };
    at.emplace_back(0.0, phase_of(0.0));
    const double lo = horizon * 1e-6;
    const std::size_t n = options.sample_count - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = n == 1 ? horizon : lo * std::pow(horizon / lo, static_cast<double>(i) / static_cast<double>(n - 1));
        at.emplace_back(c, phase_of(c));
    }
    at.back().first = horizon;

    Trajectory traj;
    for (std::size_t i = 0; i + 1 < phases.size(); ++i) {
        const double c = phases[i].end;
        const double e = phase_error(family.at(phases[i].shape), phases[i], c);
        traj.markers.push_back({c, e, phases[i].shape, phases[i + 1].shape});
        if (c <= horizon) {
            at.emplace_back(c, i);
            at.emplace_back(c, i + 1);
        }
    }
    std::sort(at.begin(), at.end());

    for (const auto& [c, idx] : at) {
        const auto& p = phases[idx];
        traj.samples.push_back({c, phase_error(family.at(p.shape), p, c), p.shape});
    }
    return traj;
}

double scheduled_compute(const LawFamily& family, const ErrorPartition& partition, double e_target) {
    if (partition.segments.empty()) throw DomainError("empty partition");
    if (e_target > partition.e_start()) throw DomainError("target error lies above the partition start");
    if (e_target < partition.e_end())
        throw UnreachableError("target error " + std::to_string(e_target) +
                               " is outside the scheduled range; the smallest reachable error is just above " +
                               std::to_string(family.min_asymptote()));
    double total = 0;
    for (const auto& seg : partition.segments) {
        if (seg.e_high <= e_target) break;
        const auto& law = family.at(seg.shape);
        total += inverse(law, std::max(seg.e_low, e_target)) - inverse_clamped(law, seg.e_high);
    }
    return total;
}

double savings(const LawFamily& family, const ErrorPartition& partition, double e_target) {
    const double scheduled = scheduled_compute(family, partition, e_target);
    double best_static = kInf;
    for (const auto& law : family.laws())
        if (reachable(law, e_target)) best_static = std::min(best_static, inverse(law, e_target));
    if (!std::isfinite(best_static))
        throw DomainError("savings undefined: no static law reaches error " + std::to_string(e_target));
    if (best_static == 0.0) return 0.0;
    return 1.0 - scheduled / best_static;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0) || !(hi >= lo)) throw DomainError("log grid needs 0 < lo <= hi");
    if (points == 0) throw DomainError("log grid needs at least one point");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
    if (points > 1) out.back() = hi;
    return out;
}

namespace {

// Compute to descend from the top of the partition to `error`, continued
// analytically below the partition on its last law.
struct DescentCost {
    const LawFamily* family;
    ErrorPartition partition;

    double operator()(double error) const {
        if (error >= partition.e_end()) return scheduled_compute(*family, partition, error);
        const auto& law = family->at(partition.segments.back().shape);
        if (error <= law.c) return kInf;
        return scheduled_compute(*family, partition, partition.e_end()) + inverse(law, error) -
               inverse(law, partition.e_end());
    }
};

// Lowest error reached from `top` after spending `budget` along the greedy path.
double descend(const DescentCost& cost, double top, double budget, double floor_c) {
    const double base = cost(top);
    double hi = top;
    double lo = top;
    double gap = top - floor_c;
    for (int k = 0; k < 200; ++k) {
        gap *= 0.5;
        lo = floor_c + gap;
        if (cost(lo) - base >= budget) break;
        hi = lo;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cost(mid) - base >= budget)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

Frontier frontier(const std::vector<LawFamily>& families, const std::vector<double>& compute_grid,
                  const std::vector<std::string>& family_names) {
    if (compute_grid.empty()) throw DomainError("frontier needs a nonempty compute grid");
    auto name_of = [&](std::size_t i) { return i < family_names.size() ? family_names[i] : std::string{}; };

    std::vector<DescentCost> costs;
    for (const auto& fam : families) {
        const double top = fam.max_start_error();
        const double floor_c = fam.min_asymptote();
        const double bottom = floor_c + 1e-9 * (top - floor_c);
        costs.push_back({&fam, partition(fam, top, bottom)});
    }

    Frontier out;
    for (double c : compute_grid) {
        FrontierPoint best{c, kInf, {}, {}};
        for (std::size_t f = 0; f < families.size(); ++f)
            for (const auto& law : families[f].laws()) {
                const double e = evaluate(law, c);
                if (e < best.error) best = {c, e, law.shape, name_of(f)};
            }
        out.static_points.push_back(best);

        FrontierPoint sched{c, kInf, {}, {}};
        for (std::size_t f = 0; f < families.size(); ++f) {
            const auto& fam = families[f];
            for (const auto& law : fam.laws()) {
                const double e = descend(costs[f], start_error(law), c, fam.min_asymptote());
                if (e < sched.error) sched = {c, e, best_shape(fam, e), name_of(f)};
            }
        }
        out.scheduled_points.push_back(sched);
    }
    return out;
}

std::vector<StepTransition> to_step_schedule(const Schedule& schedule, const LawFamily& family,
                                             const std::map<std::string, double>& flops_per_step, double e_start) {
    for (const auto& s : schedule.shapes()) {
        auto it = flops_per_step.find(s);
        if (it == flops_per_step.end()) throw DomainError("no flops-per-step entry for shape '" + s + "'");
        if (!(it->second > 0)) throw DomainError("flops-per-step for '" + s + "' must be positive");
    }
    const auto phases = compose(family, schedule, e_start);
    if (phases.size() < schedule.transitions.size() + 1)
        throw DomainError("schedule transition to '" + schedule.transitions[phases.size() - 1].shape +
                          "' never fires");

    std::vector<StepTransition> out;
    long long step = 0;
    for (std::size_t i = 0; i < schedule.transitions.size(); ++i) {
        const double spent = phases[i].end - phases[i].begin;
        const auto steps = static_cast<long long>(std::ceil(spent / flops_per_step.at(phases[i].shape)));
        step += std::max(1LL, steps);
        out.push_back({schedule.transitions[i].shape, step});
    }
    return out;
}

}  // namespace lawtraverse
