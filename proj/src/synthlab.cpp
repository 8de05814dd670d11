#include "lawtraverse/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lawtraverse {

double NormalStream::uniform() {
    // 53 high bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

RunSeries generate(const SynthSpec& spec) {
    validate(spec.law);
    if (spec.count < 2) throw DomainError("synthetic series needs at least 2 points");
    if (!(spec.sigma >= 0)) throw DomainError("noise sigma must be nonnegative");
    if (!(spec.log10_compute_hi > spec.log10_compute_lo)) throw DomainError("compute range is empty");

    RunSeries out;
    out.shape = spec.law.shape;
    out.unit = spec.law.unit;
    out.seed = spec.seed;
    NormalStream noise(spec.seed);
    const auto last = static_cast<double>(spec.count - 1);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const double lc = spec.log10_compute_lo +
                          (spec.log10_compute_hi - spec.log10_compute_lo) * static_cast<double>(i) / last;
        const double compute = std::pow(10.0, lc);
        double e = evaluate(spec.law, compute);
        if (spec.sigma > 0) {
            const double eps = spec.sigma * noise.next();
            e = spec.noise == NoiseSpace::additive ? e + eps : e * std::exp(eps);
            e = std::clamp(e, spec.lower_bound, spec.upper_bound);
        }
        out.points.push_back({compute, e});
    }
    return out;
}

OracleResult greedy_micro_step_oracle(const LawFamily& family, double e_start, double e_end, double delta_e) {
    if (!(e_start > e_end)) throw DomainError("oracle needs e_start > e_end");
    if (delta_e <= 0) delta_e = 1e-4 * (e_start - e_end);

    OracleResult out;
    std::string current;
    double e = e_start;
    const auto steps = static_cast<std::size_t>(std::ceil((e_start - e_end) / delta_e - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) {
        const double next = k + 1 == steps ? e_end : e_start - static_cast<double>(k + 1) * delta_e;
        const PowerLaw* pick = nullptr;
        double cost = 0;
        for (const auto& law : family.laws()) {
            if (!reachable(law, e) || !reachable(law, next)) continue;
            const double inc = inverse(law, next) - inverse(law, e);
            if (!pick || inc < cost || (inc == cost && family.rank(law.shape) < family.rank(pick->shape))) {
                pick = &law;
                cost = inc;
            }
        }
        if (!pick) {
            out.complete = false;
            break;
        }
        if (current.empty()) {
            out.initial = pick->shape;
        } else if (pick->shape != current) {
            out.transitions.push_back({e, current, pick->shape});
        }
        current = pick->shape;
        out.total_compute += cost;
        e = next;
    }
    out.final_error = e;
    return out;
}

namespace {

// All presets start from a common error level, as every shape begins from
// an untrained model: a = (start - c) * d^b.
PowerLaw fixture(std::string shape, double start, double b, double c, double d) {
    return PowerLaw::make((start - c) * std::pow(d, b), b, c, d, std::move(shape), CostUnit::flops);
}

}  // namespace

std::vector<std::string> preset_names() { return {"vit_patch", "lm_context", "width", "batch", "objective"}; }

LawFamily preset_family(std::string_view name) {
    if (name == "vit_patch") {
        // patch=4 saturates above patch=6 (higher asymptote).
        const double s = 0.95;
        return LawFamily({fixture("patch=32", s, 0.55, 0.62, 2e15), fixture("patch=24", s, 0.55, 0.55, 4e15),
                          fixture("patch=16", s, 0.55, 0.46, 1e16), fixture("patch=12", s, 0.55, 0.40, 2e16),
                          fixture("patch=8", s, 0.55, 0.33, 5e16), fixture("patch=6", s, 0.55, 0.30, 1e17),
                          fixture("patch=4", s, 0.55, 0.31, 3e17)},
                         "patch", std::vector<std::string>{"patch=32", "patch=24", "patch=16", "patch=12", "patch=8",
                                                           "patch=6", "patch=4"});
    }
    if (name == "lm_context") {
        const double s = 10.5;
        return LawFamily({fixture("ctx=64", s, 0.35, 3.6, 1e14), fixture("ctx=128", s, 0.35, 3.35, 2.2e14),
                          fixture("ctx=256", s, 0.35, 3.15, 5e14), fixture("ctx=512", s, 0.35, 3.0, 1.2e15),
                          fixture("ctx=1024", s, 0.35, 2.9, 3e15)},
                         "context", std::vector<std::string>{"ctx=64", "ctx=128", "ctx=256", "ctx=512", "ctx=1024"});
    }
    if (name == "width") {
        const double s = 0.95;
        return LawFamily({fixture("width=192", s, 0.5, 0.52, 3e15), fixture("width=256", s, 0.5, 0.45, 6e15),
                          fixture("width=384", s, 0.5, 0.39, 1.4e16), fixture("width=512", s, 0.5, 0.35, 2.6e16),
                          fixture("width=768", s, 0.5, 0.31, 6e16)},
                         "width",
                         std::vector<std::string>{"width=192", "width=256", "width=384", "width=512", "width=768"});
    }
    if (name == "batch") {
        const double s = 0.95;
        return LawFamily({fixture("batch=256", s, 0.6, 0.42, 5e15), fixture("batch=512", s, 0.6, 0.38, 1e16),
                          fixture("batch=1024", s, 0.6, 0.355, 2.2e16), fixture("batch=2048", s, 0.6, 0.34, 5e16)},
                         "batch", std::vector<std::string>{"batch=256", "batch=512", "batch=1024", "batch=2048"});
    }
    if (name == "objective") {
        // Distillation FLOPs already include the teacher's forward pass.
        const double s = 0.95;
        return LawFamily({fixture("objective=distill", s, 0.6, 0.40, 4e15),
                          fixture("objective=supervised", s, 0.6, 0.33, 2e16)},
                         "objective", std::vector<std::string>{"objective=distill", "objective=supervised"});
    }
    throw DomainError("unknown preset family '" + std::string(name) + "'");
}

}  // namespace lawtraverse
