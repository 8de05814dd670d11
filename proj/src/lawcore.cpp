#include "lawtraverse/lawcore.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lawtraverse {

std::string_view to_string(CostUnit unit) {
    switch (unit) {
    case CostUnit::flops: return "flops";
    case CostUnit::tokens: return "tokens";
    case CostUnit::samples: return "samples";
    case CostUnit::seconds: return "seconds";
    }
    return "flops";
}

CostUnit cost_unit_from_string(std::string_view name) {
    if (name == "flops") return CostUnit::flops;
    if (name == "tokens") return CostUnit::tokens;
    if (name == "samples") return CostUnit::samples;
    if (name == "seconds") return CostUnit::seconds;
    throw ParseError("unknown cost unit '" + std::string(name) + "'");
}

PowerLaw PowerLaw::make(double a, double b, double c, double d, std::string shape, CostUnit unit) {
    PowerLaw law{a, b, c, d, std::move(shape), unit};
    validate(law);
    return law;
}

void validate(const PowerLaw& law) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(law.a) || !finite(law.b) || !finite(law.c) || !finite(law.d))
        throw DomainError("law '" + law.shape + "' has non-finite parameters");
    if (law.a <= 0 || law.b <= 0 || law.d <= 0)
        throw DomainError("law '" + law.shape + "' needs a, b, d > 0");
    if (law.c < 0) throw DomainError("law '" + law.shape + "' needs c >= 0");
}

double evaluate(const PowerLaw& law, double compute) {
    if (!(compute >= 0)) throw DomainError("compute must be nonnegative");
    return law.a * std::pow(compute + law.d, -law.b) + law.c;
}

double start_error(const PowerLaw& law) { return law.a * std::pow(law.d, -law.b) + law.c; }

double asymptote(const PowerLaw& law) { return law.c; }

bool reachable(const PowerLaw& law, double error) {
    return error > law.c && error <= start_error(law);
}

namespace {

void check_window(const PowerLaw& law, double error) {
    if (!(error > law.c))
        throw UnreachableError("error " + std::to_string(error) + " is at or below the asymptote of '" +
                               law.shape + "'");
    if (error > start_error(law))
        throw AboveStartError("error " + std::to_string(error) + " is above the start error of '" +
                              law.shape + "'");
}

double raw_inverse(const PowerLaw& law, double error) {
    return std::pow(law.a / (error - law.c), 1.0 / law.b) - law.d;
}

}  // namespace

double inverse(const PowerLaw& law, double error) {
    check_window(law, error);
    // At the start error the closed form can round to a tiny negative value.
    return std::max(0.0, raw_inverse(law, error));
}

double inverse_clamped(const PowerLaw& law, double error) {
    if (error >= start_error(law)) return 0.0;
    return inverse(law, error);
}

double inverse_slope(const PowerLaw& law, double error) {
    check_window(law, error);
    return -(std::pow(law.a, 1.0 / law.b) / law.b) * std::pow(error - law.c, -(1.0 + law.b) / law.b);
}

LawFamily::LawFamily(std::vector<PowerLaw> laws, std::string shape_parameter,
                     std::optional<std::vector<std::string>> shape_order)
    : laws_(std::move(laws)), shape_parameter_(std::move(shape_parameter)), shape_order_(std::move(shape_order)) {
    if (laws_.empty()) throw DomainError("law family is empty");
    unit_ = laws_.front().unit;
    std::set<std::string> seen;
    for (const auto& law : laws_) {
        validate(law);
        if (law.unit != unit_) throw DomainError("law family mixes cost units");
        if (!seen.insert(law.shape).second) throw DomainError("duplicate shape label '" + law.shape + "'");
    }
    if (shape_order_) {
        std::set<std::string> ordered(shape_order_->begin(), shape_order_->end());
        if (ordered.size() != shape_order_->size()) throw DomainError("shape_order has duplicates");
        if (ordered != seen) throw DomainError("shape_order must list exactly the family's shapes");
    }
}

const PowerLaw* LawFamily::find(std::string_view shape) const {
    auto it = std::find_if(laws_.begin(), laws_.end(), [&](const PowerLaw& l) { return l.shape == shape; });
    return it == laws_.end() ? nullptr : &*it;
}

const PowerLaw& LawFamily::at(std::string_view shape) const {
    if (const auto* law = find(shape)) return *law;
    throw DomainError("shape '" + std::string(shape) + "' is not in the family");
}

std::size_t LawFamily::rank(std::string_view shape) const {
    if (shape_order_) {
        auto it = std::find(shape_order_->begin(), shape_order_->end(), shape);
        return static_cast<std::size_t>(it - shape_order_->begin());
    }
    std::size_t r = 0;
    for (const auto& law : laws_)
        if (law.shape < shape) ++r;
    return r;
}

double LawFamily::max_start_error() const {
    double v = 0;
    for (const auto& law : laws_) v = std::max(v, start_error(law));
    return v;
}

double LawFamily::min_start_error() const {
    double v = start_error(laws_.front());
    for (const auto& law : laws_) v = std::min(v, start_error(law));
    return v;
}

double LawFamily::min_asymptote() const {
    double v = laws_.front().c;
    for (const auto& law : laws_) v = std::min(v, law.c);
    return v;
}

std::vector<std::string> LawFamily::non_monotone_asymptotes() const {
    std::vector<std::string> flagged;
    if (!shape_order_) return flagged;
    double lowest = INFINITY;
    for (const auto& label : *shape_order_) {
        const double c = at(label).c;
        if (c > lowest) flagged.push_back(label);
        lowest = std::min(lowest, c);
    }
    return flagged;
}

}  // namespace lawtraverse
