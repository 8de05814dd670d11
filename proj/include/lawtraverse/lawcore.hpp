#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawtraverse/errors.hpp"

namespace lawtraverse {

enum class CostUnit { flops, tokens, samples, seconds };

std::string_view to_string(CostUnit unit);
CostUnit cost_unit_from_string(std::string_view name);

// Saturating power law E(C) = a * (C + d)^(-b) + c.
//
// `a` scales the reducible error, `b` is the decay exponent, `c` the
// irreducible asymptote and `d` a compute offset in the same unit as C.
// Construct through make() to get validation.
struct PowerLaw {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
    double d = 1.0;
    std::string shape;
    CostUnit unit = CostUnit::flops;

    static PowerLaw make(double a, double b, double c, double d, std::string shape = {},
                         CostUnit unit = CostUnit::flops);

    bool operator==(const PowerLaw&) const = default;
};

// Throws DomainError unless a, b, d > 0 and c >= 0 (all finite).
void validate(const PowerLaw& law);

double evaluate(const PowerLaw& law, double compute);
double start_error(const PowerLaw& law);
double asymptote(const PowerLaw& law);

// True iff c < error <= start_error.
bool reachable(const PowerLaw& law, double error);

// Compute at which the law reaches `error`. Valid on (c, start_error].
double inverse(const PowerLaw& law, double error);

// Like inverse(), but errors above start_error map to 0.
double inverse_clamped(const PowerLaw& law, double error);

// d inverse / d error; negative on the whole valid window. |q| is the compute
// spent per unit of error decrement.
double inverse_slope(const PowerLaw& law, double error);

class LawFamily {
public:
    LawFamily() = default;
    LawFamily(std::vector<PowerLaw> laws, std::string shape_parameter = {},
              std::optional<std::vector<std::string>> shape_order = std::nullopt);

    const std::vector<PowerLaw>& laws() const { return laws_; }
    CostUnit unit() const { return unit_; }
    const std::string& shape_parameter() const { return shape_parameter_; }
    const std::optional<std::vector<std::string>>& shape_order() const { return shape_order_; }

    const PowerLaw& at(std::string_view shape) const;
    const PowerLaw* find(std::string_view shape) const;
    std::size_t size() const { return laws_.size(); }

    // Position used for tie-breaking: shape_order rank when present,
    // otherwise the rank of the label in lexicographic order.
    std::size_t rank(std::string_view shape) const;

    double max_start_error() const;
    double min_start_error() const;
    double min_asymptote() const;

    // shape_order lists shapes in schedule order (e.g. large to small patch),
    // along which asymptotes are expected to fall. Returns the labels whose
    // asymptote is higher than that of some earlier shape. Empty without an
    // order.
    std::vector<std::string> non_monotone_asymptotes() const;

private:
    std::vector<PowerLaw> laws_;
    CostUnit unit_ = CostUnit::flops;
    std::string shape_parameter_;
    std::optional<std::vector<std::string>> shape_order_;
};

}  // namespace lawtraverse
