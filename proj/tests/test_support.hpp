#pragma once

#include <random>
#include <string>
#include <vector>

#include "lawtraverse/lawcore.hpp"

namespace lawtraverse::testing {

inline PowerLaw law_a() { return PowerLaw::make(0.8, 1.0, 0.1, 1.0, "A"); }
inline PowerLaw law_b() { return PowerLaw::make(0.5, 2.0, 0.35, 1.0, "B"); }

// The two-law family used throughout: B is cheaper at high error, A below
// E* ~ 0.5502.
inline LawFamily worked_family() {
    return LawFamily({law_a(), law_b()}, "toy", std::vector<std::string>{"B", "A"});
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Random family whose reachability windows all overlap on
// (max c, min start error]. Start errors in [0.8, 1], asymptotes in
// [0.05, 0.4].
inline LawFamily random_family(std::uint64_t seed, std::size_t size) {
    std::mt19937_64 rng(seed);
    std::vector<PowerLaw> laws;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < size; ++i) {
        const double start = uniform(rng, 0.8, 1.0);
        const double c = uniform(rng, 0.05, 0.4);
        const double b = uniform(rng, 0.3, 2.0);
        const double d = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
        const std::string label = "P" + std::to_string(i);
        laws.push_back(PowerLaw::make((start - c) * std::pow(d, b), b, c, d, label));
        order.push_back(label);
    }
    return LawFamily(std::move(laws), "random", std::move(order));
}

inline double max_asymptote(const LawFamily& family) {
    double v = 0;
    for (const auto& l : family.laws()) v = std::max(v, l.c);
    return v;
}

}  // namespace lawtraverse::testing
