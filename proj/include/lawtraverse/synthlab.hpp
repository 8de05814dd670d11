#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lawtraverse/lawcore.hpp"
#include "lawtraverse/lawfit.hpp"

namespace lawtraverse {

// Deterministic standard-normal stream: std::mt19937_64 (whose output
// sequence is fixed by the C++ standard) feeding a Box-Muller transform on
// 53-bit uniforms. Identical on every conforming platform, unlike
// std::normal_distribution.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();
    double uniform();  // open interval (0, 1)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0;
};

enum class NoiseSpace { additive, log };

struct SynthSpec {
    PowerLaw law;
    std::size_t count = 64;
    double log10_compute_lo = -2;
    double log10_compute_hi = 2;
    double sigma = 0;
    NoiseSpace noise = NoiseSpace::additive;
    // Noisy errors are clipped to [lower_bound, upper_bound].
    double lower_bound = 1e-6;
    double upper_bound = 1.0;
    std::uint64_t seed = 0;
};

RunSeries generate(const SynthSpec& spec);

struct OracleTransition {
    double error = 0;
    std::string from;
    std::string to;
};

struct OracleResult {
    std::string initial;
    std::vector<OracleTransition> transitions;
    double total_compute = 0;
    double final_error = 0;
    bool complete = true;  // false when it stopped at an unreachable error
};

// Brute-force greedy descent: march the error down in steps of delta_e and
// take the law with the smallest compute increment for each step.
OracleResult greedy_micro_step_oracle(const LawFamily& family, double e_start, double e_end, double delta_e = 0);

// Fixture families with realistic qualitative behaviour. Coefficients are
// invented; see the README for the list.
LawFamily preset_family(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace lawtraverse
