#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace lawtraverse {

// FLOPs here count one multiply-accumulate as one operation.

struct ViTShape {
    long long width = 0;
    long long depth = 0;
    long long patch = 0;
    long long height = 0;
    long long image_width = 0;
    long long channels = 3;
    double mlp_ratio = 4.0;

    long long tokens() const;
    void validate() const;
};

struct LMShape {
    long long width = 0;
    long long depth = 0;
    long long context = 0;
    double mlp_ratio = 4.0;

    void validate() const;
};

using ModelShape = std::variant<ViTShape, LMShape>;

// Transformer body cost for n tokens: L * ((4 + 2r) n d^2 + 2 n^2 d).
// Classifier head excluded; the patch embedding n p^2 c d only on request.
double vit_forward_flops(const ViTShape& shape, bool include_embedding = false);

// Same body formula with n = context; embedding lookup and output head are
// excluded. Attention is counted without causal halving.
double lm_forward_flops(const LMShape& shape);

double forward_flops(const ModelShape& shape, bool include_embedding = false);

// Backward pass costs twice the forward.
double train_step_flops(double forward_flops, long long batch);

// Teacher contributes only a forward pass.
double distill_step_flops(double student_forward, double teacher_forward, long long batch);

struct HardwareRun {
    double gpu_hours = 0;
    double avg_watts = 0;
    double pue = 1.1;
    double carbon_intensity = 0.385;  // kg CO2eq per kWh
};

struct CarbonEstimate {
    double megawatt_hours = 0;
    double tonnes_co2eq = 0;
};

CarbonEstimate carbon(const HardwareRun& run);

// Parses `vit:d=768,L=12,p=8,img=120x120x3` or `lm:d=768,L=12,n=1024`.
// Optional `mlp=<ratio>` on either. Throws ParseError.
ModelShape parse_shape(std::string_view text);

std::string format_shape(const ModelShape& shape);

}  // namespace lawtraverse
