#include "lawtraverse/flopcost.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <vector>
#include <sstream>

#include "lawtraverse/errors.hpp"

namespace lawtraverse {

long long ViTShape::tokens() const { return (height / patch) * (image_width / patch); }

void ViTShape::validate() const {
    if (width <= 0 || depth <= 0 || patch <= 0 || height <= 0 || image_width <= 0 || channels <= 0)
        throw DomainError("ViT shape fields must be positive");
    if (!(mlp_ratio > 0)) throw DomainError("mlp_ratio must be positive");
    if (tokens() < 1) throw DomainError("patch size larger than the image yields no tokens");
}

void LMShape::validate() const {
    if (width <= 0 || depth <= 0 || context <= 0) throw DomainError("LM shape fields must be positive");
    if (!(mlp_ratio > 0)) throw DomainError("mlp_ratio must be positive");
}

namespace {

double body_flops(double n, double d, double depth, double mlp_ratio) {
    return depth * ((4.0 + 2.0 * mlp_ratio) * n * d * d + 2.0 * n * n * d);
}

}  // namespace

double vit_forward_flops(const ViTShape& shape, bool include_embedding) {
    shape.validate();
    const auto n = static_cast<double>(shape.tokens());
    const auto d = static_cast<double>(shape.width);
    double f = body_flops(n, d, static_cast<double>(shape.depth), shape.mlp_ratio);
    if (include_embedding) {
        const auto p = static_cast<double>(shape.patch);
        f += n * p * p * static_cast<double>(shape.channels) * d;
    }
    return f;
}

double lm_forward_flops(const LMShape& shape) {
    shape.validate();
    return body_flops(static_cast<double>(shape.context), static_cast<double>(shape.width),
                      static_cast<double>(shape.depth), shape.mlp_ratio);
}

double forward_flops(const ModelShape& shape, bool include_embedding) {
    if (const auto* vit = std::get_if<ViTShape>(&shape)) return vit_forward_flops(*vit, include_embedding);
    return lm_forward_flops(std::get<LMShape>(shape));
}

double train_step_flops(double forward_flops, long long batch) {
    if (!(forward_flops > 0) || batch <= 0) throw DomainError("train step needs positive forward FLOPs and batch");
    return 3.0 * forward_flops * static_cast<double>(batch);
}

double distill_step_flops(double student_forward, double teacher_forward, long long batch) {
    if (!(student_forward > 0) || !(teacher_forward >= 0) || batch <= 0)
        throw DomainError("distillation step needs positive student FLOPs and batch");
    return (3.0 * student_forward + teacher_forward) * static_cast<double>(batch);
}

CarbonEstimate carbon(const HardwareRun& run) {
    if (!(run.gpu_hours >= 0) || !(run.avg_watts > 0) || !(run.pue > 0) || !(run.carbon_intensity > 0))
        throw DomainError("hardware run needs gpu_hours >= 0 and positive watts, pue, intensity");
    CarbonEstimate out;
    out.megawatt_hours = run.gpu_hours * run.avg_watts * run.pue / 1e6;
    // MWh * 1000 kWh/MWh * kg/kWh / 1000 kg/t
    out.tonnes_co2eq = out.megawatt_hours * run.carbon_intensity;
    return out;
}

namespace {

long long parse_int(std::string_view key, std::string_view v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParseError("shape field '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    std::string s(v);
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw ParseError("shape field '" + std::string(key) + "' expects a number, got '" + s + "'");
    return out;
}

}  // namespace

ModelShape parse_shape(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("shape string needs a 'vit:' or 'lm:' prefix");
    const auto kind = text.substr(0, colon);
    if (kind != "vit" && kind != "lm") throw ParseError("unknown shape kind '" + std::string(kind) + "'");

    std::map<std::string, std::string, std::less<>> fields;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) throw ParseError("malformed shape field '" + std::string(item) + "'");
        if (!fields.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second)
            throw ParseError("repeated shape field '" + std::string(item.substr(0, eq)) + "'");
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }

    auto take = [&](const char* key) -> std::string {
        auto it = fields.find(key);
        if (it == fields.end()) throw ParseError(std::string("shape is missing field '") + key + "'");
        std::string v = it->second;
        fields.erase(it);
        return v;
    };
    auto take_optional_real = [&](const char* key, double fallback) {
        auto it = fields.find(key);
        if (it == fields.end()) return fallback;
        const double v = parse_real(key, it->second);
        fields.erase(it);
        return v;
    };

    ModelShape out;
    if (kind == "vit") {
        ViTShape s;
        s.width = parse_int("d", take("d"));
        s.depth = parse_int("L", take("L"));
        s.patch = parse_int("p", take("p"));
        const std::string img = take("img");
        std::vector<std::string> dims;
        std::stringstream ss(img);
        for (std::string part; std::getline(ss, part, 'x');) dims.push_back(part);
        if (dims.size() != 2 && dims.size() != 3) throw ParseError("img expects HxW or HxWxC, got '" + img + "'");
        s.height = parse_int("img", dims[0]);
        s.image_width = parse_int("img", dims[1]);
        if (dims.size() == 3) s.channels = parse_int("img", dims[2]);
        s.mlp_ratio = take_optional_real("mlp", 4.0);
        out = s;
    } else {
        LMShape s;
        s.width = parse_int("d", take("d"));
        s.depth = parse_int("L", take("L"));
        s.context = parse_int("n", take("n"));
        s.mlp_ratio = take_optional_real("mlp", 4.0);
        out = s;
    }
    if (!fields.empty()) throw ParseError("unknown shape field '" + fields.begin()->first + "'");
    try {
        std::visit([](const auto& s) { s.validate(); }, out);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return out;
}

std::string format_shape(const ModelShape& shape) {
    std::ostringstream os;
    if (const auto* v = std::get_if<ViTShape>(&shape)) {
        os << "vit:d=" << v->width << ",L=" << v->depth << ",p=" << v->patch << ",img=" << v->height << 'x'
           << v->image_width << 'x' << v->channels;
        if (v->mlp_ratio != 4.0) os << ",mlp=" << v->mlp_ratio;
    } else {
        const auto& l = std::get<LMShape>(shape);
        os << "lm:d=" << l.width << ",L=" << l.depth << ",n=" << l.context;
        if (l.mlp_ratio != 4.0) os << ",mlp=" << l.mlp_ratio;
    }
    return os.str();
}

}  // namespace lawtraverse
