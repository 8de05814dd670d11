#include "lawtraverse/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lawtraverse::io {

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError("unknown key '" + key + "' in " + std::string(what));
    }
}

const json& require(const json& j, const char* key, std::string_view what) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(what) + " is missing key '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, std::string_view what) {
    const auto& v = require(j, key, what);
    if (!v.is_number()) throw ParseError(std::string(what) + " key '" + key + "' must be a number");
    return v.get<double>();
}

std::string string(const json& j, const char* key, std::string_view what) {
    const auto& v = require(j, key, what);
    if (!v.is_string()) throw ParseError(std::string(what) + " key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(cell) + "' is not a number");
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

LawFamily family_from_json(const json& j) {
    constexpr std::string_view what = "law family";
    reject_unknown(j, {"cost_unit", "shape_parameter", "laws", "shape_order"}, what);
    const CostUnit unit = cost_unit_from_string(string(j, "cost_unit", what));
    const std::string parameter = string(j, "shape_parameter", what);
    const auto& laws = require(j, "laws", what);
    if (!laws.is_array() || laws.empty()) throw ParseError("law family 'laws' must be a nonempty array");

    std::vector<PowerLaw> out;
    for (const auto& l : laws) {
        reject_unknown(l, {"shape", "a", "b", "c", "d"}, "law");
        PowerLaw law{number(l, "a", "law"), number(l, "b", "law"), number(l, "c", "law"), number(l, "d", "law"),
                     string(l, "shape", "law"), unit};
        out.push_back(std::move(law));
    }
    std::optional<std::vector<std::string>> order;
    if (auto it = j.find("shape_order"); it != j.end()) {
        if (!it->is_array()) throw ParseError("shape_order must be an array of strings");
        order.emplace();
        for (const auto& s : *it) {
            if (!s.is_string()) throw ParseError("shape_order must be an array of strings");
            order->push_back(s.get<std::string>());
        }
    }
    try {
        return LawFamily(std::move(out), parameter, std::move(order));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

json to_json(const PowerLaw& law) {
    return json{{"shape", law.shape}, {"a", law.a}, {"b", law.b}, {"c", law.c}, {"d", law.d}};
}

json to_json(const LawFamily& family) {
    json laws = json::array();
    for (const auto& law : family.laws()) laws.push_back(to_json(law));
    json j{{"cost_unit", std::string(to_string(family.unit()))},
           {"shape_parameter", family.shape_parameter()},
           {"laws", laws}};
    if (family.shape_order()) j["shape_order"] = *family.shape_order();
    return j;
}

LawFamily read_family(const std::filesystem::path& path) { return family_from_json(read_json_file(path)); }

RunSeries series_from_csv(std::string_view text, std::string shape, CostUnit unit) {
    RunSeries out;
    out.shape = std::move(shape);
    out.unit = unit;
    std::size_t line_no = 0;
    bool header = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "compute,error")
                throw ParseError("line " + std::to_string(line_no) + ": expected header 'compute,error'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected two columns");
        const double c = parse_cell(line.substr(0, comma), line_no);
        const double e = parse_cell(line.substr(comma + 1), line_no);
        if (!(c > 0)) throw ParseError("line " + std::to_string(line_no) + ": compute must be positive");
        if (!(e > 0)) throw ParseError("line " + std::to_string(line_no) + ": error must be positive");
        out.points.push_back({c, e});
    }
    if (!header) throw ParseError("line 1: missing header 'compute,error'");
    if (out.points.empty()) throw ParseError("line " + std::to_string(line_no) + ": series has no data rows");
    return out;
}

RunSeries series_from_json(const json& j) {
    constexpr std::string_view what = "run series";
    reject_unknown(j, {"shape", "cost_unit", "points"}, what);
    RunSeries out;
    out.shape = string(j, "shape", what);
    out.unit = cost_unit_from_string(string(j, "cost_unit", what));
    const auto& pts = require(j, "points", what);
    if (!pts.is_array() || pts.empty()) throw ParseError("run series 'points' must be a nonempty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError("run series point " + std::to_string(i) + " must be [compute, error]");
        const double c = p[0].get<double>(), e = p[1].get<double>();
        if (!(c > 0) || !(e > 0))
            throw ParseError("run series point " + std::to_string(i) + " needs positive compute and error");
        out.points.push_back({c, e});
    }
    return out;
}

RunSeries read_series(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    if (path.extension() == ".json") {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        return series_from_json(j);
    }
    try {
        return series_from_csv(text, path.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string series_to_csv(const RunSeries& series) {
    std::string out = "compute,error\n";
    for (const auto& p : series.points) out += format_number(p.compute) + "," + format_number(p.error) + "\n";
    return out;
}

json to_json(const RunSeries& series) {
    json pts = json::array();
    for (const auto& p : series.points) pts.push_back({p.compute, p.error});
    return json{{"shape", series.shape}, {"cost_unit", std::string(to_string(series.unit))}, {"points", pts}};
}

json to_json(const FitReport& report) {
    json starts = json::array();
    for (const auto& s : report.starts) {
        json js{{"b0", s.b0}, {"c0", s.c0}, {"d0", s.d0}, {"iterations", s.iterations}, {"converged", s.converged}};
        js["objective"] = std::isfinite(s.objective) ? json(s.objective) : json(nullptr);
        if (s.law) js["law"] = to_json(*s.law);
        starts.push_back(std::move(js));
    }
    return json{{"law", to_json(report.law)},
                {"objective", report.objective},
                {"rmse", report.rmse},
                {"points_used", report.points_used},
                {"boundary_flags", report.boundary_flags},
                {"starts", starts}};
}

json to_json(const ErrorPartition& partition) {
    json segs = json::array();
    for (const auto& s : partition.segments) segs.push_back({{"e_high", s.e_high}, {"e_low", s.e_low}, {"shape", s.shape}});
    return json{{"segments", segs}};
}

ErrorPartition partition_from_json(const json& j) {
    reject_unknown(j, {"segments"}, "partition");
    ErrorPartition out;
    for (const auto& s : require(j, "segments", "partition")) {
        reject_unknown(s, {"e_high", "e_low", "shape"}, "segment");
        out.segments.push_back({number(s, "e_high", "segment"), number(s, "e_low", "segment"), string(s, "shape", "segment")});
    }
    if (out.segments.empty()) throw ParseError("partition has no segments");
    for (std::size_t i = 0; i < out.segments.size(); ++i) {
        if (!(out.segments[i].e_high > out.segments[i].e_low)) throw ParseError("segment bounds out of order");
        if (i > 0 && out.segments[i].e_high != out.segments[i - 1].e_low)
            throw ParseError("partition segments are not contiguous");
    }
    return out;
}

json to_json(const Schedule& schedule) {
    json ts = json::array();
    for (const auto& t : schedule.transitions)
        ts.push_back({{"shape", t.shape},
                      {"trigger_type", t.trigger == TriggerType::error ? "error" : "compute"},
                      {"value", t.value}});
    return json{{"kind", std::string(to_string(schedule.kind))}, {"initial", schedule.initial}, {"transitions", ts}};
}

Schedule schedule_from_json(const json& j) {
    constexpr std::string_view what = "schedule";
    reject_unknown(j, {"kind", "initial", "transitions", "steps", "partition"}, what);
    Schedule s;
    s.kind = schedule_kind_from_string(string(j, "kind", what));
    s.initial = string(j, "initial", what);
    const auto& ts = require(j, "transitions", what);
    if (!ts.is_array()) throw ParseError("schedule 'transitions' must be an array");
    for (const auto& t : ts) {
        reject_unknown(t, {"shape", "trigger_type", "value"}, "transition");
        const std::string type = string(t, "trigger_type", "transition");
        if (type != "error" && type != "compute") throw ParseError("trigger_type must be 'error' or 'compute'");
        s.transitions.push_back({string(t, "shape", "transition"),
                                 type == "error" ? TriggerType::error : TriggerType::compute,
                                 number(t, "value", "transition")});
    }
    try {
        validate(s);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return s;
}

json to_json(const Trajectory& trajectory) {
    json samples = json::array();
    for (const auto& s : trajectory.samples) samples.push_back({{"compute", s.compute}, {"error", s.error}, {"shape", s.shape}});
    json markers = json::array();
    for (const auto& m : trajectory.markers)
        markers.push_back({{"compute", m.compute}, {"error", m.error}, {"from", m.from}, {"to", m.to}});
    return json{{"samples", samples}, {"transitions", markers}};
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
    std::string out = "compute,error,shape\n";
    for (const auto& s : trajectory.samples)
        out += format_number(s.compute) + "," + format_number(s.error) + "," + s.shape + "\n";
    return out;
}

json to_json(const Frontier& frontier) {
    json pts = json::array();
    for (std::size_t i = 0; i < frontier.static_points.size(); ++i) {
        const auto& st = frontier.static_points[i];
        const auto& sc = frontier.scheduled_points[i];
        json p{{"compute", st.compute}, {"error", st.error}, {"shape", st.shape}, {"scheduled_error", sc.error},
               {"scheduled_shape", sc.shape}};
        if (!st.family.empty()) p["family"] = st.family;
        pts.push_back(std::move(p));
    }
    return json{{"points", pts}};
}

std::string frontier_to_csv(const Frontier& frontier) {
    std::string out = "compute,error,shape,scheduled_error,scheduled_shape\n";
    for (std::size_t i = 0; i < frontier.static_points.size(); ++i) {
        const auto& st = frontier.static_points[i];
        const auto& sc = frontier.scheduled_points[i];
        out += format_number(st.compute) + "," + format_number(st.error) + "," + st.shape + "," +
               format_number(sc.error) + "," + sc.shape + "\n";
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace lawtraverse::io
