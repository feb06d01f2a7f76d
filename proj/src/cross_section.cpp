#include "casimir/cross_section.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "casimir/error.hpp"
#include "json.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
const double kZ2 = kPi * kPi / 6.0;
const double kZ3 = 1.2020569031595942854;
const double kZ4 = kPi * kPi * kPi * kPi / 90.0;

void check_a(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("separation a must be positive and finite");
}

ForceResult labeled(double pp, double per, double edge, double one_dim) {
    ForceResult r;
    r.terms = {{"parallel_plate", pp}, {"perimeter", per}, {"edge", edge},
               {"region_II_J", 0.0},   {"exp_series", 0.0}, {"one_dim_EM", one_dim}};
    r.total = pp + per + edge + one_dim;
    return r;
}

}  // namespace

void CrossSection::validate() const {
    if (!(area > 0.0) || !std::isfinite(area)) throw DomainError("shape: area must be positive");
    if (!(perimeter > 0.0) || !std::isfinite(perimeter)) throw DomainError("shape: perimeter must be positive");
    double turning = 0.0;
    for (double alpha : corners) {
        if (!(alpha > 0.0 && alpha < 2.0 * kPi))
            throw DomainError("shape: corner angle " + std::to_string(alpha) + " outside (0, 2 pi)");
        turning += kPi - alpha;
    }
    for (const Arc& arc : arcs) {
        if (!(arc.length > 0.0) || !std::isfinite(arc.length) || !std::isfinite(arc.curvature))
            throw DomainError("shape: arcs need positive length and finite curvature");
        turning += arc.length * arc.curvature;
    }
    if (std::fabs(turning - 2.0 * kPi) > 1e-9 * 2.0 * kPi)
        throw DomainError("shape: boundary turning is " + std::to_string(turning) +
                          ", a closed boundary turns by 2 pi");
}

CrossSection rectangle(double b, double c) {
    if (!(b > 0.0 && c > 0.0)) throw DomainError("rectangle: sides must be positive");
    return {{kPi / 2, kPi / 2, kPi / 2, kPi / 2}, {}, b * c, 2.0 * (b + c)};
}

CrossSection regular_polygon(int n, double side) {
    if (n < 3 || !(side > 0.0)) throw DomainError("regular_polygon: need n >= 3 and a positive side");
    const double alpha = kPi * (n - 2) / n;
    return {std::vector<double>(n, alpha), {}, n * side * side / (4.0 * std::tan(kPi / n)), n * side};
}

CrossSection disk(double radius) {
    if (!(radius > 0.0)) throw DomainError("disk: radius must be positive");
    return {{}, {{2.0 * kPi * radius, 1.0 / radius}}, kPi * radius * radius, 2.0 * kPi * radius};
}

double chi(const CrossSection& shape) {
    shape.validate();
    double x = 0.0;
    for (double alpha : shape.corners) x += (kPi / alpha - alpha / kPi) / 24.0;
    for (const Arc& arc : shape.arcs) x += arc.length * arc.curvature / (12.0 * kPi);
    return x;
}

ChiLimits chi_rounding_limits(const CrossSection& shape) {
    const double sharp = chi(shape);
    double smooth = 0.0;
    for (double alpha : shape.corners) smooth += (kPi - alpha) / (12.0 * kPi);
    for (const Arc& arc : shape.arcs) smooth += arc.length * arc.curvature / (12.0 * kPi);
    return {sharp, smooth};
}

double weyl_count(const CrossSection& shape, double energy, Field field) {
    if (!(energy >= 0.0) || !std::isfinite(energy)) throw DomainError("weyl_count: energy must be >= 0");
    return shape.area / (4.0 * kPi) * energy + eta(field) * shape.perimeter / (4.0 * kPi) * std::sqrt(energy) +
           chi(shape);
}

ForceResult force_asymptotic_scalar(double a, const CrossSection& shape, Field field) {
    check_a(a);
    const double x = chi(shape);
    const double e = eta(field);
    return labeled(-3.0 * kZ4 * shape.area / (16.0 * kPi * kPi * std::pow(a, 4)),
                   -e * kZ3 * shape.perimeter / (32.0 * kPi * a * a * a), -kZ2 * x / (4.0 * kPi * a * a), 0.0);
}

ForceResult force_asymptotic_em(double a, const CrossSection& shape) {
    check_a(a);
    const double x = chi(shape);
    return labeled(-3.0 * kZ4 * shape.area / (8.0 * kPi * kPi * std::pow(a, 4)), 0.0,
                   -2.0 * kZ2 * x / (4.0 * kPi * a * a), kZ2 / (4.0 * kPi * a * a));
}

namespace {

// line < 1: the source has no line structure (JSON values).
[[noreturn]] void fail_at(int line, const std::string& what) {
    if (line < 1) throw DomainError("shape: " + what);
    throw DomainError("shape line " + std::to_string(line) + ": " + what);
}

double number_at(int line, const std::string& tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        fail_at(line, "expected a number, got '" + tok + "'");
    return v;
}

// "90deg", "90 deg", "1.57", "1.57rad"
double angle_at(int line, std::string tok, const std::string& unit) {
    double scale = 1.0;
    auto strip = [&](const char* suffix, double s) {
        const std::string sx = suffix;
        if (tok.size() > sx.size() && tok.compare(tok.size() - sx.size(), sx.size(), sx) == 0) {
            tok.resize(tok.size() - sx.size());
            scale = s;
        }
    };
    strip("deg", kPi / 180.0);
    strip("rad", 1.0);
    if (unit == "deg") scale = kPi / 180.0;
    else if (!unit.empty() && unit != "rad") fail_at(line, "unknown angle unit '" + unit + "'");
    return number_at(line, tok) * scale;
}

CrossSection parse_text(const std::string& text) {
    CrossSection s;
    bool have_area = false, have_perimeter = false;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        if (key == "area" || key == "perimeter") {
            if (tok.size() != 2) fail_at(line, key + " takes one value");
            (key == "area" ? s.area : s.perimeter) = number_at(line, tok[1]);
            (key == "area" ? have_area : have_perimeter) = true;
        } else if (key == "corner") {
            if (tok.size() < 2 || tok.size() > 3) fail_at(line, "corner takes an angle and an optional unit");
            s.corners.push_back(angle_at(line, tok[1], tok.size() == 3 ? tok[2] : ""));
        } else if (key == "arc") {
            if (tok.size() != 3) fail_at(line, "arc takes a length and a curvature");
            s.arcs.push_back({number_at(line, tok[1]), number_at(line, tok[2])});
        } else {
            fail_at(line, "unknown keyword '" + key + "'");
        }
    }
    if (!have_area) throw DomainError("shape: missing 'area'");
    if (!have_perimeter) throw DomainError("shape: missing 'perimeter'");
    return s;
}

int line_of(const std::string& text, std::size_t byte) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

CrossSection parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail_at(line_of(text, e.byte), "malformed JSON");
    }
    CrossSection s;
    try {
        s.area = j.at("area").get<double>();
        s.perimeter = j.at("perimeter").get<double>();
        if (j.contains("corners"))
            for (const auto& c : j.at("corners")) {
                if (c.is_number()) s.corners.push_back(c.get<double>());
                else if (c.is_string()) s.corners.push_back(angle_at(0, c.get<std::string>(), ""));
                else s.corners.push_back(angle_at(0, std::to_string(c.at("angle").get<double>()), c.value("unit", "")));
            }
        if (j.contains("arcs"))
            for (const auto& a : j.at("arcs")) s.arcs.push_back({a.at("length").get<double>(), a.at("curvature").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("shape JSON: ") + e.what());
    }
    return s;
}

}  // namespace

CrossSection parse_shape(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    CrossSection s = first != std::string::npos && text[first] == '{' ? parse_json(text) : parse_text(text);
    s.validate();
    return s;
}

CrossSection load_shape(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open shape file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_shape(buf.str());
}

}  // namespace casimir
