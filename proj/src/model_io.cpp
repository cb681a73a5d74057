#include "latspec/model_io.hpp"

#include "latspec/friedrichs.hpp"

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace latspec {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "model file: " + what); }

Vec3 vec3_field(const json& j, const char* key, const Vec3& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 3) bad(std::string(key) + " must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Dispersion parse_dispersion(const json& j, const std::string& base_dir) {
    const std::string kind = j.value("kind", "builtin");
    if (kind == "builtin") return Dispersion::builtin(vec3_field(j, "axis_weights", {1.0, 1.0, 1.0}));
    if (kind == "tabulated") {
        if (!j.contains("csv")) bad("tabulated dispersion needs a \"csv\" path");
        std::filesystem::path p = j.at("csv").get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return Dispersion::from_csv(p.string());
    }
    bad("unknown dispersion kind \"" + kind + "\"");
}

FormFactor parse_form_factor(const json& j, const char* name) {
    if (j.is_number()) return FormFactor::constant(j.get<double>());
    if (!j.is_object()) bad(std::string(name) + " must be a number or an object");
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") return FormFactor::constant(j.value("value", 1.0));
    if (kind == "sin" || kind == "cos") {
        const int axis = j.value("axis", 1);
        if (axis < 1 || axis > 3) bad(std::string(name) + ".axis must be 1, 2 or 3");
        const double amp = j.value("amplitude", 1.0);
        return kind == "sin" ? FormFactor::sine(axis - 1, amp) : FormFactor::cosine(axis - 1, amp);
    }
    bad(std::string(name) + ": unknown kind \"" + kind + "\"");
}

// number -> (value, 0); "critical" -> (1, 1); "f*critical" -> (f, 1)
std::pair<double, bool> parse_coupling(const json& j, const char* name, std::string& text) {
    if (j.is_number()) {
        text = j.dump();
        return {j.get<double>(), false};
    }
    if (!j.is_string()) bad(std::string(name) + " must be a number or a \"critical\" expression");
    text = j.get<std::string>();
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    const std::string tag = "critical";
    if (s == tag) return {1.0, true};
    const auto star = s.find('*');
    if (star != std::string::npos && s.substr(star + 1) == tag) {
        try {
            std::size_t used = 0;
            const double f = std::stod(s.substr(0, star), &used);
            if (used == star) return {f, true};
        } catch (const std::exception&) {
        }
    }
    bad(std::string(name) + ": cannot parse \"" + text + "\"");
}

} // namespace

LoadedModel parse_model(const std::string& json_text, const std::string& base_dir, const ModelOverrides& ov) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");
    try {
        const Dispersion eps = parse_dispersion(j.value("dispersion", json::object()), base_dir);
        const Vec3 coef = vec3_field(j.value("pair_energy", json::object()), "coefficients", {1.0, 1.0, 1.0});
        const FormFactor phi1 = parse_form_factor(j.value("phi1", json(1.0)), "phi1");
        const FormFactor phi2 = parse_form_factor(j.value("phi2", json(1.0)), "phi2");
        const int n = ov.grid ? *ov.grid : j.value("grid", 16);
        const double delta = ov.delta ? *ov.delta : j.value("delta", 1.0);
        const std::string cq = j.value("coupling_quadrature", "grid");
        if (cq != "grid" && cq != "graded") bad("coupling_quadrature must be \"grid\" or \"graded\"");

        LoadedModel out;
        const auto [f1, crit1] = parse_coupling(j.value("mu1", json(0.0)), "mu1", out.mu1_text);
        const auto [f2, crit2] = parse_coupling(j.value("mu2", json(0.0)), "mu2", out.mu2_text);

        const ModelSpec base =
            make_model(TorusGrid::build(n), PairEnergy::sum(eps, coef), phi1, phi2, 0.0, 0.0, delta);
        QuadratureChoice choice;
        if (cq == "graded") choice.kind = Quadrature::Graded;
        out.coupling_quadrature = choice.kind;
        if (crit1) out.mu0_1 = coupling_threshold(base, Channel::One, choice);
        if (crit2) out.mu0_2 = coupling_threshold(base, Channel::Two, choice);
        const double mu1 = crit1 ? f1 * out.mu0_1 : f1;
        const double mu2 = crit2 ? f2 * out.mu0_2 : f2;
        out.spec = with_couplings(base, mu1, mu2);
        return out;
    } catch (const json::exception& e) {
        bad(e.what());
    }
}

LoadedModel load_model(const std::string& path, const ModelOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    LoadedModel m = parse_model(ss.str(), dir.empty() ? "." : dir, overrides);
    m.path = path;
    return m;
}

} // namespace latspec
