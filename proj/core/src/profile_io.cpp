#include "tev/profile_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tev {

namespace {

LawKind law_kind_from_name(const std::string& s) {
    if (s == "constant") return LawKind::Constant;
    if (s == "affine") return LawKind::Affine;
    if (s == "polynomial") return LawKind::Polynomial;
    throw std::invalid_argument("unknown law kind: " + s);
}

const char* law_kind_name(LawKind k) {
    switch (k) {
        case LawKind::Constant: return "constant";
        case LawKind::Affine: return "affine";
        case LawKind::Polynomial: return "polynomial";
    }
    return "polynomial";
}

}  // namespace

RefractiveProfile parse_profile(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    Bounds bounds;
    bounds.n_star = j.at("bounds").at("n_star").get<double>();
    bounds.n_star_upper = j.at("bounds").at("n_star_upper").get<double>();
    const Regularity reg = regularity_from_name(j.at("regularity").get<std::string>());

    std::vector<Segment> segments;
    for (const auto& js : j.at("segments")) {
        Segment s;
        s.start = js.at("start").get<double>();
        s.end = js.at("end").get<double>();
        const auto& jl = js.at("law");
        s.law.kind = law_kind_from_name(jl.at("kind").get<std::string>());
        s.law.coeffs = jl.at("coefficients").get<std::vector<double>>();
        if (s.law.coeffs.empty()) throw std::invalid_argument("law needs coefficients");
        if (s.law.kind == LawKind::Constant && s.law.coeffs.size() != 1)
            throw std::invalid_argument("constant law takes exactly one coefficient");
        if (s.law.kind == LawKind::Affine && s.law.coeffs.size() != 2)
            throw std::invalid_argument("affine law takes exactly two coefficients");
        segments.push_back(std::move(s));
    }
    return RefractiveProfile(std::move(segments), reg, bounds);
}

RefractiveProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_profile(ss.str());
}

std::string profile_to_json(const RefractiveProfile& p) {
    nlohmann::json j;
    j["regularity"] = regularity_name(p.regularity());
    j["bounds"] = {{"n_star", p.bounds().n_star}, {"n_star_upper", p.bounds().n_star_upper}};
    j["segments"] = nlohmann::json::array();
    for (const Segment& s : p.segments()) {
        j["segments"].push_back({{"start", s.start},
                                 {"end", s.end},
                                 {"law", {{"kind", law_kind_name(s.law.kind)},
                                          {"coefficients", s.law.coeffs}}}});
    }
    return j.dump(2);
}

}  // namespace tev
