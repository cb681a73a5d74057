#include "latspec/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace latspec {

using nlohmann::json;

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw Error(ErrorKind::InvalidArgument, "format must be csv or json, got \"" + s + "\"");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

// JSON number or null for non-finite values
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double from_json(const json& v) { return v.is_null() ? std::nan("") : v.get<double>(); }

json meta_of(const CountReport& r) {
    return {{"n", r.n},
            {"m", num(r.m)},
            {"delta", num(r.delta)},
            {"mu1", num(r.mu1)},
            {"mu2", num(r.mu2)},
            {"method", r.method},
            {"trust_rule", "m_minus_z >= (2 pi / n)^2 / 10"},
            {"count_tie_tolerance", 1e-12},
            {"version", kVersion}};
}

} // namespace

std::string count_report_csv(const CountReport& r) {
    std::string out = "m_minus_z,z,count,det_min,hs_norm,hs_diff,trusted\n";
    for (const CountRow& row : r.rows) {
        out += format_number(row.m_minus_z) + ',' + format_number(row.z) + ',' + std::to_string(row.count) + ',' +
               format_number(row.det_min) + ',' + format_number(row.hs_norm) + ',' + format_number(row.hs_diff) +
               ',' + (row.trusted ? "true" : "false") + '\n';
    }
    return out;
}

std::string count_report_json(const CountReport& r) {
    json rows = json::array();
    for (const CountRow& row : r.rows)
        rows.push_back({{"m_minus_z", num(row.m_minus_z)},
                        {"z", num(row.z)},
                        {"count", row.count},
                        {"det_min", num(row.det_min)},
                        {"hs_norm", num(row.hs_norm)},
                        {"hs_diff", num(row.hs_diff)},
                        {"trusted", row.trusted}});
    return json{{"meta", meta_of(r)}, {"rows", rows}}.dump(2) + "\n";
}

CountReport parse_count_report(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw Error(ErrorKind::Data, "empty count report");
    CountReport r;
    if (text[first] == '{') {
        try {
            const json j = json::parse(text);
            const json& meta = j.at("meta");
            r.n = meta.value("n", 0);
            r.m = from_json(meta.value("m", json(nullptr)));
            r.delta = from_json(meta.value("delta", json(1.0)));
            r.mu1 = from_json(meta.value("mu1", json(nullptr)));
            r.mu2 = from_json(meta.value("mu2", json(nullptr)));
            r.method = meta.value("method", "");
            for (const json& row : j.at("rows")) {
                CountRow c;
                c.m_minus_z = from_json(row.at("m_minus_z"));
                c.z = from_json(row.at("z"));
                c.count = row.at("count").get<int>();
                c.det_min = from_json(row.at("det_min"));
                c.hs_norm = from_json(row.at("hs_norm"));
                c.hs_diff = from_json(row.at("hs_diff"));
                c.trusted = row.at("trusted").get<bool>();
                r.rows.push_back(c);
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Data, std::string("malformed JSON count report: ") + e.what());
        }
        return r;
    }
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line.rfind("m_minus_z,z,count", 0) != 0) throw Error(ErrorKind::Data, "unexpected count report header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[7];
        for (auto& s : f)
            if (!std::getline(ls, s, ',')) throw Error(ErrorKind::Data, "short count report row: " + line);
        try {
            CountRow c;
            c.m_minus_z = std::stod(f[0]);
            c.z = std::stod(f[1]);
            c.count = std::stoi(f[2]);
            c.det_min = std::stod(f[3]);
            c.hs_norm = std::stod(f[4]);
            c.hs_diff = std::stod(f[5]);
            c.trusted = f[6] == "true";
            r.rows.push_back(c);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Data, "bad count report row: " + line);
        }
    }
    return r;
}

CountReport read_count_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open count report " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_count_report(ss.str());
}

std::string essential_csv(const EssentialSpectrumReport& r) {
    std::string out = "channel,node,p1,p2,p3,z,m_alpha\n";
    auto emit = [&](int c, const std::vector<BranchPoint>& v) {
        for (const BranchPoint& b : v)
            out += std::to_string(c) + ',' + std::to_string(b.node) + ',' + format_number(b.p[0]) + ',' +
                   format_number(b.p[1]) + ',' + format_number(b.p[2]) + ',' + format_number(b.z) + ',' +
                   format_number(b.m_alpha) + '\n';
    };
    emit(1, r.branches1);
    emit(2, r.branches2);
    return out;
}

std::string essential_json(const EssentialSpectrumReport& r) {
    auto rows = [](const std::vector<BranchPoint>& v) {
        json a = json::array();
        for (const BranchPoint& b : v)
            a.push_back({{"node", b.node}, {"p", {b.p[0], b.p[1], b.p[2]}}, {"z", num(b.z)}, {"m_alpha", num(b.m_alpha)}});
        return a;
    };
    const json j{{"meta",
                  {{"band_lo", num(r.band_lo)},
                   {"band_hi", num(r.band_hi)},
                   {"union_lower_edge", num(r.union_lower_edge)},
                   {"version", kVersion}}},
                 {"branches1", rows(r.branches1)},
                 {"branches2", rows(r.branches2)}};
    return j.dump(2) + "\n";
}

std::string mode_table_csv(const std::vector<ModeRow>& rows) {
    std::string out = "l,lambda,value\n";
    for (const ModeRow& m : rows)
        out += std::to_string(m.l) + ',' + format_number(m.lambda) + ',' + format_number(m.value) + '\n';
    return out;
}

std::string u_curve_csv(const std::vector<std::pair<double, double>>& curve) {
    std::string out = "mu,value\n";
    for (const auto& [mu, v] : curve) out += format_number(mu) + ',' + format_number(v) + '\n';
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    out << text;
}

} // namespace latspec
