#include "latspec/efimov.hpp"
#include "latspec/friedrichs.hpp"
#include "latspec/model_io.hpp"
#include "latspec/report.hpp"
#include "latspec/spectrum.hpp"
#include "latspec/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <limits>

using namespace latspec;
using nlohmann::json;

namespace {

struct Config {
    std::string model;
    int grid = 0;
    int zmin_exp = 1;
    int zmax_exp = 8;
    double delta = 0.0;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 20240611;
    int lmax = 40;
    double lambda_max = 50.0;
    std::vector<double> r_list{100.0, 200.0, 400.0};
    std::string count_report;
    std::string modes_out;
    std::string u_curve_out;
    bool no_hs = false;
};

LoadedModel load(const Config& c) {
    if (c.model.empty()) throw Error(ErrorKind::InvalidArgument, "--model is required");
    ModelOverrides o;
    if (c.grid != 0) {
        if (c.grid < 2) throw Error(ErrorKind::InvalidArgument, "--grid must be at least 2");
        o.grid = c.grid;
    }
    if (c.delta != 0.0) o.delta = c.delta;
    return load_model(c.model, o);
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// key,value table or a flat JSON object
struct KeyValues {
    std::vector<std::pair<std::string, std::string>> text;
    json obj = json::object();

    void add(const std::string& k, double v) {
        text.emplace_back(k, format_number(v));
        obj[k] = jnum(v);
    }
    void add(const std::string& k, int v) {
        text.emplace_back(k, std::to_string(v));
        obj[k] = v;
    }
    void add(const std::string& k, const std::string& v) {
        text.emplace_back(k, v);
        obj[k] = v;
    }
    std::string render(Format f) const {
        if (f == Format::Json) return obj.dump(2) + "\n";
        std::string s = "key,value\n";
        for (const auto& [k, v] : text) s += k + ',' + v + '\n';
        return s;
    }
};

int cmd_threshold(const Config& c) {
    const Format fmt = parse_format(c.format);
    const LoadedModel lm = load(c);
    const ModelSpec& spec = lm.spec;
    KeyValues kv;
    kv.add("version", std::string(kVersion));
    kv.add("grid", spec.grid.n());
    kv.add("m", spec.m);
    kv.add("M", spec.M);
    QuadratureChoice graded;
    graded.kind = Quadrature::Graded;
    QuadratureChoice coupling;
    coupling.kind = lm.coupling_quadrature;
    const int ns[] = {8, 16, 32};
    for (Channel ch : {Channel::One, Channel::Two}) {
        const std::string p = "channel" + std::to_string(index_of(ch) + 1) + ".";
        const double mu = spec.mu(ch);
        kv.add(p + "mu", mu);
        kv.add(p + "mu0_grid", coupling_threshold(spec, ch));
        kv.add(p + "mu0_graded", coupling_threshold(spec, ch, graded));
        kv.add(p + "class", to_string(classify_threshold(spec, ch, mu, coupling)));
        try {
            const ExpansionFit f = expansion_fit(spec, ch, graded);
            kv.add(p + "fit_kind", to_string(f.kind));
            kv.add(p + "fit_slope", f.slope);
            kv.add(p + "predicted_slope", f.predicted_slope);
            kv.add(p + "fit_residual", f.residual);
            kv.add(p + "bound_c1", f.c1);
            kv.add(p + "bound_c2", f.c2);
            kv.add(p + "bound_c_quadratic", f.c_quadratic);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ExpansionMismatch) throw;
            kv.add(p + "fit_error", std::string(e.what()));
        }
        const std::vector<double> norms = resonance_function_norm(spec, ch, ns);
        for (std::size_t i = 0; i < norms.size(); ++i)
            kv.add(p + "resonance_norm_n" + std::to_string(ns[i]), norms[i]);
    }
    write_text(c.out, kv.render(fmt));
    return 0;
}

std::vector<double> sweep_distances(const Config& c) {
    if (c.zmin_exp > c.zmax_exp)
        throw Error(ErrorKind::InvalidArgument, "empty z sweep: --zmin-exp exceeds --zmax-exp");
    std::vector<double> d;
    for (int k = c.zmin_exp; k <= c.zmax_exp; ++k) d.push_back(std::pow(10.0, -k));
    return d;
}

int cmd_count(const Config& c) {
    const Format fmt = parse_format(c.format);
    const std::vector<double> d = sweep_distances(c);
    const LoadedModel lm = load(c);
    const CountReport r = count_sweep(lm.spec, d, lm.spec.delta, !c.no_hs);
    write_text(c.out, fmt == Format::Csv ? count_report_csv(r) : count_report_json(r));
    return 0;
}

int cmd_essential(const Config& c) {
    const Format fmt = parse_format(c.format);
    const LoadedModel lm = load(c);
    const EssentialSpectrumReport r = essential_spectrum(lm.spec);
    write_text(c.out, fmt == Format::Csv ? essential_csv(r) : essential_json(r));
    return 0;
}

int cmd_efimov(const Config& c) {
    const Format fmt = parse_format(c.format);
    const LoadedModel lm = load(c);
    const HessianData h = hessian_at_minimum(lm.spec);
    const EfimovParams p = efimov_params(h);
    UcoefOptions uo;
    uo.lmax = c.lmax;
    uo.lambda_max = c.lambda_max;
    const double u1 = ucoef(p, 1.0, uo);
    KeyValues kv;
    kv.add("version", std::string(kVersion));
    kv.add("u12", p.u12);
    kv.add("s12", p.s12);
    kv.add("r12", p.r12);
    kv.add("lmax", c.lmax);
    kv.add("lambda_max", c.lambda_max);
    kv.add("U1", u1);
    int prev = -1;
    for (double r : c.r_list) {
        const int n = sobolev_finite(p, r, 1.0, c.lmax);
        const std::string k = "sobolev.r" + format_number(r) + ".";
        kv.add(k + "count", n);
        kv.add(k + "half_density", 0.5 * n / r);
        kv.add(k + "relative_error", u1 > 0.0 ? (0.5 * n / r - u1) / u1 : nan());
        kv.add(k + "ratio_to_previous", prev > 0 ? double(n) / prev : nan());
        prev = n;
    }
    if (!c.count_report.empty()) {
        const SlopeFit f = asymptotic_slope(read_count_report(c.count_report));
        kv.add("slope.estimate", f.slope);
        kv.add("slope.intercept", f.intercept);
        kv.add("slope.residual", f.residual);
        kv.add("slope.points", f.points);
        kv.add("slope.relative_to_U1", u1 > 0.0 ? f.slope / u1 : nan());
    }
    if (!c.modes_out.empty()) write_text(c.modes_out, mode_table_csv(mode_table(p, c.lmax, 10.0, 0.1)));
    if (!c.u_curve_out.empty()) {
        std::vector<std::pair<double, double>> curve;
        for (int i = 1; i <= 20; ++i) curve.emplace_back(0.1 * i, ucoef(p, 0.1 * i, uo));
        write_text(c.u_curve_out, u_curve_csv(curve));
    }
    write_text(c.out, kv.render(fmt));
    return 0;
}

int cmd_validate(const Config& c) {
    const std::vector<PropertyResult> results = run_property_suites(c.seed);
    bool all = true;
    std::string text;
    for (const PropertyResult& r : results) {
        text += std::string(r.pass ? "PASS " : "FAIL ") + r.name + " (" + r.detail + ")\n";
        all = all && r.pass;
    }
    write_text(c.out, text);
    return all ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete spectrum toolkit for two-channel lattice Friedrichs models"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* s) {
        s->add_option("--model", cfg.model, "Model file (JSON)");
        s->add_option("--grid", cfg.grid, "Grid points per axis (overrides the model file)");
        s->add_option("--delta", cfg.delta, "Cutoff radius of the threshold model kernel");
        s->add_option("--format", cfg.format, "csv or json");
        s->add_option("--out", cfg.out, "Output path (default stdout)");
    };
    CLI::App* threshold = app.add_subcommand("threshold", "Critical couplings, threshold class, expansion fit");
    common(threshold);
    CLI::App* count = app.add_subcommand("count", "Eigenvalue counts N(m - 10^-k)");
    common(count);
    count->add_option("--zmin-exp", cfg.zmin_exp, "Smallest k");
    count->add_option("--zmax-exp", cfg.zmax_exp, "Largest k");
    count->add_flag("--no-hs", cfg.no_hs, "Skip the Hilbert-Schmidt diagnostics");
    CLI::App* essential = app.add_subcommand("essential", "Channel branches and band edges");
    common(essential);
    CLI::App* efimov = app.add_subcommand("efimov", "Efimov coefficient and the finite Sobolev check");
    common(efimov);
    efimov->add_option("--lmax", cfg.lmax, "Largest Legendre degree");
    efimov->add_option("--lambda-max", cfg.lambda_max, "Upper end of the lambda integral");
    efimov->add_option("--r", cfg.r_list, "Interval lengths for S_r")->delimiter(',');
    efimov->add_option("--count-report", cfg.count_report, "Count report for the asymptotic slope");
    efimov->add_option("--modes", cfg.modes_out, "Write the mode table (CSV)");
    efimov->add_option("--u-curve", cfg.u_curve_out, "Write U(mu) for mu = 0.1..2 (CSV)");
    CLI::App* validate = app.add_subcommand("validate", "Run the property suites");
    validate->add_option("--seed", cfg.seed, "RNG seed");
    validate->add_option("--out", cfg.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*threshold) return cmd_threshold(cfg);
        if (*count) return cmd_count(cfg);
        if (*essential) return cmd_essential(cfg);
        if (*efimov) return cmd_efimov(cfg);
        if (*validate) return cmd_validate(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
