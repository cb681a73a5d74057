#include "latspec/dispersion.hpp"

#include "latspec/grid.hpp"
#include "latspec/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace latspec {

double builtin_epsilon(const Vec3& q) {
    double s = 0.0;
    for (double x : q) {
        const double h = std::sin(0.5 * x);
        s += h * h;
    }
    return 2.0 * s;
}

Dispersion Dispersion::builtin(const Vec3& axis_weights) {
    for (double w : axis_weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "axis weights must be positive");
    Dispersion d;
    d.kind_ = Kind::Builtin;
    d.weights_ = axis_weights;
    d.label_ = "builtin";
    return d;
}

Dispersion Dispersion::tabulated(int n, std::vector<double> values) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "tabulated dispersion needs n >= 2");
    if (values.size() != static_cast<std::size_t>(n) * n * n)
        throw Error(ErrorKind::Data, "tabulated dispersion has " + std::to_string(values.size()) +
                                         " values, expected n^3 = " + std::to_string(n * n * n));
    for (double v : values)
        if (!std::isfinite(v)) throw Error(ErrorKind::Data, "tabulated dispersion contains non-finite values");
    Dispersion d;
    d.kind_ = Kind::Tabulated;
    d.label_ = "tabulated";
    d.n_ = n;
    d.table_ = std::make_shared<const std::vector<double>>(std::move(values));
    return d;
}

Dispersion Dispersion::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open dispersion table " + path);
    std::string line;
    std::vector<std::array<double, 4>> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.find_first_of("qQ") != std::string::npos) continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::array<double, 4> r{};
        if (!(ss >> r[0] >> r[1] >> r[2] >> r[3])) throw Error(ErrorKind::Data, "malformed row in " + path + ": " + line);
        rows.push_back(r);
    }
    const int n = static_cast<int>(std::lround(std::cbrt(static_cast<double>(rows.size()))));
    if (n < 2 || static_cast<std::size_t>(n) * n * n != rows.size())
        throw Error(ErrorKind::Data, path + ": row count is not a perfect cube");
    const TorusGrid g = TorusGrid::build(n);
    std::vector<double> values(rows.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& r : rows) {
        const Vec3 q{r[0], r[1], r[2]};
        const std::size_t idx = g.nearest(q);
        const Vec3 node = g.node(idx);
        const Vec3 d = wrap(q - node);
        if (norm(d) > 1e-6 * g.spacing()) throw Error(ErrorKind::Data, path + ": point is not a grid node: " + std::to_string(r[0]) + "," + std::to_string(r[1]) + "," + std::to_string(r[2]));
        values[idx] = r[3];
    }
    if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); }))
        throw Error(ErrorKind::Data, path + ": grid nodes missing");
    return tabulated(n, std::move(values));
}

Dispersion Dispersion::custom(std::function<double(const Vec3&)> f, std::string label) {
    Dispersion d;
    d.kind_ = Kind::Custom;
    d.fn_ = std::move(f);
    d.label_ = std::move(label);
    return d;
}

double Dispersion::operator()(const Vec3& q) const {
    switch (kind_) {
    case Kind::Builtin: {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double h = std::sin(0.5 * q[a]);
            s += weights_[a] * h * h;
        }
        return 2.0 * s;
    }
    case Kind::Custom:
        return fn_(q);
    case Kind::Tabulated:
        break;
    }
    // periodic trilinear interpolation between shifted nodes
    const double h = kTwoPi / n_;
    const int half = n_ / 2;
    std::array<int, 3> j0{};
    std::array<double, 3> f{};
    for (int a = 0; a < 3; ++a) {
        const double t = wrap_angle(q[a]) / h + half - 0.5;
        const double fl = std::floor(t);
        f[a] = t - fl;
        j0[a] = static_cast<int>(fl);
    }
    const auto& tab = *table_;
    auto at = [&](int i, int j, int k) {
        i = ((i % n_) + n_) % n_;
        j = ((j % n_) + n_) % n_;
        k = ((k % n_) + n_) % n_;
        return tab[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
    };
    double s = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const double w = (di ? f[0] : 1.0 - f[0]) * (dj ? f[1] : 1.0 - f[1]) * (dk ? f[2] : 1.0 - f[2]);
                if (w != 0.0) s += w * at(j0[0] + di, j0[1] + dj, j0[2] + dk);
            }
    return s;
}

PairEnergy PairEnergy::sum(Dispersion eps, const Vec3& coefficients) {
    PairEnergy u;
    u.sum_ = true;
    u.eps_ = std::move(eps);
    u.coef_ = coefficients;
    u.label_ = "sum(" + u.eps_.label() + ")";
    return u;
}

PairEnergy PairEnergy::custom(std::function<double(const Vec3&, const Vec3&)> f, std::string label) {
    PairEnergy u;
    u.sum_ = false;
    u.fn_ = std::move(f);
    u.label_ = std::move(label);
    return u;
}

double PairEnergy::operator()(const Vec3& p, const Vec3& q) const {
    if (!sum_) return fn_(p, q);
    return coef_[0] * eps_(p) + coef_[1] * eps_(p - q) + coef_[2] * eps_(q);
}

void PairEnergy::row(const Vec3& fixed, int fixed_slot, const PointSet& ys, std::span<double> out) const {
    if (sum_ && eps_.kind() == Dispersion::Kind::Builtin) {
        // slot 1 fixed: u(x, y) = a e(x) + b e(x - y) + c e(y); slot 2 fixed swaps a and c
        const double cx = fixed_slot == 1 ? coef_[0] : coef_[2];
        const double cy = fixed_slot == 1 ? coef_[2] : coef_[0];
        simd::CosineRowArgs args;
        double base = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double w = eps_.axis_weights()[i];
            const double s = std::sin(0.5 * fixed[i]);
            args.fixed_sh[i] = s;
            args.fixed_ch[i] = std::cos(0.5 * fixed[i]);
            args.b[i] = coef_[1] * w;
            args.c[i] = cy * w;
            base += 2.0 * cx * w * s * s;
            args.sh[i] = ys.half_sin(i).data();
            args.ch[i] = ys.half_cos(i).data();
        }
        args.base = base;
        args.n = ys.size();
        args.out = out.data();
        simd::active().cosine_row(args);
        return;
    }
    for (std::size_t j = 0; j < ys.size(); ++j)
        out[j] = fixed_slot == 1 ? (*this)(fixed, ys[j]) : (*this)(ys[j], fixed);
}

bool PairEnergy::reflection_symmetric() const {
    if (!sum_) return false;
    if (eps_.kind() == Dispersion::Kind::Builtin) return true;
    if (eps_.kind() == Dispersion::Kind::Custom) return false;
    // tabulated: probe the interpolant at the table nodes
    const int n = eps_.table_size();
    const TorusGrid g = TorusGrid::build(n);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const Vec3 q = g.node(idx);
        const double v = eps_(q);
        for (int a = 0; a < 3; ++a) {
            Vec3 r = q;
            r[a] = -r[a];
            if (std::abs(eps_(r) - v) > 1e-12 * (1.0 + std::abs(v))) return false;
        }
    }
    return true;
}

bool PairEnergy::swap_symmetric() const { return sum_ && coef_[0] == coef_[2]; }

FormFactor FormFactor::constant(double value) {
    FormFactor f;
    f.fn_ = [value](const Vec3&) { return value; };
    f.parity_ = Parity::Even;
    f.has_axis_parity_ = true;
    std::ostringstream ss;
    ss << "const(" << value << ")";
    f.label_ = ss.str();
    return f;
}

FormFactor FormFactor::sine(int axis, double amplitude) {
    if (axis < 0 || axis > 2) throw Error(ErrorKind::InvalidArgument, "form factor axis must be 0, 1 or 2");
    FormFactor f;
    f.fn_ = [axis, amplitude](const Vec3& q) { return amplitude * std::sin(q[axis]); };
    f.parity_ = Parity::Odd;
    f.has_axis_parity_ = true;
    f.axis_parity_[axis] = -1;
    f.label_ = "sin(q" + std::to_string(axis + 1) + ")";
    return f;
}

FormFactor FormFactor::cosine(int axis, double amplitude) {
    if (axis < 0 || axis > 2) throw Error(ErrorKind::InvalidArgument, "form factor axis must be 0, 1 or 2");
    FormFactor f;
    f.fn_ = [axis, amplitude](const Vec3& q) { return amplitude * std::cos(q[axis]); };
    f.parity_ = Parity::Even;
    f.has_axis_parity_ = true;
    f.label_ = "cos(q" + std::to_string(axis + 1) + ")";
    return f;
}

FormFactor FormFactor::custom(std::function<double(const Vec3&)> fn, Parity parity, std::string label) {
    FormFactor f;
    f.fn_ = std::move(fn);
    f.parity_ = parity;
    f.label_ = std::move(label);
    return f;
}

double FormFactor::parity_violation(const PointSet& pts) const {
    const double s = parity_ == Parity::Even ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const Vec3 q = pts[j];
        worst = std::max(worst, std::abs(fn_(-q) - s * fn_(q)));
    }
    return worst;
}

} // namespace latspec
