#include "latspec/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace latspec::simd {
namespace {

void cosine_row(const CosineRowArgs& a) {
    for (std::size_t j = 0; j < a.n; ++j) {
        double acc = a.base;
        for (int i = 0; i < 3; ++i) {
            const double sy = a.sh[i][j];
            const double cy = a.ch[i][j];
            const double d = a.fixed_sh[i] * cy - a.fixed_ch[i] * sy;
            acc += 2.0 * (a.b[i] * d * d + a.c[i] * sy * sy);
        }
        a.out[j] = acc;
    }
}

double reciprocal_sum(const double* num, const double* den, double shift, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += num[j] / (den[j] - shift);
    return s;
}

void scaled_reciprocal(const double* num, const double* den, double shift, double scale, std::size_t n,
                       double* out) {
    for (std::size_t j = 0; j < n; ++j) out[j] = scale * num[j] / (den[j] - shift);
}

double sum_squares(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[j] * x[j];
    return s;
}

double sum_squared_diff(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = x[j] - y[j];
        s += d * d;
    }
    return s;
}

void min_max(const double* x, std::size_t n, double* lo, double* hi) {
    double l = std::numeric_limits<double>::infinity();
    double h = -l;
    for (std::size_t j = 0; j < n; ++j) {
        l = std::min(l, x[j]);
        h = std::max(h, x[j]);
    }
    *lo = l;
    *hi = h;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar",          cosine_row,       reciprocal_sum, scaled_reciprocal,
                                   sum_squares,       sum_squared_diff, min_max};
    return table;
}

} // namespace latspec::simd
