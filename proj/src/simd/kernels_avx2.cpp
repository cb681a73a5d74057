// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "latspec/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace latspec::simd {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void cosine_row(const CosineRowArgs& a) {
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d fs[3], fc[3], vb[3], vc[3];
    for (int i = 0; i < 3; ++i) {
        fs[i] = _mm256_set1_pd(a.fixed_sh[i]);
        fc[i] = _mm256_set1_pd(a.fixed_ch[i]);
        vb[i] = _mm256_set1_pd(a.b[i]);
        vc[i] = _mm256_set1_pd(a.c[i]);
    }
    const __m256d base = _mm256_set1_pd(a.base);
    std::size_t j = 0;
    for (; j + 4 <= a.n; j += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (int i = 0; i < 3; ++i) {
            const __m256d sy = _mm256_loadu_pd(a.sh[i] + j);
            const __m256d cy = _mm256_loadu_pd(a.ch[i] + j);
            const __m256d d = _mm256_fmsub_pd(fs[i], cy, _mm256_mul_pd(fc[i], sy));
            acc = _mm256_fmadd_pd(vb[i], _mm256_mul_pd(d, d), acc);
            acc = _mm256_fmadd_pd(vc[i], _mm256_mul_pd(sy, sy), acc);
        }
        _mm256_storeu_pd(a.out + j, _mm256_fmadd_pd(two, acc, base));
    }
    for (; j < a.n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double sy = a.sh[i][j];
            const double cy = a.ch[i][j];
            const double d = a.fixed_sh[i] * cy - a.fixed_ch[i] * sy;
            acc += a.b[i] * d * d + a.c[i] * sy * sy;
        }
        a.out[j] = a.base + 2.0 * acc;
    }
}

double reciprocal_sum(const double* num, const double* den, double shift, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(shift);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(num + j),
                                                 _mm256_sub_pd(_mm256_loadu_pd(den + j), vs)));
        acc1 = _mm256_add_pd(acc1, _mm256_div_pd(_mm256_loadu_pd(num + j + 4),
                                                 _mm256_sub_pd(_mm256_loadu_pd(den + j + 4), vs)));
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) s += num[j] / (den[j] - shift);
    return s;
}

void scaled_reciprocal(const double* num, const double* den, double shift, double scale, std::size_t n,
                       double* out) {
    const __m256d vs = _mm256_set1_pd(shift);
    const __m256d vk = _mm256_set1_pd(scale);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d q = _mm256_div_pd(_mm256_mul_pd(vk, _mm256_loadu_pd(num + j)),
                                        _mm256_sub_pd(_mm256_loadu_pd(den + j), vs));
        _mm256_storeu_pd(out + j, q);
    }
    for (; j < n; ++j) out[j] = scale * num[j] / (den[j] - shift);
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m256d a = _mm256_loadu_pd(x + j);
        const __m256d b = _mm256_loadu_pd(x + j + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) s += x[j] * x[j];
    return s;
}

double sum_squared_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j) {
        const double d = x[j] - y[j];
        s += d * d;
    }
    return s;
}

void min_max(const double* x, std::size_t n, double* lo, double* hi) {
    double l = std::numeric_limits<double>::infinity();
    double h = -l;
    std::size_t j = 0;
    if (n >= 4) {
        __m256d vl = _mm256_loadu_pd(x);
        __m256d vh = vl;
        for (j = 4; j + 4 <= n; j += 4) {
            const __m256d v = _mm256_loadu_pd(x + j);
            vl = _mm256_min_pd(vl, v);
            vh = _mm256_max_pd(vh, v);
        }
        alignas(32) double bl[4], bh[4];
        _mm256_store_pd(bl, vl);
        _mm256_store_pd(bh, vh);
        for (int k = 0; k < 4; ++k) {
            l = std::min(l, bl[k]);
            h = std::max(h, bh[k]);
        }
    }
    for (; j < n; ++j) {
        l = std::min(l, x[j]);
        h = std::max(h, x[j]);
    }
    *lo = l;
    *hi = h;
}

} // namespace

const KernelTable& avx2_kernel_table() {
    static const KernelTable table{"avx2",      cosine_row,       reciprocal_sum, scaled_reciprocal,
                                   sum_squares, sum_squared_diff, min_max};
    return table;
}

} // namespace latspec::simd
