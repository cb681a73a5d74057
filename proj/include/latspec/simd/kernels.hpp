#pragma once

// Data-parallel inner loops shared by the quadrature, matrix assembly and
// diagnostics code. Every kernel has a scalar reference implementation; an
// AVX2/FMA variant is compiled separately and picked at runtime when the CPU
// supports it. Set LATSPEC_SIMD=scalar to force the reference path.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace latspec::simd {

/// One fixed point x against n moving points y_j for
///   u(x, y) = sum_i [a_i (1 - cos x_i) + b_i (1 - cos(x_i - y_i)) + c_i (1 - cos y_i)].
/// Points are passed as half-angle sines/cosines so that 1 - cos t = 2 sin^2(t/2)
/// stays accurate near the minimum.
struct CosineRowArgs {
    std::array<double, 3> fixed_sh{};  // sin(x_i / 2)
    std::array<double, 3> fixed_ch{};  // cos(x_i / 2)
    std::array<double, 3> b{};
    std::array<double, 3> c{};
    double base = 0.0;                 // sum_i a_i (1 - cos x_i)
    std::array<const double*, 3> sh{}; // sin(y_ij / 2), axis-major
    std::array<const double*, 3> ch{};
    std::size_t n = 0;
    double* out = nullptr;
};

struct KernelTable {
    const char* name;
    void (*cosine_row)(const CosineRowArgs& args);
    /// sum_j num_j / (den_j - shift)
    double (*reciprocal_sum)(const double* num, const double* den, double shift, std::size_t n);
    /// out_j = scale * num_j / (den_j - shift)
    void (*scaled_reciprocal)(const double* num, const double* den, double shift, double scale,
                              std::size_t n, double* out);
    double (*sum_squares)(const double* x, std::size_t n);
    /// sum_j (x_j - y_j)^2
    double (*sum_squared_diff)(const double* x, const double* y, std::size_t n);
    void (*min_max)(const double* x, std::size_t n, double* lo, double* hi);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Kernel table used by the library; chosen once per process.
const KernelTable& active();

// Span conveniences over the active table.

inline double reciprocal_sum(std::span<const double> num, std::span<const double> den, double shift) {
    return active().reciprocal_sum(num.data(), den.data(), shift, num.size());
}

inline void scaled_reciprocal(std::span<const double> num, std::span<const double> den, double shift,
                              double scale, std::span<double> out) {
    active().scaled_reciprocal(num.data(), den.data(), shift, scale, num.size(), out.data());
}

inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

inline double sum_squared_diff(std::span<const double> x, std::span<const double> y) {
    return active().sum_squared_diff(x.data(), y.data(), x.size());
}

} // namespace latspec::simd
