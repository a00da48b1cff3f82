/// @file  kernels.cpp
/// @brief Scalar reference kernels and runtime backend dispatch.

#include <ordembed/kernels.hpp>

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace ordembed::kernels {

namespace {

// Scalar reference. std::fma is used so the per-element arithmetic matches
// the FMA sequence of the vector backends exactly.

void squared_distance_row_scalar(const double* point, const double* coords,
                                 std::size_t count, std::size_t dim,
                                 double* out) {
    for (std::size_t k = 0; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = point[c] - coords[c * count + k];
            acc = std::fma(d, d, acc);
        }
        out[k] = acc;
    }
}

void dot_row_scalar(const double* point, const double* coords,
                    std::size_t count, std::size_t dim, double* out) {
    for (std::size_t k = 0; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            acc = std::fma(point[c], coords[c * count + k], acc);
        }
        out[k] = acc;
    }
}

HingeStats hinge_stats_scalar(const double* values, const std::int32_t* a,
                              const std::int32_t* b, std::size_t count,
                              double margin) {
    HingeStats stats;
    for (std::size_t t = 0; t < count; ++t) {
        const double slack = margin + values[a[t]] - values[b[t]];
        if (slack > 0.0) {
            stats.loss += slack;
            ++stats.active;
        }
    }
    return stats;
}

std::int64_t count_ge_scalar(const double* values, const std::int32_t* a,
                             const std::int32_t* b, std::size_t count) {
    std::int64_t n = 0;
    for (std::size_t t = 0; t < count; ++t) {
        if (values[a[t]] >= values[b[t]]) ++n;
    }
    return n;
}

bool cpu_has_avx2() {
#if defined(ORDEMBED_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const detail::Ops*>& active_ops() {
    static std::atomic<const detail::Ops*> ops{nullptr};
    return ops;
}

std::atomic<Backend>& active_backend() {
    static std::atomic<Backend> b{Backend::Scalar};
    return b;
}

void ensure_init() {
    if (active_ops().load(std::memory_order_acquire) != nullptr) return;
#ifdef ORDEMBED_WITH_AVX2
    if (cpu_has_avx2()) {
        active_ops().store(&detail::avx2_ops(), std::memory_order_release);
        active_backend().store(Backend::Avx2);
        return;
    }
#endif
    active_ops().store(&detail::scalar_ops(), std::memory_order_release);
    active_backend().store(Backend::Scalar);
}

}  // namespace

namespace detail {
const Ops& scalar_ops() {
    static const Ops ops{squared_distance_row_scalar, dot_row_scalar,
                         hinge_stats_scalar, count_ge_scalar};
    return ops;
}
}  // namespace detail

bool supported(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
            return cpu_has_avx2();
    }
    return false;
}

Backend active() {
    ensure_init();
    return active_backend().load();
}

void select(Backend b) {
    if (!supported(b)) {
        throw std::invalid_argument("kernel backend not supported on this build/CPU");
    }
    switch (b) {
        case Backend::Scalar:
            active_ops().store(&detail::scalar_ops());
            break;
        case Backend::Avx2:
#ifdef ORDEMBED_WITH_AVX2
            active_ops().store(&detail::avx2_ops());
#endif
            break;
    }
    active_backend().store(b);
}

const char* name(Backend b) {
    switch (b) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
    }
    return "?";
}

void squared_distance_row(const double* point, const double* coords,
                          std::size_t count, std::size_t dim, double* out) {
    ensure_init();
    active_ops().load()->squared_distance_row(point, coords, count, dim, out);
}

void dot_row(const double* point, const double* coords, std::size_t count,
             std::size_t dim, double* out) {
    ensure_init();
    active_ops().load()->dot_row(point, coords, count, dim, out);
}

HingeStats hinge_stats(const double* values, const std::int32_t* a,
                       const std::int32_t* b, std::size_t count,
                       double margin) {
    ensure_init();
    return active_ops().load()->hinge_stats(values, a, b, count, margin);
}

std::int64_t count_ge(const double* values, const std::int32_t* a,
                      const std::int32_t* b, std::size_t count) {
    ensure_init();
    return active_ops().load()->count_ge(values, a, b, count);
}

}  // namespace ordembed::kernels
