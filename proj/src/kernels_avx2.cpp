/// @file  kernels_avx2.cpp
/// @brief AVX2/FMA kernel variants. Compiled with -mavx2 -mfma; only ever
///        called after a runtime CPU check.

#ifdef ORDEMBED_WITH_AVX2

#include <ordembed/kernels.hpp>

#include <immintrin.h>

namespace ordembed::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Per element k, the c-loop accumulates with FMA in the same order as the
// scalar reference, so results are bit-identical across backends.
void squared_distance_row_avx2(const double* point, const double* coords,
                               std::size_t count, std::size_t dim,
                               double* out) {
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t c = 0; c < dim; ++c) {
            const __m256d p = _mm256_set1_pd(point[c]);
            const __m256d y = _mm256_loadu_pd(coords + c * count + k);
            const __m256d d = _mm256_sub_pd(p, y);
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = point[c] - coords[c * count + k];
            acc = __builtin_fma(d, d, acc);
        }
        out[k] = acc;
    }
}

void dot_row_avx2(const double* point, const double* coords, std::size_t count,
                  std::size_t dim, double* out) {
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t c = 0; c < dim; ++c) {
            const __m256d p = _mm256_set1_pd(point[c]);
            const __m256d y = _mm256_loadu_pd(coords + c * count + k);
            acc = _mm256_fmadd_pd(p, y, acc);
        }
        _mm256_storeu_pd(out + k, acc);
    }
    for (; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            acc = __builtin_fma(point[c], coords[c * count + k], acc);
        }
        out[k] = acc;
    }
}

HingeStats hinge_stats_avx2(const double* values, const std::int32_t* a,
                            const std::int32_t* b, std::size_t count,
                            double margin) {
    const __m256d vmargin = _mm256_set1_pd(margin);
    const __m256d zero = _mm256_setzero_pd();
    __m256d loss = _mm256_setzero_pd();
    std::int64_t active = 0;
    std::size_t t = 0;
    for (; t + 4 <= count; t += 4) {
        const __m128i ia = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + t));
        const __m128i ib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + t));
        const __m256d va = _mm256_i32gather_pd(values, ia, 8);
        const __m256d vb = _mm256_i32gather_pd(values, ib, 8);
        const __m256d slack = _mm256_add_pd(vmargin, _mm256_sub_pd(va, vb));
        const __m256d mask = _mm256_cmp_pd(slack, zero, _CMP_GT_OQ);
        loss = _mm256_add_pd(loss, _mm256_and_pd(slack, mask));
        active += __builtin_popcount(_mm256_movemask_pd(mask));
    }
    HingeStats stats;
    stats.loss = hsum(loss);
    stats.active = active;
    for (; t < count; ++t) {
        const double slack = margin + values[a[t]] - values[b[t]];
        if (slack > 0.0) {
            stats.loss += slack;
            ++stats.active;
        }
    }
    return stats;
}

std::int64_t count_ge_avx2(const double* values, const std::int32_t* a,
                           const std::int32_t* b, std::size_t count) {
    std::int64_t n = 0;
    std::size_t t = 0;
    for (; t + 4 <= count; t += 4) {
        const __m128i ia = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + t));
        const __m128i ib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + t));
        const __m256d va = _mm256_i32gather_pd(values, ia, 8);
        const __m256d vb = _mm256_i32gather_pd(values, ib, 8);
        const __m256d mask = _mm256_cmp_pd(va, vb, _CMP_GE_OQ);
        n += __builtin_popcount(_mm256_movemask_pd(mask));
    }
    for (; t < count; ++t) {
        if (values[a[t]] >= values[b[t]]) ++n;
    }
    return n;
}

}  // namespace

namespace detail {
const Ops& avx2_ops() {
    static const Ops ops{squared_distance_row_avx2, dot_row_avx2,
                         hinge_stats_avx2, count_ge_avx2};
    return ops;
}
}  // namespace detail

}  // namespace ordembed::kernels

#endif  // ORDEMBED_WITH_AVX2
