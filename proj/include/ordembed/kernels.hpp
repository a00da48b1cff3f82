/// @file  kernels.hpp
/// @brief Data-parallel inner loops: scalar reference implementations plus
///        AVX2 variants selected at runtime.
///
/// Layout convention: a configuration of `count` points in dimension `dim`
/// is stored coordinate-major, i.e. coords[c * count + k] is coordinate c of
/// point k. This matches the memory layout of a column-major count-by-dim
/// matrix, so Eigen::MatrixXd data pointers can be passed directly.
///
/// The per-element kernels (squared_distance_row, dot_row) are specified to
/// produce bit-identical results on every backend: both the scalar and the
/// AVX2 code evaluate the same fused-multiply-add sequence per output
/// element. Reductions (hinge_stats.loss) may differ across backends in the
/// last bits because lane sums associate differently; integer results are
/// exact everywhere.

#pragma once

#include <cstddef>
#include <cstdint>

namespace ordembed::kernels {

enum class Backend { Scalar, Avx2 };

/// True if this build and this CPU can run `b`.
bool supported(Backend b);

/// Backend used by the free functions below. Defaults to the widest
/// supported one.
Backend active();

/// Select a backend explicitly; throws std::invalid_argument if unsupported.
void select(Backend b);

const char* name(Backend b);

/// out[k] = sum_c (point[c] - coords[c*count + k])^2 for k in [0, count).
void squared_distance_row(const double* point, const double* coords,
                          std::size_t count, std::size_t dim, double* out);

/// out[k] = sum_c point[c] * coords[c*count + k] for k in [0, count).
void dot_row(const double* point, const double* coords, std::size_t count,
             std::size_t dim, double* out);

struct HingeStats {
    double loss = 0.0;        ///< sum of max(0, margin + values[a] - values[b])
    std::int64_t active = 0;  ///< number of strictly positive terms
};

/// Hinge reduction over index pairs: term t reads values[a[t]] and
/// values[b[t]].
HingeStats hinge_stats(const double* values, const std::int32_t* a,
                       const std::int32_t* b, std::size_t count,
                       double margin);

/// Number of t with values[a[t]] >= values[b[t]]. Used for violation
/// counting, where a tie breaks a strict precedence.
std::int64_t count_ge(const double* values, const std::int32_t* a,
                      const std::int32_t* b, std::size_t count);

namespace detail {

struct Ops {
    void (*squared_distance_row)(const double*, const double*, std::size_t,
                                 std::size_t, double*);
    void (*dot_row)(const double*, const double*, std::size_t, std::size_t,
                    double*);
    HingeStats (*hinge_stats)(const double*, const std::int32_t*,
                              const std::int32_t*, std::size_t, double);
    std::int64_t (*count_ge)(const double*, const std::int32_t*,
                             const std::int32_t*, std::size_t);
};

const Ops& scalar_ops();
#ifdef ORDEMBED_WITH_AVX2
const Ops& avx2_ops();
#endif

}  // namespace detail

}  // namespace ordembed::kernels
