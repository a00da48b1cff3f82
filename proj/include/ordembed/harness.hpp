/// @file  harness.hpp
/// @brief Identifiability experiments at finite scale and the explicit
///        non-uniqueness counterexamples.

#pragma once

#include <ordembed/geometry.hpp>
#include <ordembed/rng.hpp>
#include <ordembed/solvers.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ordembed {

enum class Design { UniformBall, UniformCube, UniformSphere, Grid };
enum class Variant {
    ExternalPoint,
    ExternalVector,
    Mds,
    InternalPoint,
    InternalVector,
    SphereMds
};

const char* to_string(Design d);
const char* to_string(Variant v);
Design design_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

/// Sample `count` points of a design in dimension `dim`. Grid is the
/// deterministic lattice over [-1,1]^p; the others are continuous uniform.
Configuration sample_design(Design d, int count, int dim, Rng& rng);

/// Problem size of one sweep entry. `viewers` is unused (0) for the MDS,
/// sphere and external variants, which are sized by `objects` alone.
struct ExperimentSize {
    int viewers = 0;
    int objects = 0;
};

struct ExperimentSpec {
    Variant variant = Variant::Mds;
    int dim = 2;
    std::vector<ExperimentSize> sizes;
    Design design = Design::UniformBall;
    int trials = 20;
    std::uint64_t seed = 0;
    SolverOptions solver_opts;
    /// Optional triple subsample size for the MDS variants (all triples
    /// when absent).
    std::optional<std::size_t> triple_sample;
    /// Sanity path: score the ground truth itself instead of solving.
    bool bypass_solver = false;
    /// Exploratory regime for the internal models: objects are sampled
    /// from the design shifted by this offset, so the individual and
    /// object sets overlap without coinciding. Nothing is asserted about
    /// this regime.
    std::vector<double> object_offset;
};

struct TrialRecord {
    int size_index = 0;
    int trial = 0;
    long violations = 0;
    std::size_t comparisons = 0;
    double aligned_residual = 0.0;
    double recovery_error = 0.0;
    double wall_time_sec = 0.0;  ///< console diagnostics; not serialized
    bool degenerate = false;
    bool failed = false;
    std::string error;
};

struct SizeSummary {
    ExperimentSize size;
    double median_residual = 0.0;
    double iqr_residual = 0.0;
    double median_recovery = 0.0;
    double iqr_recovery = 0.0;
    double zero_violation_fraction = 0.0;
    double mean_violation_fraction = 0.0;
    int failed_trials = 0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<TrialRecord> trials;
    std::vector<SizeSummary> summaries;
};

/// Run the sweep: per trial, sample ground truth, generate exact rank data,
/// solve, align with the variant's gauge group, and record violation and
/// residual statistics. Trials run concurrently up to the
/// ORDINAL_EMBED_THREADS cap (0 or unset = auto); results merge in
/// deterministic (size, trial) order. Per-trial failures are recorded, not
/// thrown.
ExperimentReport run_identifiability_experiment(const ExperimentSpec& spec);

/// Median and interquartile range with linearly interpolated quartiles.
double quantile(std::vector<double> values, double q);

struct CounterexampleReport {
    std::string which;
    bool rank_data_equal = false;
    double alignment_residual = 0.0;
    double residual_floor = 0.0;
    bool pass = false;  ///< identical rank data AND residual above the floor
};

/// Two internal-point configurations with identical rank data that are not
/// similarity images of each other: individuals in a small ball, objects
/// that add a ray, and an increasing non-affine reparameterization of the
/// ray. `ray_exponent` 1 gives the identity map (degenerate sanity case).
struct PointRayCounterexample {
    Configuration individuals;
    Configuration objects_a;
    Configuration objects_b;
    CounterexampleReport report;
};
PointRayCounterexample counterexample_internal_point_ray(double ray_exponent = 2.0);

/// Internal-vector counterexamples.
struct VectorCounterexample {
    SphericalConfiguration individuals;
    Configuration objects_a;
    Configuration objects_b;
    CounterexampleReport report;
};

/// Individuals exactly the canonical basis; objects mapped coordinatewise by
/// increasing maps (u, v) -> (u^u_exponent on odd powers, v_scale * v).
VectorCounterexample counterexample_internal_vector_coordinatewise(
    double u_exponent = 3.0, double v_scale = 2.0);

/// Individuals {(1,1)/sqrt(2), e1, e2}; objects sampled from two disjoint
/// balls, the far ball translated by `shift` in the second configuration.
VectorCounterexample counterexample_internal_vector_disconnected(
    double shift = 0.4);

/// Both vector counterexamples with their default parameters.
std::vector<VectorCounterexample> counterexample_internal_vector();

struct GaugeSuiteReport {
    int trials = 0;
    int passes = 0;
    int failures = 0;
};

/// For each trial, sample a configuration and a random element of the
/// variant's gauge group and check that the rank data is exactly invariant.
GaugeSuiteReport gauge_invariance_suite(Variant variant, int trials,
                                        std::uint64_t seed);

}  // namespace ordembed
