/// @file  solvers.hpp
/// @brief Solvers for the five ordinal embedding problems: external
///        point/vector unfolding, ordinal MDS, internal point/vector
///        unfolding, and spherical ordinal MDS.

#pragma once

#include <ordembed/rankings.hpp>
#include <ordembed/types.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ordembed {

struct SolverOptions {
    int max_iterations = 5000;
    double learning_rate = 0.05;  ///< initial step, cosine-decayed
    double margin = 0.01;         ///< hinge margin on squared quantities
    int restarts = 5;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;  ///< relative loss-change plateau threshold
    // Optional anti-collapse repulsion for internal point unfolding;
    // disabled by default.
    double repulsion_weight = 0.0;
    double repulsion_radius = 0.0;
};

enum class SolveStatus { Ok, Infeasible, NonConverged, Degenerate };

const char* to_string(SolveStatus s);

struct SolveResult {
    Configuration solution;               ///< point / individuals / items
    std::optional<Configuration> objects; ///< second block of internal models
    long violations = 0;
    double loss = 0.0;
    int iterations_used = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::Ok;
    /// Per accepted iteration of the returned restart; non-increasing.
    std::vector<double> loss_trace;
};

/// Locate one individual from its distance ranking of fixed anchors. Every
/// constraint is a bisector halfspace, so the solve is linear feasibility
/// (relaxation sweeps) followed by margin maximization on the minimum slack.
SolveResult solve_external_point(const Configuration& anchors,
                                 const std::vector<int>& row,
                                 const SolverOptions& opts);

/// Inner-product variant; the solution is a unit vector and every
/// constraint is a sign test on <x, y_a - y_b>.
SolveResult solve_external_vector(const Configuration& objects,
                                  const std::vector<int>& row,
                                  const SolverOptions& opts);

/// Embed n items from self-distance triples by hinge descent on squared
/// distances, with random restarts; the returned configuration is
/// normalized to zero centroid and unit RMS radius.
SolveResult solve_ordinal_mds(const TripleSet& triples, int count, int dim,
                              const SolverOptions& opts);

/// Jointly embed individuals and objects from row ranks (distance
/// convention). Objects are renormalized to the centroid/scale gauge each
/// iteration; collapsed solutions are detected and reported.
SolveResult solve_internal_point(const RankMatrix& ranks, int dim,
                                 const SolverOptions& opts);

/// Vector model: individuals on the unit sphere, objects in R^p.
SolveResult solve_internal_vector(const RankMatrix& ranks, int dim,
                                  const SolverOptions& opts);

/// Spherical ordinal MDS on self-distance triples; iterates stay on the
/// unit sphere and no centroid/scale gauge is applied.
SolveResult solve_sphere_mds(const TripleSet& triples, int count, int dim,
                             const SolverOptions& opts);

}  // namespace ordembed
