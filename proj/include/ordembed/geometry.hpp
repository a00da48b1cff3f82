/// @file  geometry.hpp
/// @brief Bisector predicates and gauge-group alignment (Procrustes family).

#pragma once

#include <ordembed/rng.hpp>
#include <ordembed/types.hpp>

namespace ordembed {

enum class BisectorSide { CloserToY, CloserToYPrime, Equidistant };

/// Which side of the bisector hyperplane of (y, y') the point x falls on.
/// CloserToY means ||x-y|| < ||x-y'||, i.e. x lies in the open halfspace
/// H+(y, y'). The default tie tolerance is exact floating-point comparison.
BisectorSide bisector_side(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& yprime,
                           double tie_tolerance = 0.0);

/// Apply T to every point of X.
Configuration apply_similarity(const SimilarityTransform& T, const Configuration& X);

/// Apply a gauge pair to an unfolding configuration.
SphericalConfiguration apply_gauge_individuals(const GaugePair& G,
                                               const SphericalConfiguration& X);
Configuration apply_gauge_objects(const GaugePair& G, const Configuration& Y);

/// RMS radius of the centered configuration.
double rms_radius(const Configuration& X);

/// Least-squares similarity alignment (closed form via the SVD of the
/// centered cross-covariance). With allow_reflection the fit ranges over the
/// full similarity group; otherwise the orthogonal factor is constrained to
/// det +1.
AlignmentResult similarity_procrustes(const Configuration& source,
                                      const Configuration& target,
                                      bool allow_reflection = true);

/// Best orthogonal map (reflections allowed) from source to target; no
/// scale, no translation.
AlignmentResult orthogonal_align(const SphericalConfiguration& source,
                                 const SphericalConfiguration& target);

/// Fit the vector-model gauge (L, tau) on object pairs by least squares,
/// apply the induced individual action, and report the max of the object
/// and individual RMS residuals.
AlignmentResult gauge_align_vector_model(const SphericalConfiguration& src_individuals,
                                         const Configuration& src_objects,
                                         const SphericalConfiguration& tgt_individuals,
                                         const Configuration& tgt_objects);

/// Haar-ish random rotation (det +1) from the QR of a Gaussian matrix.
Eigen::MatrixXd random_rotation(Rng& rng, Eigen::Index dim);

/// Random similarity with log-uniform scale in [1/scale_range, scale_range]
/// and Gaussian translation.
SimilarityTransform random_similarity(Rng& rng, Eigen::Index dim,
                                      double scale_range = 3.0,
                                      bool allow_reflection = true);

/// Random gauge pair with condition number at most max_condition.
GaugePair random_gauge(Rng& rng, Eigen::Index dim, double max_condition = 10.0);

}  // namespace ordembed
