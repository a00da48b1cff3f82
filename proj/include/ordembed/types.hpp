/// @file  types.hpp
/// @brief Core value types: configurations, transforms, errors.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <variant>

namespace ordembed {

/// Strict-order tie between two compared quantities. Carries the offending
/// indices so callers can perturb or regenerate.
class TieError : public std::runtime_error {
public:
    TieError(int viewer, int first, int second)
        : std::runtime_error("tie detected: viewer " + std::to_string(viewer) +
                             ", objects " + std::to_string(first) + " and " +
                             std::to_string(second)),
          viewer(viewer),
          first(first),
          second(second) {}

    int viewer;
    int first;
    int second;
};

/// An ordered list of points in R^p, one point per row. Column-major
/// storage, so data() is coordinate-major as the kernels expect.
class Configuration {
public:
    explicit Configuration(Eigen::MatrixXd points) : points_(std::move(points)) {
        if (points_.rows() < 1 || points_.cols() < 1) {
            throw std::invalid_argument("configuration must have >= 1 point and dim >= 1");
        }
        if (!points_.allFinite()) {
            throw std::invalid_argument("configuration has non-finite coordinates");
        }
    }

    Eigen::Index count() const { return points_.rows(); }
    Eigen::Index dim() const { return points_.cols(); }
    const Eigen::MatrixXd& points() const { return points_; }
    Eigen::RowVectorXd point(Eigen::Index i) const { return points_.row(i); }
    const double* coord_data() const { return points_.data(); }

    bool operator==(const Configuration& other) const {
        return points_.rows() == other.points_.rows() &&
               points_.cols() == other.points_.cols() && points_ == other.points_;
    }

private:
    Eigen::MatrixXd points_;
};

/// A configuration whose points all lie on the unit sphere.
class SphericalConfiguration {
public:
    static constexpr double kUnitNormTolerance = 1e-12;

    explicit SphericalConfiguration(Configuration config) : config_(std::move(config)) {
        for (Eigen::Index i = 0; i < config_.count(); ++i) {
            if (std::abs(config_.points().row(i).norm() - 1.0) > kUnitNormTolerance) {
                throw std::invalid_argument("point " + std::to_string(i) +
                                            " is not unit-norm");
            }
        }
    }

    explicit SphericalConfiguration(Eigen::MatrixXd points)
        : SphericalConfiguration(Configuration(std::move(points))) {}

    const Configuration& config() const { return config_; }
    Eigen::Index count() const { return config_.count(); }
    Eigen::Index dim() const { return config_.dim(); }
    const Eigen::MatrixXd& points() const { return config_.points(); }

private:
    Configuration config_;
};

/// x |-> scale * Q x + translation, with Q orthogonal and scale > 0.
class SimilarityTransform {
public:
    static constexpr double kOrthogonalityTolerance = 1e-10;

    SimilarityTransform(double scale, Eigen::MatrixXd orthogonal,
                        Eigen::VectorXd translation)
        : scale_(scale),
          orthogonal_(std::move(orthogonal)),
          translation_(std::move(translation)) {
        if (!(scale_ > 0.0)) throw std::invalid_argument("scale must be positive");
        const Eigen::Index p = orthogonal_.rows();
        if (orthogonal_.cols() != p || translation_.size() != p) {
            throw std::invalid_argument("transform dimension mismatch");
        }
        const double err = (orthogonal_.transpose() * orthogonal_ -
                            Eigen::MatrixXd::Identity(p, p))
                               .cwiseAbs()
                               .maxCoeff();
        if (err > kOrthogonalityTolerance) {
            throw std::invalid_argument("matrix is not orthogonal within tolerance");
        }
    }

    static SimilarityTransform identity(Eigen::Index dim) {
        return SimilarityTransform(1.0, Eigen::MatrixXd::Identity(dim, dim),
                                   Eigen::VectorXd::Zero(dim));
    }

    double scale() const { return scale_; }
    const Eigen::MatrixXd& orthogonal() const { return orthogonal_; }
    const Eigen::VectorXd& translation() const { return translation_; }
    Eigen::Index dim() const { return orthogonal_.rows(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        return scale_ * (orthogonal_ * x) + translation_;
    }

    /// this ∘ other: apply `other` first, then this.
    SimilarityTransform compose(const SimilarityTransform& other) const {
        return SimilarityTransform(
            scale_ * other.scale_, orthogonal_ * other.orthogonal_,
            scale_ * (orthogonal_ * other.translation_) + translation_);
    }

    SimilarityTransform inverse() const {
        return SimilarityTransform(1.0 / scale_, orthogonal_.transpose(),
                                   -(orthogonal_.transpose() * translation_) / scale_);
    }

private:
    double scale_;
    Eigen::MatrixXd orthogonal_;
    Eigen::VectorXd translation_;
};

/// Gauge element of the vector unfolding model: objects map by
/// y |-> L y + tau, individuals by x |-> L^{-T} x / ||L^{-T} x||.
class GaugePair {
public:
    static constexpr double kInvertibilityTolerance = 1e-12;

    GaugePair(Eigen::MatrixXd linear, Eigen::VectorXd translation)
        : linear_(std::move(linear)), translation_(std::move(translation)) {
        const Eigen::Index p = linear_.rows();
        if (linear_.cols() != p || translation_.size() != p) {
            throw std::invalid_argument("gauge dimension mismatch");
        }
        if (std::abs(linear_.determinant()) <= kInvertibilityTolerance) {
            throw std::invalid_argument("gauge linear map is not invertible");
        }
        inverse_transpose_ = linear_.inverse().transpose();
    }

    static GaugePair identity(Eigen::Index dim) {
        return GaugePair(Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim));
    }

    const Eigen::MatrixXd& linear() const { return linear_; }
    const Eigen::VectorXd& translation() const { return translation_; }
    Eigen::Index dim() const { return linear_.rows(); }

    Eigen::VectorXd apply_object(const Eigen::VectorXd& y) const {
        return linear_ * y + translation_;
    }

    Eigen::VectorXd apply_individual(const Eigen::VectorXd& x) const {
        Eigen::VectorXd v = inverse_transpose_ * x;
        return v / v.norm();
    }

private:
    Eigen::MatrixXd linear_;
    Eigen::VectorXd translation_;
    Eigen::MatrixXd inverse_transpose_;
};

/// Result of an alignment: the fitted gauge-group element and the RMS point
/// mismatch normalized by the RMS radius of the centered target.
struct AlignmentResult {
    std::variant<SimilarityTransform, GaugePair, Eigen::MatrixXd> transform;
    double residual = 0.0;
    // Set by gauge_align_vector_model; residual is their max.
    double object_residual = 0.0;
    double individual_residual = 0.0;
};

}  // namespace ordembed
