/// @file  counterexamples.cpp
/// @brief Finite reproductions of the non-uniqueness constructions: two
///        configurations with identical rank data that no gauge-group
///        element relates.

#include <ordembed/harness.hpp>
#include <ordembed/rankings.hpp>

#include <cmath>

namespace ordembed {

namespace {

// Shipped seeds; the demos are deterministic.
constexpr std::uint64_t kRaySeed = 91551;
constexpr std::uint64_t kDisconnectedSeed = 40937;

constexpr double kRayResidualFloor = 0.1;
constexpr double kVectorResidualFloor = 0.05;

/// Ball sample of the ray construction. The sample lives well inside the
/// unit ball (radius 0.3) so that every ray point at a >= 1 is strictly
/// farther from every individual than every ball object is; any increasing
/// ray map then preserves the full rank data exactly.
Eigen::MatrixXd ray_ball_sample(int count) {
    Rng rng(kRaySeed);
    Eigen::MatrixXd pts(count, 2);
    for (int i = 0; i < count; ++i) {
        const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double radius = 0.3 * std::sqrt(rng.uniform());
        pts(i, 0) = radius * std::cos(angle);
        pts(i, 1) = radius * std::sin(angle);
    }
    return pts;
}

}  // namespace

PointRayCounterexample counterexample_internal_point_ray(double ray_exponent) {
    const int ball_count = 12;
    const std::vector<double> ray_positions = {1.0, 1.3, 1.7, 2.2, 2.8, 3.5};
    const Eigen::MatrixXd ball = ray_ball_sample(ball_count);

    const int n = ball_count + static_cast<int>(ray_positions.size());
    Eigen::MatrixXd objects_a(n, 2);
    Eigen::MatrixXd objects_b(n, 2);
    objects_a.topRows(ball_count) = ball;
    objects_b.topRows(ball_count) = ball;
    for (std::size_t r = 0; r < ray_positions.size(); ++r) {
        const double a = ray_positions[r];
        objects_a.row(ball_count + static_cast<int>(r)) << a, 0.0;
        objects_b.row(ball_count + static_cast<int>(r)) << std::pow(a, ray_exponent), 0.0;
    }

    PointRayCounterexample out{Configuration(ball), Configuration(objects_a),
                               Configuration(objects_b), {}};
    out.report.which = "internal-point-ray";
    out.report.residual_floor = kRayResidualFloor;
    out.report.rank_data_equal = rank_data_equal_point(
        out.individuals, out.objects_a, out.individuals, out.objects_b);

    // Theorem 4.2's gauge is one similarity applied to individuals and
    // objects alike, so alignment runs on the concatenated configurations.
    Eigen::MatrixXd joint_a(ball_count + n, 2);
    joint_a << ball, objects_a;
    Eigen::MatrixXd joint_b(ball_count + n, 2);
    joint_b << ball, objects_b;
    out.report.alignment_residual =
        similarity_procrustes(Configuration(joint_a), Configuration(joint_b)).residual;
    out.report.pass = out.report.rank_data_equal &&
                      out.report.alignment_residual > out.report.residual_floor;
    return out;
}

VectorCounterexample counterexample_internal_vector_coordinatewise(double u_exponent,
                                                                   double v_scale) {
    Eigen::MatrixXd individuals(2, 2);
    individuals << 1.0, 0.0, 0.0, 1.0;

    // Finite sample of Y = R^2; any coordinatewise increasing map preserves
    // the rank data seen from the canonical basis directions.
    const int count = 10;
    Rng rng(kRaySeed + 1);
    Eigen::MatrixXd objects_a(count, 2);
    for (int i = 0; i < count; ++i) {
        objects_a(i, 0) = rng.uniform(-1.5, 1.5);
        objects_a(i, 1) = rng.uniform(-1.5, 1.5);
    }
    Eigen::MatrixXd objects_b(count, 2);
    for (int i = 0; i < count; ++i) {
        const double u = objects_a(i, 0);
        objects_b(i, 0) = std::copysign(std::pow(std::abs(u), u_exponent), u);
        objects_b(i, 1) = v_scale * objects_a(i, 1);
    }

    VectorCounterexample out{SphericalConfiguration(individuals),
                             Configuration(objects_a), Configuration(objects_b),
                             {}};
    out.report.which = "internal-vector-coordinatewise";
    out.report.residual_floor = kVectorResidualFloor;
    out.report.rank_data_equal =
        rank_data_equal_vector(out.individuals, out.objects_a, out.individuals,
                               out.objects_b);
    out.report.alignment_residual =
        gauge_align_vector_model(out.individuals, out.objects_a, out.individuals,
                                 out.objects_b)
            .residual;
    out.report.pass = out.report.rank_data_equal &&
                      out.report.alignment_residual > out.report.residual_floor;
    return out;
}

VectorCounterexample counterexample_internal_vector_disconnected(double shift) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd individuals(3, 2);
    individuals << inv_sqrt2, inv_sqrt2, 1.0, 0.0, 0.0, 1.0;

    // Objects fill B(0,1) and B(3*e0,1); the balls are separated along every
    // individual direction, so translating only the far ball preserves all
    // comparisons exactly.
    const int per_ball = 8;
    Rng rng(kDisconnectedSeed);
    Eigen::MatrixXd objects_a(2 * per_ball, 2);
    for (int i = 0; i < 2 * per_ball; ++i) {
        const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double radius = std::sqrt(rng.uniform());
        objects_a(i, 0) = radius * std::cos(angle);
        objects_a(i, 1) = radius * std::sin(angle);
        if (i >= per_ball) {
            objects_a(i, 0) += 3.0 * inv_sqrt2;
            objects_a(i, 1) += 3.0 * inv_sqrt2;
        }
    }
    Eigen::MatrixXd objects_b = objects_a;
    for (int i = per_ball; i < 2 * per_ball; ++i) {
        objects_b(i, 0) += shift;
        objects_b(i, 1) += shift;
    }

    VectorCounterexample out{SphericalConfiguration(individuals),
                             Configuration(objects_a), Configuration(objects_b),
                             {}};
    out.report.which = "internal-vector-disconnected";
    out.report.residual_floor = kVectorResidualFloor;
    out.report.rank_data_equal =
        rank_data_equal_vector(out.individuals, out.objects_a, out.individuals,
                               out.objects_b);
    out.report.alignment_residual =
        gauge_align_vector_model(out.individuals, out.objects_a, out.individuals,
                                 out.objects_b)
            .residual;
    out.report.pass = out.report.rank_data_equal &&
                      out.report.alignment_residual > out.report.residual_floor;
    return out;
}

std::vector<VectorCounterexample> counterexample_internal_vector() {
    return {counterexample_internal_vector_coordinatewise(),
            counterexample_internal_vector_disconnected()};
}

}  // namespace ordembed
