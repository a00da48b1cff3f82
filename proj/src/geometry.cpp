/// @file  geometry.cpp
/// @brief Bisector predicates, Procrustes-family alignment, random gauges.

#include <ordembed/geometry.hpp>

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ordembed {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string("dimension mismatch in ") + what);
}

void require_same_shape(const Configuration& a, const Configuration& b,
                        const char* what) {
    if (a.dim() != b.dim() || a.count() != b.count()) {
        throw std::invalid_argument(std::string("shape mismatch in ") + what);
    }
}

Eigen::MatrixXd centered(const Eigen::MatrixXd& pts, Eigen::RowVectorXd& mean) {
    mean = pts.colwise().mean();
    return pts.rowwise() - mean;
}

double rms_norm(const Eigen::MatrixXd& rows) {
    return std::sqrt(rows.squaredNorm() / static_cast<double>(rows.rows()));
}

/// RMS mismatch between aligned and target rows, normalized by the RMS
/// radius of the centered target.
double normalized_residual(const Eigen::MatrixXd& aligned,
                           const Eigen::MatrixXd& target) {
    Eigen::RowVectorXd mean;
    const Eigen::MatrixXd tc = centered(target, mean);
    const double radius = rms_norm(tc);
    if (radius <= 0.0) {
        throw std::invalid_argument("degenerate target: all points identical");
    }
    return rms_norm(aligned - target) / radius;
}

}  // namespace

BisectorSide bisector_side(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& yprime, double tie_tolerance) {
    require_same_dim(x.size(), y.size(), "bisector_side");
    require_same_dim(x.size(), yprime.size(), "bisector_side");
    if (y == yprime) {
        throw std::invalid_argument("bisector undefined: y == y'");
    }
    const double dy = (x - y).norm();
    const double dyp = (x - yprime).norm();
    if (std::abs(dy - dyp) <= tie_tolerance) return BisectorSide::Equidistant;
    if (dy < dyp) return BisectorSide::CloserToY;
    if (dy > dyp) return BisectorSide::CloserToYPrime;
    return BisectorSide::Equidistant;  // exact tie at tolerance 0
}

Configuration apply_similarity(const SimilarityTransform& T, const Configuration& X) {
    require_same_dim(T.dim(), X.dim(), "apply_similarity");
    Eigen::MatrixXd out = T.scale() * (X.points() * T.orthogonal().transpose());
    out.rowwise() += T.translation().transpose();
    return Configuration(std::move(out));
}

SphericalConfiguration apply_gauge_individuals(const GaugePair& G,
                                               const SphericalConfiguration& X) {
    require_same_dim(G.dim(), X.dim(), "apply_gauge_individuals");
    Eigen::MatrixXd out(X.count(), X.dim());
    for (Eigen::Index i = 0; i < X.count(); ++i) {
        out.row(i) = G.apply_individual(X.points().row(i).transpose()).transpose();
    }
    return SphericalConfiguration(std::move(out));
}

Configuration apply_gauge_objects(const GaugePair& G, const Configuration& Y) {
    require_same_dim(G.dim(), Y.dim(), "apply_gauge_objects");
    Eigen::MatrixXd out = Y.points() * G.linear().transpose();
    out.rowwise() += G.translation().transpose();
    return Configuration(std::move(out));
}

double rms_radius(const Configuration& X) {
    Eigen::RowVectorXd mean;
    const Eigen::MatrixXd c = centered(X.points(), mean);
    return rms_norm(c);
}

AlignmentResult similarity_procrustes(const Configuration& source,
                                      const Configuration& target,
                                      bool allow_reflection) {
    require_same_shape(source, target, "similarity_procrustes");
    if (target.count() < 2) {
        throw std::invalid_argument("similarity_procrustes needs >= 2 points");
    }

    Eigen::RowVectorXd src_mean, tgt_mean;
    const Eigen::MatrixXd sc = centered(source.points(), src_mean);
    const Eigen::MatrixXd tc = centered(target.points(), tgt_mean);

    const double src_sq = sc.squaredNorm();
    if (src_sq <= 0.0) throw std::invalid_argument("degenerate source: all points identical");
    if (tc.squaredNorm() <= 0.0) {
        throw std::invalid_argument("degenerate target: all points identical");
    }

    // Umeyama: Q = U D V^T from the SVD of the cross-covariance, optimal
    // scale from the trace.
    const Eigen::MatrixXd cross = tc.transpose() * sc;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Index p = source.dim();
    Eigen::VectorXd d = Eigen::VectorXd::Ones(p);
    if (!allow_reflection) {
        const double det = (svd.matrixU() * svd.matrixV().transpose()).determinant();
        if (det < 0.0) d(p - 1) = -1.0;
    }
    const Eigen::MatrixXd Q = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    const double scale = (svd.singularValues().array() * d.array()).sum() / src_sq;
    if (!(scale > 0.0)) {
        throw std::invalid_argument("similarity_procrustes: non-positive optimal scale");
    }
    const Eigen::VectorXd t =
        tgt_mean.transpose() - scale * (Q * src_mean.transpose());

    SimilarityTransform T(scale, Q, t);
    const Configuration aligned = apply_similarity(T, source);
    AlignmentResult result{T, normalized_residual(aligned.points(), target.points()),
                           0.0, 0.0};
    return result;
}

AlignmentResult orthogonal_align(const SphericalConfiguration& source,
                                 const SphericalConfiguration& target) {
    require_same_shape(source.config(), target.config(), "orthogonal_align");
    const Eigen::MatrixXd cross = target.points().transpose() * source.points();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd Q = svd.matrixU() * svd.matrixV().transpose();
    const Eigen::MatrixXd aligned = source.points() * Q.transpose();
    // Unit-sphere targets are never fully degenerate, but a single repeated
    // point has zero centered radius; fall back to radius 1 in that case.
    Eigen::RowVectorXd mean;
    const Eigen::MatrixXd tc = centered(target.points(), mean);
    const double radius = std::max(rms_norm(tc), 1e-15);
    AlignmentResult result{Q, rms_norm(aligned - target.points()) / radius, 0.0, 0.0};
    return result;
}

AlignmentResult gauge_align_vector_model(const SphericalConfiguration& src_individuals,
                                         const Configuration& src_objects,
                                         const SphericalConfiguration& tgt_individuals,
                                         const Configuration& tgt_objects) {
    require_same_shape(src_objects, tgt_objects, "gauge_align_vector_model");
    require_same_shape(src_individuals.config(), tgt_individuals.config(),
                       "gauge_align_vector_model");
    require_same_dim(src_objects.dim(), src_individuals.dim(),
                     "gauge_align_vector_model");

    Eigen::RowVectorXd src_mean, tgt_mean;
    const Eigen::MatrixXd sc = centered(src_objects.points(), src_mean);
    const Eigen::MatrixXd tc = centered(tgt_objects.points(), tgt_mean);

    // L = (sum yt ys^T)(sum ys ys^T)^{-1}; needs the source objects to span
    // the space affinely.
    const Eigen::MatrixXd gram = sc.transpose() * sc;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("source objects are affinely degenerate");
    }
    const Eigen::MatrixXd cross = tc.transpose() * sc;
    const Eigen::MatrixXd L = cross * lu.inverse();
    const Eigen::VectorXd tau = tgt_mean.transpose() - L * src_mean.transpose();

    GaugePair G(L, tau);
    const Configuration mapped_objects = apply_gauge_objects(G, src_objects);
    const SphericalConfiguration mapped_individuals =
        apply_gauge_individuals(G, src_individuals);

    const double obj_res =
        normalized_residual(mapped_objects.points(), tgt_objects.points());
    Eigen::RowVectorXd imean;
    const Eigen::MatrixXd ic = centered(tgt_individuals.points(), imean);
    const double iradius = std::max(rms_norm(ic), 1e-15);
    const double ind_res =
        rms_norm(mapped_individuals.points() - tgt_individuals.points()) / iradius;

    AlignmentResult result{G, std::max(obj_res, ind_res), obj_res, ind_res};
    return result;
}

Eigen::MatrixXd random_rotation(Rng& rng, Eigen::Index dim) {
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd Q = qr.householderQ();
    // Fix the sign convention so Q is Haar-distributed with det +1.
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    }
    if (Q.determinant() < 0.0) Q.col(0) = -Q.col(0);
    return Q;
}

SimilarityTransform random_similarity(Rng& rng, Eigen::Index dim,
                                      double scale_range, bool allow_reflection) {
    Eigen::MatrixXd Q = random_rotation(rng, dim);
    if (allow_reflection && rng.uniform() < 0.5) Q.col(0) = -Q.col(0);
    const double scale = std::exp(rng.uniform(-std::log(scale_range), std::log(scale_range)));
    Eigen::VectorXd t(dim);
    for (Eigen::Index i = 0; i < dim; ++i) t(i) = rng.normal();
    return SimilarityTransform(scale, Q, t);
}

GaugePair random_gauge(Rng& rng, Eigen::Index dim, double max_condition) {
    // L = U diag(s) V^T with singular values log-uniform in a band whose
    // ratio is at most max_condition.
    const Eigen::MatrixXd U = random_rotation(rng, dim);
    const Eigen::MatrixXd V = random_rotation(rng, dim);
    const double hi = std::sqrt(max_condition);
    Eigen::VectorXd s(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        s(i) = std::exp(rng.uniform(-std::log(hi), std::log(hi)));
    }
    Eigen::VectorXd tau(dim);
    for (Eigen::Index i = 0; i < dim; ++i) tau(i) = rng.normal();
    return GaugePair(U * s.asDiagonal() * V.transpose(), tau);
}

}  // namespace ordembed
