/// @file  solvers.cpp
/// @brief Linear-feasibility external solvers and hinge-descent embedding
///        solvers with restarts and gauge fixing.

#include <ordembed/kernels.hpp>
#include <ordembed/rng.hpp>
#include <ordembed/solvers.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ordembed {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxBacktracks = 25;
constexpr int kPlateauPatience = 25;
constexpr double kDegenerateSpreadRatio = 1e-6;

std::vector<int> validate_rank_row(const std::vector<int>& row) {
    const int n = static_cast<int>(row.size());
    RankMatrix check(1, n, row);  // throws unless a permutation of 1..n
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return row[a] < row[b]; });
    return order;  // order[t] = object with rank t+1
}

double centered_rms_radius(const Eigen::MatrixXd& pts) {
    const Eigen::RowVectorXd mean = pts.colwise().mean();
    return std::sqrt((pts.rowwise() - mean).squaredNorm() /
                     static_cast<double>(pts.rows()));
}

Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

void normalize_rows(Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).norm();
}

/// Center to zero centroid and scale to unit RMS radius. Returns the scale
/// applied so callers can transform companion blocks consistently.
void center_unit_rms(Eigen::MatrixXd& m, Eigen::RowVectorXd* centroid_out = nullptr,
                     double* scale_out = nullptr) {
    const Eigen::RowVectorXd c = m.colwise().mean();
    m.rowwise() -= c;
    double rho = std::sqrt(m.squaredNorm() / static_cast<double>(m.rows()));
    if (rho <= 0.0) rho = 1.0;
    m /= rho;
    if (centroid_out) *centroid_out = c;
    if (scale_out) *scale_out = rho;
}

// ---------------------------------------------------------------------------
// External solvers: linear feasibility + margin maximization.
// ---------------------------------------------------------------------------

struct LinearConstraints {
    Eigen::MatrixXd normals;  ///< unit rows
    Eigen::VectorXd offsets;  ///< slack(x) = normals * x - offsets
};

/// Adjacent-pair halfspaces of a distance ranking. Satisfying the chain of
/// adjacent constraints satisfies every pairwise comparison.
LinearConstraints point_constraints(const Configuration& anchors,
                                    const std::vector<int>& order) {
    const Eigen::Index n = anchors.count();
    const Eigen::Index p = anchors.dim();
    LinearConstraints lc{Eigen::MatrixXd(n - 1, p), Eigen::VectorXd(n - 1)};
    for (Eigen::Index c = 0; c + 1 < n; ++c) {
        const Eigen::RowVectorXd ya = anchors.points().row(order[c]);
        const Eigen::RowVectorXd yb = anchors.points().row(order[c + 1]);
        const Eigen::RowVectorXd u = 2.0 * (ya - yb);
        const double norm = u.norm();
        if (norm == 0.0) {
            throw std::invalid_argument("anchors " + std::to_string(order[c]) + " and " +
                                        std::to_string(order[c + 1]) +
                                        " coincide; ranking cannot be strict");
        }
        lc.normals.row(c) = u / norm;
        lc.offsets(c) = (ya.squaredNorm() - yb.squaredNorm()) / norm;
    }
    return lc;
}

/// Homogeneous sign constraints of an inner-product ranking.
LinearConstraints vector_constraints(const Configuration& objects,
                                     const std::vector<int>& order) {
    const Eigen::Index n = objects.count();
    const Eigen::Index p = objects.dim();
    LinearConstraints lc{Eigen::MatrixXd(n - 1, p), Eigen::VectorXd::Zero(n - 1)};
    for (Eigen::Index c = 0; c + 1 < n; ++c) {
        const Eigen::RowVectorXd d =
            objects.points().row(order[c]) - objects.points().row(order[c + 1]);
        const double norm = d.norm();
        if (norm == 0.0) {
            throw std::invalid_argument("objects " + std::to_string(order[c]) + " and " +
                                        std::to_string(order[c + 1]) +
                                        " coincide; ranking cannot be strict");
        }
        lc.normals.row(c) = d / norm;
    }
    return lc;
}

struct SlackInfo {
    double min = std::numeric_limits<double>::infinity();
    Eigen::Index argmin = 0;
};

SlackInfo min_slack(const LinearConstraints& lc, const Eigen::VectorXd& x) {
    SlackInfo info;
    const Eigen::VectorXd s = lc.normals * x - lc.offsets;
    info.min = s.minCoeff(&info.argmin);
    return info;
}

/// Hill-climb the minimum slack along the active constraint normal; keeps
/// the iterate centered in the feasible cell. `project` restores any
/// feasibility manifold (unit sphere for the vector model).
template <typename ProjectFn>
void maximize_margin(const LinearConstraints& lc, Eigen::VectorXd& x, double step0,
                     ProjectFn project) {
    double best = min_slack(lc, x).min;
    double step = step0;
    for (int round = 0; round < 200 && step > 1e-13 * step0; ++round) {
        const SlackInfo info = min_slack(lc, x);
        Eigen::VectorXd cand = x + step * lc.normals.row(info.argmin).transpose();
        project(cand);
        const double cand_min = min_slack(lc, cand).min;
        if (cand_min > best) {
            x = cand;
            best = cand_min;
        } else {
            step *= 0.7;
        }
    }
}

SolveResult external_trivial(const Eigen::VectorXd& x) {
    SolveResult r{Configuration(Eigen::MatrixXd(x.transpose())), std::nullopt,
                  0, 0.0, 0, true, SolveStatus::Ok, {0.0}};
    return r;
}

SolveResult finish_external(Eigen::VectorXd x, const Configuration& anchors,
                            const std::vector<int>& row, TripleModel model,
                            double gap, int iterations,
                            std::vector<double> trace) {
    Configuration solution{Eigen::MatrixXd(x.transpose())};
    const RankMatrix R(1, static_cast<int>(row.size()), row);
    const TripleSet all = triples_from_ranks(R, model, std::nullopt, 0);
    long violations = 0;
    if (model == TripleModel::PointDistance) {
        violations = violation_count(all, solution, anchors);
    } else {
        violations = violation_count(all, SphericalConfiguration(solution.points()), anchors);
    }
    SolveResult r{std::move(solution), std::nullopt, violations, gap, iterations,
                  violations == 0,
                  violations == 0 ? SolveStatus::Ok : SolveStatus::Infeasible,
                  std::move(trace)};
    return r;
}

// ---------------------------------------------------------------------------
// Hinge-descent engine shared by the four embedding solvers.
// ---------------------------------------------------------------------------

/// One or two coordinate blocks being optimized (items, or individuals plus
/// objects).
struct Blocks {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;  // 0x0 when unused

    Blocks scaled_step(const Blocks& grad, double step) const {
        Blocks out{X - step * grad.X, Y.size() > 0 ? Eigen::MatrixXd(Y - step * grad.Y)
                                                   : Y};
        return out;
    }

    double grad_norm() const {
        return std::sqrt(X.squaredNorm() + (Y.size() > 0 ? Y.squaredNorm() : 0.0));
    }
};

struct RestartOutcome {
    Blocks blocks;
    double loss = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

/// Projected gradient descent with cosine-decayed normalized steps and
/// backtracking acceptance measured after projection, so the recorded loss
/// never increases within a restart.
template <typename EvalFn, typename GradFn, typename ProjectFn>
RestartOutcome run_descent(Blocks blocks, const SolverOptions& opts, EvalFn eval,
                           GradFn grad, ProjectFn project) {
    RestartOutcome out;
    project(blocks);
    double loss = eval(blocks);
    out.trace.push_back(loss);
    int plateau = 0;
    int t = 0;
    for (t = 1; t <= opts.max_iterations; ++t) {
        if (loss <= 0.0) {
            out.converged = true;
            break;
        }
        const Blocks g = grad(blocks);
        const double gnorm = g.grad_norm();
        if (gnorm == 0.0) {
            out.converged = true;  // flat spot: nothing further to descend
            break;
        }
        const double decay =
            0.5 * (1.0 + std::cos(kPi * static_cast<double>(t) /
                                  static_cast<double>(opts.max_iterations)));
        double step = opts.learning_rate * std::max(decay, 0.01) / gnorm;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt, step *= 0.5) {
            Blocks cand = blocks.scaled_step(g, step);
            project(cand);
            const double cand_loss = eval(cand);
            if (cand_loss <= loss) {
                const double drop = loss - cand_loss;
                blocks = std::move(cand);
                loss = cand_loss;
                out.trace.push_back(loss);
                accepted = true;
                if (drop <= opts.tolerance * std::max(loss, 1e-30)) {
                    ++plateau;
                } else {
                    plateau = 0;
                }
                break;
            }
        }
        if (!accepted || plateau >= kPlateauPatience) {
            out.converged = true;  // plateaued
            break;
        }
    }
    out.blocks = std::move(blocks);
    out.loss = loss;
    out.iterations = std::min(t, opts.max_iterations);
    return out;
}

/// Flat index pairs (preferred, other) over an m-by-n value matrix.
struct PairIndex {
    std::vector<std::int32_t> a;  // preferred
    std::vector<std::int32_t> b;  // other
    std::size_t size() const { return a.size(); }
};

PairIndex pairs_from_triples(const TripleSet& triples, int n) {
    PairIndex idx;
    idx.a.reserve(triples.size());
    idx.b.reserve(triples.size());
    for (const Triple& t : triples.triples()) {
        idx.a.push_back(static_cast<std::int32_t>(t.viewer) * n + t.preferred);
        idx.b.push_back(static_cast<std::int32_t>(t.viewer) * n + t.other);
    }
    return idx;
}

/// All ordered comparisons of a rank matrix, as flat pairs.
PairIndex pairs_from_ranks(const RankMatrix& R) {
    PairIndex idx;
    const int m = R.rows();
    const int n = R.cols();
    idx.a.reserve(static_cast<std::size_t>(m) * n * (n - 1) / 2);
    idx.b.reserve(idx.a.capacity());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const bool j_pref = R.rank(i, j) < R.rank(i, k);
                idx.a.push_back(static_cast<std::int32_t>(i) * n + (j_pref ? j : k));
                idx.b.push_back(static_cast<std::int32_t>(i) * n + (j_pref ? k : j));
            }
        }
    }
    return idx;
}

/// Squared distances between rows of X (viewers) and rows of Y (objects),
/// flat [i*n + k].
void fill_sqdist(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                 std::vector<double>& vals) {
    const int m = static_cast<int>(X.rows());
    const int n = static_cast<int>(Y.rows());
    const int p = static_cast<int>(X.cols());
    vals.resize(static_cast<std::size_t>(m) * n);
    Eigen::VectorXd xi(p);
    for (int i = 0; i < m; ++i) {
        xi = X.row(i);
        kernels::squared_distance_row(xi.data(), Y.data(), n, p,
                                      vals.data() + static_cast<std::size_t>(i) * n);
    }
}

void fill_dot(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
              std::vector<double>& vals) {
    const int m = static_cast<int>(X.rows());
    const int n = static_cast<int>(Y.rows());
    const int p = static_cast<int>(X.cols());
    vals.resize(static_cast<std::size_t>(m) * n);
    Eigen::VectorXd xi(p);
    for (int i = 0; i < m; ++i) {
        xi = X.row(i);
        kernels::dot_row(xi.data(), Y.data(), n, p,
                         vals.data() + static_cast<std::size_t>(i) * n);
    }
}

int restart_rank(const RestartOutcome& o, long violations, bool degenerate) {
    (void)o;
    return (degenerate ? 2 : 0) + (violations > 0 ? 1 : 0);
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Ok:
            return "ok";
        case SolveStatus::Infeasible:
            return "infeasible";
        case SolveStatus::NonConverged:
            return "non-converged";
        case SolveStatus::Degenerate:
            return "degenerate";
    }
    return "?";
}

SolveResult solve_external_point(const Configuration& anchors,
                                 const std::vector<int>& row,
                                 const SolverOptions& opts) {
    if (static_cast<Eigen::Index>(row.size()) != anchors.count()) {
        throw std::invalid_argument("rank row length must match anchor count");
    }
    const std::vector<int> order = validate_rank_row(row);
    const Eigen::Index p = anchors.dim();
    if (anchors.count() == 1) {
        return external_trivial(anchors.points().row(0).transpose());
    }
    const LinearConstraints lc = point_constraints(anchors, order);
    const Eigen::VectorXd centroid = anchors.points().colwise().mean().transpose();
    const double radius = std::max(centered_rms_radius(anchors.points()), 1e-12);

    Eigen::VectorXd best_x = centroid;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> best_trace;
    int iterations = 0;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Eigen::VectorXd x = centroid;
        if (r > 0) x += radius * gaussian_matrix(rng, p, 1);
        std::vector<double> trace;
        double gap_best = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_iterations; ++it) {
            ++iterations;
            const SlackInfo info = min_slack(lc, x);
            gap_best = std::min(gap_best, std::max(0.0, -info.min));
            trace.push_back(gap_best);
            if (info.min > 0.0) break;
            // Over-relaxed projection onto the most violated halfspace.
            x += 1.5 * (-info.min) * lc.normals.row(info.argmin).transpose();
        }
        const double gap = std::max(0.0, -min_slack(lc, x).min);
        if (gap == 0.0) {
            maximize_margin(lc, x, radius / 4.0, [](Eigen::VectorXd&) {});
            return finish_external(x, anchors, row, TripleModel::PointDistance, 0.0,
                                   iterations, std::move(trace));
        }
        if (gap < best_gap) {
            best_gap = gap;
            best_x = x;
            best_trace = std::move(trace);
        }
    }
    return finish_external(best_x, anchors, row, TripleModel::PointDistance, best_gap,
                           iterations, std::move(best_trace));
}

SolveResult solve_external_vector(const Configuration& objects,
                                  const std::vector<int>& row,
                                  const SolverOptions& opts) {
    if (static_cast<Eigen::Index>(row.size()) != objects.count()) {
        throw std::invalid_argument("rank row length must match object count");
    }
    if (objects.dim() < 2) {
        throw std::invalid_argument("vector model needs dimension >= 2");
    }
    const std::vector<int> order = validate_rank_row(row);
    const Eigen::Index p = objects.dim();
    if (objects.count() == 1) {
        Rng rng(opts.seed);
        Eigen::VectorXd x = gaussian_matrix(rng, p, 1);
        x /= x.norm();
        return external_trivial(x);
    }
    const LinearConstraints lc = vector_constraints(objects, order);
    const auto renorm = [](Eigen::VectorXd& v) { v /= v.norm(); };

    Eigen::VectorXd best_x = Eigen::VectorXd::Unit(p, 0);
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> best_trace;
    int iterations = 0;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Eigen::VectorXd x;
        if (r == 0) {
            x = lc.normals.colwise().sum().transpose();
            if (x.norm() == 0.0) x = Eigen::VectorXd::Unit(p, 0);
        } else {
            x = gaussian_matrix(rng, p, 1);
        }
        renorm(x);
        std::vector<double> trace;
        double gap_best = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_iterations; ++it) {
            ++iterations;
            const SlackInfo info = min_slack(lc, x);
            gap_best = std::min(gap_best, std::max(0.0, -info.min));
            trace.push_back(gap_best);
            if (info.min > 0.0) break;
            x += 1.5 * (-info.min) * lc.normals.row(info.argmin).transpose();
            renorm(x);
        }
        const double gap = std::max(0.0, -min_slack(lc, x).min);
        if (gap == 0.0) {
            maximize_margin(lc, x, 0.5, renorm);
            return finish_external(x, objects, row, TripleModel::VectorInnerProduct,
                                   0.0, iterations, std::move(trace));
        }
        if (gap < best_gap) {
            best_gap = gap;
            best_x = x;
            best_trace = std::move(trace);
        }
    }
    return finish_external(best_x, objects, row, TripleModel::VectorInnerProduct,
                           best_gap, iterations, std::move(best_trace));
}

SolveResult solve_ordinal_mds(const TripleSet& triples, int count, int dim,
                              const SolverOptions& opts) {
    if (triples.model() != TripleModel::SelfDistance) {
        throw std::invalid_argument("ordinal MDS expects self-distance triples");
    }
    if (count < 2 || dim < 1) throw std::invalid_argument("need count >= 2, dim >= 1");
    const PairIndex idx = pairs_from_triples(triples, count);
    const double inv_count = 1.0 / std::max<std::size_t>(idx.size(), 1);

    std::vector<double> vals;
    const auto eval = [&](const Blocks& b) {
        fill_sqdist(b.X, b.X, vals);
        return kernels::hinge_stats(vals.data(), idx.a.data(), idx.b.data(),
                                    idx.size(), opts.margin)
                   .loss *
               inv_count;
    };
    const auto grad = [&](const Blocks& b) {
        fill_sqdist(b.X, b.X, vals);
        Blocks g{Eigen::MatrixXd::Zero(b.X.rows(), b.X.cols()), Eigen::MatrixXd()};
        for (std::size_t t = 0; t < idx.size(); ++t) {
            if (opts.margin + vals[idx.a[t]] - vals[idx.b[t]] <= 0.0) continue;
            const int i = idx.a[t] / count;
            const int j = idx.a[t] % count;
            const int k = idx.b[t] % count;
            const double w = 2.0 * inv_count;
            g.X.row(i) += w * (b.X.row(k) - b.X.row(j));
            g.X.row(j) += w * (b.X.row(j) - b.X.row(i));
            g.X.row(k) -= w * (b.X.row(k) - b.X.row(i));
        }
        return g;
    };
    const auto no_project = [](Blocks&) {};

    SolveResult best{Configuration(Eigen::MatrixXd::Zero(count, dim)), std::nullopt,
                     std::numeric_limits<long>::max(), 0.0, 0, false,
                     SolveStatus::NonConverged, {}};
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Blocks init{gaussian_matrix(rng, count, dim), Eigen::MatrixXd()};
        center_unit_rms(init.X);
        RestartOutcome out = run_descent(init, opts, eval, grad, no_project);
        // Restart gauge: zero centroid, unit RMS radius.
        center_unit_rms(out.blocks.X);
        Configuration solution(out.blocks.X);
        const long violations = violation_count(triples, solution);
        if (violations < best.violations ||
            (violations == best.violations && out.loss < best.loss)) {
            best = SolveResult{std::move(solution), std::nullopt, violations, out.loss,
                               out.iterations, out.converged,
                               violations == 0 ? SolveStatus::Ok
                                               : SolveStatus::NonConverged,
                               std::move(out.trace)};
        }
        if (best.violations == 0) break;
    }
    return best;
}

SolveResult solve_internal_point(const RankMatrix& ranks, int dim,
                                 const SolverOptions& opts) {
    const int m = ranks.rows();
    const int n = ranks.cols();
    if (m < 2 || n < 2) throw std::invalid_argument("need m, n >= 2");
    if (dim < 1) throw std::invalid_argument("need dim >= 1");
    const PairIndex idx = pairs_from_ranks(ranks);
    const double inv_count = 1.0 / std::max<std::size_t>(idx.size(), 1);
    const bool repel = opts.repulsion_weight > 0.0 && opts.repulsion_radius > 0.0;

    std::vector<double> vals;
    const auto repulsion_loss = [&](const Blocks& b) {
        if (!repel) return 0.0;
        double pen = 0.0;
        for (int i = 0; i < m; ++i) {
            double dmin = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; ++k) {
                dmin = std::min(dmin, (b.X.row(i) - b.Y.row(k)).norm());
            }
            const double gap = opts.repulsion_radius - dmin;
            if (gap > 0.0) pen += opts.repulsion_weight * gap * gap;
        }
        return pen;
    };
    const auto eval = [&](const Blocks& b) {
        fill_sqdist(b.X, b.Y, vals);
        return kernels::hinge_stats(vals.data(), idx.a.data(), idx.b.data(),
                                    idx.size(), opts.margin)
                       .loss *
                   inv_count +
               repulsion_loss(b);
    };
    const auto grad = [&](const Blocks& b) {
        fill_sqdist(b.X, b.Y, vals);
        Blocks g{Eigen::MatrixXd::Zero(m, dim), Eigen::MatrixXd::Zero(n, dim)};
        for (std::size_t t = 0; t < idx.size(); ++t) {
            if (opts.margin + vals[idx.a[t]] - vals[idx.b[t]] <= 0.0) continue;
            const int i = idx.a[t] / n;
            const int k = idx.a[t] % n;
            const int l = idx.b[t] % n;
            const double w = 2.0 * inv_count;
            g.X.row(i) += w * (b.Y.row(l) - b.Y.row(k));
            g.Y.row(k) += w * (b.Y.row(k) - b.X.row(i));
            g.Y.row(l) -= w * (b.Y.row(l) - b.X.row(i));
        }
        if (repel) {
            for (int i = 0; i < m; ++i) {
                double dmin = std::numeric_limits<double>::infinity();
                int kmin = 0;
                for (int k = 0; k < n; ++k) {
                    const double d = (b.X.row(i) - b.Y.row(k)).norm();
                    if (d < dmin) {
                        dmin = d;
                        kmin = k;
                    }
                }
                const double gap = opts.repulsion_radius - dmin;
                if (gap > 0.0 && dmin > 1e-12) {
                    const Eigen::RowVectorXd dir = (b.X.row(i) - b.Y.row(kmin)) / dmin;
                    g.X.row(i) -= 2.0 * opts.repulsion_weight * gap * dir;
                    g.Y.row(kmin) += 2.0 * opts.repulsion_weight * gap * dir;
                }
            }
        }
        return g;
    };
    // Object gauge each iteration; individuals follow the same similarity so
    // the rank data of the iterate is unchanged.
    const auto project = [&](Blocks& b) {
        Eigen::RowVectorXd c;
        double rho = 1.0;
        center_unit_rms(b.Y, &c, &rho);
        b.X.rowwise() -= c;
        b.X /= rho;
    };

    SolveResult best{Configuration(Eigen::MatrixXd::Zero(m, dim)), std::nullopt,
                     std::numeric_limits<long>::max(), 0.0, 0, false,
                     SolveStatus::NonConverged, {}};
    int best_score = std::numeric_limits<int>::max();
    const RankMatrix& R = ranks;
    const TripleSet all_triples = triples_from_ranks(R, TripleModel::PointDistance,
                                                     std::nullopt, 0);
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Blocks init{gaussian_matrix(rng, m, dim), gaussian_matrix(rng, n, dim)};
        RestartOutcome out = run_descent(init, opts, eval, grad, project);
        Configuration individuals(out.blocks.X);
        Configuration objects(out.blocks.Y);
        const long violations = violation_count(all_triples, individuals, objects);
        const bool degenerate = centered_rms_radius(out.blocks.X) <
                                kDegenerateSpreadRatio * centered_rms_radius(out.blocks.Y);
        const int score = restart_rank(out, violations, degenerate);
        if (score < best_score ||
            (score == best_score &&
             (violations < best.violations ||
              (violations == best.violations && out.loss < best.loss)))) {
            best_score = score;
            best = SolveResult{std::move(individuals), std::move(objects), violations,
                               out.loss, out.iterations, out.converged,
                               degenerate ? SolveStatus::Degenerate
                               : violations == 0 ? SolveStatus::Ok
                                                 : SolveStatus::NonConverged,
                               std::move(out.trace)};
        }
        if (best.status == SolveStatus::Ok) break;
    }
    return best;
}

SolveResult solve_internal_vector(const RankMatrix& ranks, int dim,
                                  const SolverOptions& opts) {
    const int m = ranks.rows();
    const int n = ranks.cols();
    if (m < 1 || n < 2) throw std::invalid_argument("need m >= 1, n >= 2");
    if (dim < 2) throw std::invalid_argument("vector model needs dimension >= 2");
    const PairIndex idx = pairs_from_ranks(ranks);
    const double inv_count = 1.0 / std::max<std::size_t>(idx.size(), 1);

    std::vector<double> vals;
    const auto eval = [&](const Blocks& b) {
        fill_dot(b.X, b.Y, vals);
        // Want <x_i, y_pref> > <x_i, y_other>: penalize margin + other - pref.
        return kernels::hinge_stats(vals.data(), idx.b.data(), idx.a.data(),
                                    idx.size(), opts.margin)
                   .loss *
               inv_count;
    };
    const auto grad = [&](const Blocks& b) {
        fill_dot(b.X, b.Y, vals);
        Blocks g{Eigen::MatrixXd::Zero(m, dim), Eigen::MatrixXd::Zero(n, dim)};
        for (std::size_t t = 0; t < idx.size(); ++t) {
            if (opts.margin + vals[idx.b[t]] - vals[idx.a[t]] <= 0.0) continue;
            const int i = idx.a[t] / n;
            const int k = idx.a[t] % n;  // preferred
            const int l = idx.b[t] % n;
            g.X.row(i) += inv_count * (b.Y.row(l) - b.Y.row(k));
            g.Y.row(l) += inv_count * b.X.row(i);
            g.Y.row(k) -= inv_count * b.X.row(i);
        }
        return g;
    };
    // Individuals stay on the sphere; objects are centered (a gauge motion)
    // and scaled to unit RMS radius to fix the free object scale.
    const auto project = [&](Blocks& b) {
        normalize_rows(b.X);
        center_unit_rms(b.Y);
    };

    SolveResult best{Configuration(Eigen::MatrixXd::Identity(m, dim)), std::nullopt,
                     std::numeric_limits<long>::max(), 0.0, 0, false,
                     SolveStatus::NonConverged, {}};
    int best_score = std::numeric_limits<int>::max();
    const TripleSet all_triples = triples_from_ranks(ranks, TripleModel::VectorInnerProduct,
                                                     std::nullopt, 0);
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Blocks init{gaussian_matrix(rng, m, dim), gaussian_matrix(rng, n, dim)};
        RestartOutcome out = run_descent(init, opts, eval, grad, project);
        SphericalConfiguration individuals(out.blocks.X);
        Configuration objects(out.blocks.Y);
        const long violations = violation_count(all_triples, individuals, objects);
        const bool degenerate = centered_rms_radius(out.blocks.X) <
                                kDegenerateSpreadRatio * centered_rms_radius(out.blocks.Y);
        const int score = restart_rank(out, violations, degenerate);
        if (score < best_score ||
            (score == best_score &&
             (violations < best.violations ||
              (violations == best.violations && out.loss < best.loss)))) {
            best_score = score;
            best = SolveResult{individuals.config(), std::move(objects), violations,
                               out.loss, out.iterations, out.converged,
                               degenerate ? SolveStatus::Degenerate
                               : violations == 0 ? SolveStatus::Ok
                                                 : SolveStatus::NonConverged,
                               std::move(out.trace)};
        }
        if (best.status == SolveStatus::Ok) break;
    }
    return best;
}

SolveResult solve_sphere_mds(const TripleSet& triples, int count, int dim,
                             const SolverOptions& opts) {
    if (triples.model() != TripleModel::SelfDistance) {
        throw std::invalid_argument("sphere MDS expects self-distance triples");
    }
    if (count < 2 || dim < 2) throw std::invalid_argument("need count >= 2, dim >= 2");
    const PairIndex idx = pairs_from_triples(triples, count);
    const double inv_count = 1.0 / std::max<std::size_t>(idx.size(), 1);

    std::vector<double> vals;
    const auto eval = [&](const Blocks& b) {
        fill_dot(b.X, b.X, vals);
        // Preferred means closer, i.e. larger inner product on the sphere.
        return kernels::hinge_stats(vals.data(), idx.b.data(), idx.a.data(),
                                    idx.size(), opts.margin)
                   .loss *
               inv_count;
    };
    const auto grad = [&](const Blocks& b) {
        fill_dot(b.X, b.X, vals);
        Blocks g{Eigen::MatrixXd::Zero(count, dim), Eigen::MatrixXd()};
        for (std::size_t t = 0; t < idx.size(); ++t) {
            if (opts.margin + vals[idx.b[t]] - vals[idx.a[t]] <= 0.0) continue;
            const int i = idx.a[t] / count;
            const int j = idx.a[t] % count;  // preferred
            const int k = idx.b[t] % count;
            g.X.row(i) += inv_count * (b.X.row(k) - b.X.row(j));
            g.X.row(j) -= inv_count * b.X.row(i);
            g.X.row(k) += inv_count * b.X.row(i);
        }
        return g;
    };
    const auto project = [](Blocks& b) { normalize_rows(b.X); };

    SolveResult best{Configuration(Eigen::MatrixXd::Identity(count, dim)), std::nullopt,
                     std::numeric_limits<long>::max(), 0.0, 0, false,
                     SolveStatus::NonConverged, {}};
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(opts.seed).derive(static_cast<std::uint64_t>(r));
        Blocks init{gaussian_matrix(rng, count, dim), Eigen::MatrixXd()};
        RestartOutcome out = run_descent(init, opts, eval, grad, project);
        Configuration solution(out.blocks.X);
        const long violations = violation_count(triples, solution);
        if (violations < best.violations ||
            (violations == best.violations && out.loss < best.loss)) {
            best = SolveResult{std::move(solution), std::nullopt, violations, out.loss,
                               out.iterations, out.converged,
                               violations == 0 ? SolveStatus::Ok
                                               : SolveStatus::NonConverged,
                               std::move(out.trace)};
        }
        if (best.violations == 0) break;
    }
    return best;
}

}  // namespace ordembed
