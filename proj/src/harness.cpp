/// @file  harness.cpp
/// @brief Identifiability experiment sweeps and the gauge invariance suite.

#include <ordembed/harness.hpp>
#include <ordembed/rankings.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace ordembed {

namespace {

constexpr int kTieRetries = 16;
constexpr double kTieJitter = 1e-9;

int thread_cap() {
    const char* env = std::getenv("ORDINAL_EMBED_THREADS");
    int cap = 0;
    if (env != nullptr) cap = std::atoi(env);
    if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, cap);
}

Eigen::MatrixXd jittered(const Eigen::MatrixXd& pts, Rng& rng, int attempt) {
    if (attempt == 0) return pts;
    Eigen::MatrixXd out = pts;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) += kTieJitter * rng.normal();
        }
    }
    return out;
}

SphericalConfiguration normalize_to_sphere(const Eigen::MatrixXd& pts) {
    Eigen::MatrixXd out = pts;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) /= out.row(i).norm();
    return SphericalConfiguration(std::move(out));
}

Eigen::MatrixXd offset_rows(Eigen::MatrixXd pts, const std::vector<double>& offset) {
    if (offset.empty()) return pts;
    if (static_cast<Eigen::Index>(offset.size()) != pts.cols()) {
        throw std::invalid_argument("object_offset dimension mismatch");
    }
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts.col(j).array() += offset[j];
    return pts;
}

/// One experiment trial; throws on unresolved ties or solver preconditions.
TrialRecord run_trial(const ExperimentSpec& spec, int size_index, int trial) {
    const ExperimentSize size = spec.sizes[size_index];
    TrialRecord rec;
    rec.size_index = size_index;
    rec.trial = trial;

    Rng trial_rng = Rng(derive_seed(spec.seed, static_cast<std::uint64_t>(size_index)))
                        .derive(static_cast<std::uint64_t>(trial));
    SolverOptions opts = spec.solver_opts;
    opts.seed = trial_rng.derive(0xA11CE).seed();

    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 0;; ++attempt) {
        try {
            Rng rng = trial_rng.derive(static_cast<std::uint64_t>(attempt));
            switch (spec.variant) {
                case Variant::ExternalPoint: {
                    const Configuration anchors(jittered(
                        sample_design(spec.design, size.objects, spec.dim, rng).points(),
                        rng, attempt));
                    const Configuration truth(
                        sample_design(spec.design, 1, spec.dim, rng).points());
                    const RankMatrix R = row_ranks_point(truth, anchors);
                    const TripleSet triples =
                        triples_from_ranks(R, TripleModel::PointDistance, std::nullopt, 0);
                    rec.comparisons = triples.size();
                    const Configuration solution =
                        spec.bypass_solver
                            ? truth
                            : [&] {
                                  SolveResult res =
                                      solve_external_point(anchors, R.row(0), opts);
                                  rec.violations = res.violations;
                                  return res.solution;
                              }();
                    if (spec.bypass_solver) {
                        rec.violations = violation_count(triples, solution, anchors);
                    }
                    rec.recovery_error =
                        (solution.points().row(0) - truth.points().row(0)).norm();
                    rec.aligned_residual = rec.recovery_error;
                    break;
                }
                case Variant::ExternalVector: {
                    const Configuration objects(jittered(
                        sample_design(spec.design, size.objects, spec.dim, rng).points(),
                        rng, attempt));
                    const SphericalConfiguration truth = normalize_to_sphere(
                        sample_design(Design::UniformSphere, 1, spec.dim, rng).points());
                    const RankMatrix R = row_ranks_vector(truth, objects);
                    const TripleSet triples = triples_from_ranks(
                        R, TripleModel::VectorInnerProduct, std::nullopt, 0);
                    rec.comparisons = triples.size();
                    Eigen::RowVectorXd xhat;
                    if (spec.bypass_solver) {
                        xhat = truth.points().row(0);
                        rec.violations = violation_count(triples, truth, objects);
                    } else {
                        SolveResult res = solve_external_vector(objects, R.row(0), opts);
                        rec.violations = res.violations;
                        xhat = res.solution.points().row(0);
                    }
                    const double c = std::clamp(
                        xhat.dot(truth.points().row(0)), -1.0, 1.0);
                    rec.recovery_error = std::acos(c);
                    rec.aligned_residual = rec.recovery_error;
                    break;
                }
                case Variant::Mds: {
                    const Configuration truth(jittered(
                        sample_design(spec.design, size.objects, spec.dim, rng).points(),
                        rng, attempt));
                    const RankMatrix R = mds_row_ranks(truth);
                    const TripleSet triples =
                        triples_from_ranks(R, TripleModel::SelfDistance, spec.triple_sample,
                                           trial_rng.derive(0x7121).seed());
                    rec.comparisons = triples.size();
                    const Configuration solution =
                        spec.bypass_solver
                            ? truth
                            : [&] {
                                  SolveResult res = solve_ordinal_mds(
                                      triples, size.objects, spec.dim, opts);
                                  rec.violations = res.violations;
                                  return res.solution;
                              }();
                    if (spec.bypass_solver) {
                        rec.violations = violation_count(triples, solution);
                    }
                    rec.aligned_residual =
                        similarity_procrustes(solution, truth).residual;
                    rec.recovery_error = rec.aligned_residual;
                    break;
                }
                case Variant::InternalPoint: {
                    const Configuration individuals(jittered(
                        sample_design(spec.design, size.viewers, spec.dim, rng).points(),
                        rng, attempt));
                    const Configuration objects(offset_rows(
                        jittered(sample_design(spec.design, size.objects, spec.dim, rng)
                                     .points(),
                                 rng, attempt),
                        spec.object_offset));
                    const RankMatrix R = row_ranks_point(individuals, objects);
                    const TripleSet triples =
                        triples_from_ranks(R, TripleModel::PointDistance, std::nullopt, 0);
                    rec.comparisons = triples.size();
                    Configuration sol_x = individuals;
                    Configuration sol_y = objects;
                    if (!spec.bypass_solver) {
                        SolveResult res = solve_internal_point(R, spec.dim, opts);
                        rec.violations = res.violations;
                        rec.degenerate = res.status == SolveStatus::Degenerate;
                        sol_x = res.solution;
                        sol_y = *res.objects;
                    } else {
                        rec.violations = violation_count(triples, sol_x, sol_y);
                    }
                    // One similarity must map both blocks; align the
                    // concatenation.
                    Eigen::MatrixXd src(sol_x.count() + sol_y.count(), spec.dim);
                    src << sol_x.points(), sol_y.points();
                    Eigen::MatrixXd tgt(individuals.count() + objects.count(), spec.dim);
                    tgt << individuals.points(), objects.points();
                    rec.aligned_residual =
                        similarity_procrustes(Configuration(src), Configuration(tgt))
                            .residual;
                    rec.recovery_error = rec.aligned_residual;
                    break;
                }
                case Variant::InternalVector: {
                    // Theorem hypotheses: at least p+1 individuals in general
                    // position; unit-sphere sampling gives that almost surely.
                    if (size.viewers < spec.dim + 1) {
                        throw std::invalid_argument(
                            "internal-vector experiment needs m >= dim + 1");
                    }
                    const SphericalConfiguration individuals = normalize_to_sphere(jittered(
                        sample_design(Design::UniformSphere, size.viewers, spec.dim, rng)
                            .points(),
                        rng, attempt));
                    const Configuration objects(offset_rows(
                        jittered(sample_design(spec.design, size.objects, spec.dim, rng)
                                     .points(),
                                 rng, attempt),
                        spec.object_offset));
                    const RankMatrix R = row_ranks_vector(individuals, objects);
                    const TripleSet triples = triples_from_ranks(
                        R, TripleModel::VectorInnerProduct, std::nullopt, 0);
                    rec.comparisons = triples.size();
                    SphericalConfiguration sol_x = individuals;
                    Configuration sol_y = objects;
                    if (!spec.bypass_solver) {
                        SolveResult res = solve_internal_vector(R, spec.dim, opts);
                        rec.violations = res.violations;
                        rec.degenerate = res.status == SolveStatus::Degenerate;
                        sol_x = SphericalConfiguration(res.solution.points());
                        sol_y = *res.objects;
                    } else {
                        rec.violations = violation_count(triples, sol_x, sol_y);
                    }
                    rec.aligned_residual =
                        gauge_align_vector_model(sol_x, sol_y, individuals, objects)
                            .residual;
                    rec.recovery_error = rec.aligned_residual;
                    break;
                }
                case Variant::SphereMds: {
                    const SphericalConfiguration truth = normalize_to_sphere(jittered(
                        sample_design(Design::UniformSphere, size.objects, spec.dim, rng)
                            .points(),
                        rng, attempt));
                    const RankMatrix R = mds_row_ranks(truth.config());
                    const TripleSet triples =
                        triples_from_ranks(R, TripleModel::SelfDistance, spec.triple_sample,
                                           trial_rng.derive(0x7121).seed());
                    rec.comparisons = triples.size();
                    SphericalConfiguration solution = truth;
                    if (!spec.bypass_solver) {
                        SolveResult res =
                            solve_sphere_mds(triples, size.objects, spec.dim, opts);
                        rec.violations = res.violations;
                        solution = SphericalConfiguration(res.solution.points());
                    } else {
                        rec.violations = violation_count(triples, solution.config());
                    }
                    rec.aligned_residual = orthogonal_align(solution, truth).residual;
                    rec.recovery_error = rec.aligned_residual;
                    break;
                }
            }
            break;
        } catch (const TieError&) {
            if (attempt + 1 >= kTieRetries) throw;
        }
    }
    rec.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace

const char* to_string(Design d) {
    switch (d) {
        case Design::UniformBall:
            return "uniform-ball";
        case Design::UniformCube:
            return "uniform-cube";
        case Design::UniformSphere:
            return "uniform-sphere";
        case Design::Grid:
            return "grid";
    }
    return "?";
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::ExternalPoint:
            return "external-point";
        case Variant::ExternalVector:
            return "external-vector";
        case Variant::Mds:
            return "mds";
        case Variant::InternalPoint:
            return "internal-point";
        case Variant::InternalVector:
            return "internal-vector";
        case Variant::SphereMds:
            return "sphere-mds";
    }
    return "?";
}

Design design_from_string(const std::string& s) {
    if (s == "uniform-ball") return Design::UniformBall;
    if (s == "uniform-cube") return Design::UniformCube;
    if (s == "uniform-sphere") return Design::UniformSphere;
    if (s == "grid") return Design::Grid;
    throw std::invalid_argument("unknown design: " + s);
}

Variant variant_from_string(const std::string& s) {
    if (s == "external-point") return Variant::ExternalPoint;
    if (s == "external-vector") return Variant::ExternalVector;
    if (s == "mds") return Variant::Mds;
    if (s == "internal-point") return Variant::InternalPoint;
    if (s == "internal-vector") return Variant::InternalVector;
    if (s == "sphere-mds") return Variant::SphereMds;
    throw std::invalid_argument("unknown variant: " + s);
}

Configuration sample_design(Design d, int count, int dim, Rng& rng) {
    if (count < 1 || dim < 1) throw std::invalid_argument("need count, dim >= 1");
    Eigen::MatrixXd pts(count, dim);
    switch (d) {
        case Design::UniformBall: {
            for (int i = 0; i < count; ++i) {
                Eigen::VectorXd g(dim);
                for (int j = 0; j < dim; ++j) g(j) = rng.normal();
                g /= g.norm();
                const double r = std::pow(rng.uniform(), 1.0 / dim);
                pts.row(i) = (r * g).transpose();
            }
            break;
        }
        case Design::UniformCube: {
            for (int i = 0; i < count; ++i) {
                for (int j = 0; j < dim; ++j) pts(i, j) = rng.uniform(-1.0, 1.0);
            }
            break;
        }
        case Design::UniformSphere: {
            for (int i = 0; i < count; ++i) {
                Eigen::VectorXd g(dim);
                for (int j = 0; j < dim; ++j) g(j) = rng.normal();
                pts.row(i) = (g / g.norm()).transpose();
            }
            break;
        }
        case Design::Grid: {
            const int per_axis = std::max(
                2, static_cast<int>(std::ceil(std::pow(count, 1.0 / dim))));
            for (int i = 0; i < count; ++i) {
                int rem = i;
                for (int j = 0; j < dim; ++j) {
                    const int cell = rem % per_axis;
                    rem /= per_axis;
                    pts(i, j) = per_axis == 1
                                    ? 0.0
                                    : -1.0 + 2.0 * cell / (per_axis - 1.0);
                }
            }
            break;
        }
    }
    return Configuration(std::move(pts));
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ExperimentReport run_identifiability_experiment(const ExperimentSpec& spec) {
    if (spec.sizes.empty()) throw std::invalid_argument("experiment needs >= 1 size");
    for (std::size_t s = 1; s < spec.sizes.size(); ++s) {
        if (spec.sizes[s].objects <= spec.sizes[s - 1].objects) {
            throw std::invalid_argument("sizes must be strictly increasing");
        }
    }
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");

    ExperimentReport report;
    report.spec = spec;
    const std::size_t total = spec.sizes.size() * static_cast<std::size_t>(spec.trials);
    report.trials.resize(total);

    const int workers = std::min<int>(thread_cap(), static_cast<int>(total));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            const int size_index = static_cast<int>(idx / spec.trials);
            const int trial = static_cast<int>(idx % spec.trials);
            TrialRecord rec;
            try {
                rec = run_trial(spec, size_index, trial);
            } catch (const std::exception& e) {
                rec.size_index = size_index;
                rec.trial = trial;
                rec.failed = true;
                rec.error = e.what();
            }
            report.trials[idx] = std::move(rec);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
        SizeSummary sum;
        sum.size = spec.sizes[s];
        std::vector<double> residuals, recoveries;
        int zero = 0, ok = 0, failed = 0;
        double viol_frac = 0.0;
        for (int t = 0; t < spec.trials; ++t) {
            const TrialRecord& rec = report.trials[s * spec.trials + t];
            if (rec.failed) {
                ++failed;
                continue;
            }
            ++ok;
            residuals.push_back(rec.aligned_residual);
            recoveries.push_back(rec.recovery_error);
            if (rec.violations == 0) ++zero;
            if (rec.comparisons > 0) {
                viol_frac += static_cast<double>(rec.violations) /
                             static_cast<double>(rec.comparisons);
            }
        }
        sum.failed_trials = failed;
        if (ok > 0) {
            sum.median_residual = quantile(residuals, 0.5);
            sum.iqr_residual = quantile(residuals, 0.75) - quantile(residuals, 0.25);
            sum.median_recovery = quantile(recoveries, 0.5);
            sum.iqr_recovery = quantile(recoveries, 0.75) - quantile(recoveries, 0.25);
            sum.zero_violation_fraction = static_cast<double>(zero) / ok;
            sum.mean_violation_fraction = viol_frac / ok;
        }
        report.summaries.push_back(sum);
    }
    return report;
}

GaugeSuiteReport gauge_invariance_suite(Variant variant, int trials,
                                        std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    GaugeSuiteReport report;
    report.trials = trials;
    const int dim = 2;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng(seed).derive(static_cast<std::uint64_t>(t));
        bool pass = false;
        try {
            switch (variant) {
                case Variant::ExternalPoint:
                case Variant::InternalPoint: {
                    const Configuration viewers = sample_design(Design::UniformBall, 5, dim, rng);
                    const Configuration objects = sample_design(Design::UniformBall, 10, dim, rng);
                    const SimilarityTransform T = random_similarity(rng, dim);
                    pass = rank_data_equal_point(viewers, objects,
                                                 apply_similarity(T, viewers),
                                                 apply_similarity(T, objects));
                    break;
                }
                case Variant::Mds: {
                    const Configuration items = sample_design(Design::UniformBall, 12, dim, rng);
                    const SimilarityTransform T = random_similarity(rng, dim);
                    pass = rank_data_equal_self(items, apply_similarity(T, items));
                    break;
                }
                case Variant::ExternalVector:
                case Variant::InternalVector: {
                    const SphericalConfiguration viewers = normalize_to_sphere(
                        sample_design(Design::UniformSphere, 5, dim, rng).points());
                    const Configuration objects = sample_design(Design::UniformBall, 10, dim, rng);
                    const GaugePair G = random_gauge(rng, dim, 10.0);
                    pass = rank_data_equal_vector(viewers, objects,
                                                  apply_gauge_individuals(G, viewers),
                                                  apply_gauge_objects(G, objects));
                    break;
                }
                case Variant::SphereMds: {
                    const SphericalConfiguration items = normalize_to_sphere(
                        sample_design(Design::UniformSphere, 10, dim, rng).points());
                    Eigen::MatrixXd Q = random_rotation(rng, dim);
                    if (rng.uniform() < 0.5) Q.col(0) = -Q.col(0);
                    const SphericalConfiguration mapped(items.points() * Q.transpose());
                    pass = rank_data_equal_self(items.config(), mapped.config());
                    break;
                }
            }
        } catch (const std::exception&) {
            pass = false;
        }
        if (pass) {
            ++report.passes;
        } else {
            ++report.failures;
        }
    }
    return report;
}

}  // namespace ordembed
