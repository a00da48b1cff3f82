/// @file  ordembed_main.cpp
/// @brief Command-line tool: generate, rank, solve, experiment,
///        counterexample, align.

#include <ordembed/harness.hpp>
#include <ordembed/io.hpp>
#include <ordembed/kernels.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using ordembed::io::json;
namespace fs = std::filesystem;

struct GlobalArgs {
    std::uint64_t seed = 0;
    std::string output;
    bool quiet = false;
    std::string kernel = "auto";
};

void apply_kernel_choice(const std::string& kernel) {
    if (kernel == "auto") return;
    if (kernel == "scalar") {
        ordembed::kernels::select(ordembed::kernels::Backend::Scalar);
    } else if (kernel == "avx2") {
        ordembed::kernels::select(ordembed::kernels::Backend::Avx2);
    } else {
        throw CLI::ValidationError("--kernel must be auto, scalar or avx2");
    }
}

void say(const GlobalArgs& g, const std::string& msg) {
    if (!g.quiet) std::cout << msg << "\n";
}

bool has_extension(const std::string& path, const char* ext) {
    return fs::path(path).extension() == ext;
}

int run_generate(const GlobalArgs& g, const std::string& design_name, int dim,
                 int count, const std::string& ranks_out, const std::string& triples_out,
                 std::optional<std::size_t> sample) {
    if (g.output.empty()) throw CLI::ValidationError("generate requires --output");
    const ordembed::Design design = ordembed::design_from_string(design_name);
    ordembed::Rng rng = ordembed::Rng(g.seed).derive(0);
    const ordembed::Configuration cfg = ordembed::sample_design(design, count, dim, rng);
    if (has_extension(g.output, ".json")) {
        json j;
        j["manifest"] = ordembed::io::make_manifest("generate", {}, g.seed);
        j.update(ordembed::io::configuration_to_json(cfg));
        ordembed::io::write_text_file(g.output, j.dump(2) + "\n");
    } else {
        ordembed::io::write_configuration_csv(cfg, g.output);
    }
    say(g, "wrote " + g.output);
    if (!ranks_out.empty() || !triples_out.empty()) {
        const ordembed::RankMatrix R = ordembed::mds_row_ranks(cfg);
        if (!ranks_out.empty()) {
            ordembed::io::write_rank_matrix_csv(R, ranks_out);
            say(g, "wrote " + ranks_out);
        }
        if (!triples_out.empty()) {
            const ordembed::TripleSet T = ordembed::triples_from_ranks(
                R, ordembed::TripleModel::SelfDistance, sample,
                ordembed::derive_seed(g.seed, 1));
            ordembed::io::write_triples_csv(T, triples_out);
            say(g, "wrote " + triples_out);
        }
    }
    return 0;
}

int run_rank(const GlobalArgs& g, const std::string& model, const std::string& viewers_path,
             const std::string& objects_path, const std::string& items_path,
             const std::string& triples_out, std::optional<std::size_t> sample) {
    if (g.output.empty() && triples_out.empty()) {
        throw CLI::ValidationError("rank requires --output (and/or --triples)");
    }
    ordembed::RankMatrix R(1, 1, {1});
    ordembed::TripleModel tm = ordembed::TripleModel::SelfDistance;
    std::vector<fs::path> inputs;
    if (model == "self") {
        if (items_path.empty()) throw CLI::ValidationError("self model requires --items");
        const ordembed::Configuration items = ordembed::io::read_configuration_csv(items_path);
        inputs.push_back(items_path);
        R = ordembed::mds_row_ranks(items);
    } else if (model == "point") {
        const ordembed::Configuration viewers = ordembed::io::read_configuration_csv(viewers_path);
        const ordembed::Configuration objects = ordembed::io::read_configuration_csv(objects_path);
        inputs = {viewers_path, objects_path};
        R = ordembed::row_ranks_point(viewers, objects);
        tm = ordembed::TripleModel::PointDistance;
    } else if (model == "vector") {
        const ordembed::Configuration viewers = ordembed::io::read_configuration_csv(viewers_path);
        const ordembed::Configuration objects = ordembed::io::read_configuration_csv(objects_path);
        inputs = {viewers_path, objects_path};
        R = ordembed::row_ranks_vector(ordembed::SphericalConfiguration(viewers.points()),
                                       objects);
        tm = ordembed::TripleModel::VectorInnerProduct;
    } else {
        throw CLI::ValidationError("--model must be point, vector or self");
    }
    if (!g.output.empty()) {
        ordembed::io::write_rank_matrix_csv(R, g.output);
        say(g, "wrote " + g.output);
    }
    if (!triples_out.empty()) {
        const ordembed::TripleSet T =
            ordembed::triples_from_ranks(R, tm, sample, ordembed::derive_seed(g.seed, 1));
        ordembed::io::write_triples_csv(T, triples_out);
        say(g, "wrote " + triples_out);
    }
    return 0;
}

int run_solve(const GlobalArgs& g, const std::string& variant_name, const std::string& input,
              const std::string& anchors_path, int dim, std::optional<int> count_opt,
              const std::string& opts_path) {
    if (g.output.empty()) throw CLI::ValidationError("solve requires --output");
    const ordembed::Variant variant = ordembed::variant_from_string(variant_name);
    ordembed::SolverOptions opts;
    std::vector<fs::path> inputs{input};
    if (!opts_path.empty()) {
        opts = ordembed::io::solver_options_from_json(
            json::parse(ordembed::io::read_text_file(opts_path)));
        inputs.push_back(opts_path);
    }
    opts.seed = g.seed;

    json out;
    ordembed::SolveStatus status = ordembed::SolveStatus::Ok;
    const bool is_triples_file = [&] {
        const std::string head = ordembed::io::read_text_file(input).substr(0, 6);
        return head.rfind("model=", 0) == 0;
    }();

    switch (variant) {
        case ordembed::Variant::ExternalPoint:
        case ordembed::Variant::ExternalVector: {
            if (anchors_path.empty()) {
                throw CLI::ValidationError("external variants require --anchors");
            }
            const ordembed::Configuration anchors =
                ordembed::io::read_configuration_csv(anchors_path);
            inputs.push_back(anchors_path);
            const ordembed::RankMatrix R = ordembed::io::read_rank_matrix_csv(input);
            json solutions = json::array();
            for (int i = 0; i < R.rows(); ++i) {
                ordembed::SolverOptions row_opts = opts;
                row_opts.seed = ordembed::derive_seed(g.seed, static_cast<std::uint64_t>(i));
                const ordembed::SolveResult res =
                    variant == ordembed::Variant::ExternalPoint
                        ? ordembed::solve_external_point(anchors, R.row(i), row_opts)
                        : ordembed::solve_external_vector(anchors, R.row(i), row_opts);
                if (res.status != ordembed::SolveStatus::Ok) status = res.status;
                json entry = ordembed::io::solve_result_to_json(res);
                entry["row"] = i;
                solutions.push_back(std::move(entry));
            }
            out["results"] = std::move(solutions);
            break;
        }
        case ordembed::Variant::Mds:
        case ordembed::Variant::SphereMds: {
            ordembed::TripleSet triples(ordembed::TripleModel::SelfDistance, {});
            int count = 0;
            if (is_triples_file) {
                triples = ordembed::io::read_triples_csv(input);
                for (const ordembed::Triple& t : triples.triples()) {
                    count = std::max({count, t.viewer + 1, t.preferred + 1, t.other + 1});
                }
            } else {
                const ordembed::RankMatrix R = ordembed::io::read_rank_matrix_csv(input);
                triples = ordembed::triples_from_ranks(
                    R, ordembed::TripleModel::SelfDistance, std::nullopt, 0);
                count = R.cols();
            }
            if (count_opt) count = *count_opt;
            const ordembed::SolveResult res =
                variant == ordembed::Variant::Mds
                    ? ordembed::solve_ordinal_mds(triples, count, dim, opts)
                    : ordembed::solve_sphere_mds(triples, count, dim, opts);
            status = res.status;
            out.update(ordembed::io::solve_result_to_json(res));
            break;
        }
        case ordembed::Variant::InternalPoint:
        case ordembed::Variant::InternalVector: {
            const ordembed::RankMatrix R = ordembed::io::read_rank_matrix_csv(input);
            const ordembed::SolveResult res =
                variant == ordembed::Variant::InternalPoint
                    ? ordembed::solve_internal_point(R, dim, opts)
                    : ordembed::solve_internal_vector(R, dim, opts);
            status = res.status;
            out.update(ordembed::io::solve_result_to_json(res));
            break;
        }
    }
    json doc;
    doc["manifest"] = ordembed::io::make_manifest("solve", inputs, g.seed);
    doc["variant"] = variant_name;
    doc.update(out);
    ordembed::io::write_text_file(g.output, doc.dump(2) + "\n");
    say(g, "wrote " + g.output + " (status: " + ordembed::to_string(status) + ")");
    return status == ordembed::SolveStatus::Ok ? 0 : 2;
}

int run_experiment(const GlobalArgs& g, const std::string& spec_path,
                   const std::string& plot_path, bool fresh_seeds) {
    if (g.output.empty()) throw CLI::ValidationError("experiment requires --output");
    ordembed::ExperimentSpec spec = ordembed::io::experiment_spec_from_json(
        json::parse(ordembed::io::read_text_file(spec_path)));
    if (fresh_seeds) {
        spec.seed = static_cast<std::uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count());
        say(g, "fresh seed: " + std::to_string(spec.seed));
    }
    const ordembed::ExperimentReport report = ordembed::run_identifiability_experiment(spec);
    json doc;
    doc["manifest"] = ordembed::io::make_manifest("experiment", {spec_path}, spec.seed);
    doc.update(ordembed::io::experiment_report_to_json(report));
    ordembed::io::write_text_file(g.output, doc.dump(2) + "\n");
    say(g, "wrote " + g.output);
    if (!plot_path.empty()) {
        ordembed::io::write_report_svg(report, plot_path);
        say(g, "wrote " + plot_path);
    }
    if (!g.quiet) {
        for (std::size_t s = 0; s < report.summaries.size(); ++s) {
            const ordembed::SizeSummary& sum = report.summaries[s];
            double wall = 0.0;
            for (const ordembed::TrialRecord& t : report.trials) {
                if (t.size_index == static_cast<int>(s)) wall += t.wall_time_sec;
            }
            std::printf("size %d: median residual %.4g, zero-violation %.0f%%, %.2fs\n",
                        sum.size.objects, sum.median_residual,
                        100.0 * sum.zero_violation_fraction, wall);
        }
    }
    return 0;
}

int run_counterexample(const GlobalArgs& g, const std::string& which) {
    if (g.output.empty()) throw CLI::ValidationError("counterexample requires --output");
    json doc;
    doc["manifest"] = ordembed::io::make_manifest("counterexample", {}, g.seed);
    bool pass = false;
    if (which == "internal-point-ray") {
        const ordembed::PointRayCounterexample demo =
            ordembed::counterexample_internal_point_ray();
        doc.update(ordembed::io::counterexample_report_to_json(demo.report));
        doc["config_a"]["individuals"] = ordembed::io::configuration_to_json(demo.individuals);
        doc["config_a"]["objects"] = ordembed::io::configuration_to_json(demo.objects_a);
        doc["config_b"]["individuals"] = ordembed::io::configuration_to_json(demo.individuals);
        doc["config_b"]["objects"] = ordembed::io::configuration_to_json(demo.objects_b);
        pass = demo.report.pass;
    } else if (which == "internal-vector-coordinatewise" ||
               which == "internal-vector-disconnected") {
        const ordembed::VectorCounterexample demo =
            which == "internal-vector-coordinatewise"
                ? ordembed::counterexample_internal_vector_coordinatewise()
                : ordembed::counterexample_internal_vector_disconnected();
        doc.update(ordembed::io::counterexample_report_to_json(demo.report));
        doc["config_a"]["individuals"] =
            ordembed::io::configuration_to_json(demo.individuals.config());
        doc["config_a"]["objects"] = ordembed::io::configuration_to_json(demo.objects_a);
        doc["config_b"]["individuals"] =
            ordembed::io::configuration_to_json(demo.individuals.config());
        doc["config_b"]["objects"] = ordembed::io::configuration_to_json(demo.objects_b);
        pass = demo.report.pass;
    } else {
        throw CLI::ValidationError(
            "--which must be internal-point-ray, internal-vector-coordinatewise or "
            "internal-vector-disconnected");
    }
    ordembed::io::write_text_file(g.output, doc.dump(2) + "\n");
    say(g, "wrote " + g.output + (pass ? " (pass)" : " (FAIL)"));
    return pass ? 0 : 2;
}

int run_align(const GlobalArgs& g, const std::string& variant, const std::string& source,
              const std::string& target, const std::string& source_objects,
              const std::string& target_objects, bool no_reflection) {
    if (g.output.empty()) throw CLI::ValidationError("align requires --output");
    json doc;
    std::vector<fs::path> inputs{source, target};
    ordembed::AlignmentResult result;
    if (variant == "similarity") {
        const ordembed::Configuration src = ordembed::io::read_configuration_csv(source);
        const ordembed::Configuration tgt = ordembed::io::read_configuration_csv(target);
        result = ordembed::similarity_procrustes(src, tgt, !no_reflection);
        doc["transform"] =
            ordembed::io::similarity_to_json(std::get<ordembed::SimilarityTransform>(result.transform));
    } else if (variant == "orthogonal") {
        const ordembed::SphericalConfiguration src(
            ordembed::io::read_configuration_csv(source).points());
        const ordembed::SphericalConfiguration tgt(
            ordembed::io::read_configuration_csv(target).points());
        result = ordembed::orthogonal_align(src, tgt);
        json q;
        const Eigen::MatrixXd& Q = std::get<Eigen::MatrixXd>(result.transform);
        for (Eigen::Index i = 0; i < Q.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index c = 0; c < Q.cols(); ++c) row.push_back(Q(i, c));
            q.push_back(std::move(row));
        }
        doc["orthogonal"] = std::move(q);
    } else if (variant == "gauge") {
        if (source_objects.empty() || target_objects.empty()) {
            throw CLI::ValidationError("gauge alignment requires --source-objects and --target-objects");
        }
        inputs.push_back(source_objects);
        inputs.push_back(target_objects);
        const ordembed::SphericalConfiguration src_x(
            ordembed::io::read_configuration_csv(source).points());
        const ordembed::SphericalConfiguration tgt_x(
            ordembed::io::read_configuration_csv(target).points());
        const ordembed::Configuration src_y = ordembed::io::read_configuration_csv(source_objects);
        const ordembed::Configuration tgt_y = ordembed::io::read_configuration_csv(target_objects);
        result = ordembed::gauge_align_vector_model(src_x, src_y, tgt_x, tgt_y);
        doc["gauge"] = ordembed::io::gauge_to_json(std::get<ordembed::GaugePair>(result.transform));
        doc["object_residual"] = result.object_residual;
        doc["individual_residual"] = result.individual_residual;
    } else {
        throw CLI::ValidationError("--variant must be similarity, orthogonal or gauge");
    }
    doc["residual"] = result.residual;
    json final_doc;
    final_doc["manifest"] = ordembed::io::make_manifest("align", inputs, g.seed);
    final_doc["variant"] = variant;
    final_doc.update(doc);
    ordembed::io::write_text_file(g.output, final_doc.dump(2) + "\n");
    say(g, "wrote " + g.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordinal embedding solvers, unfolding experiments and counterexample demos"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs g;
    app.add_option("--seed", g.seed, "root random seed")->capture_default_str();
    app.add_option("--output", g.output, "output file path");
    app.add_flag("--quiet", g.quiet, "suppress console chatter");
    app.add_option("--kernel", g.kernel, "kernel backend: auto, scalar, avx2")
        ->capture_default_str();

    auto* gen = app.add_subcommand("generate", "sample a configuration from a design");
    std::string gen_design = "uniform-ball";
    int gen_dim = 2, gen_count = 10;
    std::string gen_ranks, gen_triples;
    std::optional<std::size_t> gen_sample;
    gen->add_option("--design", gen_design, "uniform-ball, uniform-cube, uniform-sphere, grid")
        ->capture_default_str();
    gen->add_option("--dim", gen_dim, "dimension p")->capture_default_str();
    gen->add_option("--count", gen_count, "number of points")->capture_default_str();
    gen->add_option("--emit-ranks", gen_ranks, "also write self-distance ranks CSV");
    gen->add_option("--emit-triples", gen_triples, "also write self-distance triples CSV");
    gen->add_option("--sample", gen_sample, "triple subsample size");

    auto* rank = app.add_subcommand("rank", "rank matrices and triples from configurations");
    std::string rank_model = "self", rank_viewers, rank_objects, rank_items, rank_triples;
    std::optional<std::size_t> rank_sample;
    rank->add_option("--model", rank_model, "point, vector or self")->capture_default_str();
    rank->add_option("--viewers", rank_viewers, "viewer configuration CSV");
    rank->add_option("--objects", rank_objects, "object configuration CSV");
    rank->add_option("--items", rank_items, "item configuration CSV (self model)");
    rank->add_option("--triples", rank_triples, "also write triples CSV");
    rank->add_option("--sample", rank_sample, "triple subsample size");

    auto* solve = app.add_subcommand("solve", "solve an ordinal embedding problem");
    std::string solve_variant, solve_input, solve_anchors, solve_opts;
    int solve_dim = 2;
    std::optional<int> solve_count;
    solve->add_option("--variant", solve_variant,
                      "external-point, external-vector, mds, internal-point, "
                      "internal-vector, sphere-mds")
        ->required();
    solve->add_option("--input", solve_input, "ranks.csv or triples.csv")->required();
    solve->add_option("--anchors", solve_anchors, "anchor/object configuration (external variants)");
    solve->add_option("--dim", solve_dim, "embedding dimension")->capture_default_str();
    solve->add_option("--count", solve_count, "item count override (triples input)");
    solve->add_option("--opts", solve_opts, "solver options JSON");

    auto* exp = app.add_subcommand("experiment", "run an identifiability experiment sweep");
    std::string exp_spec, exp_plot;
    bool exp_fresh = false;
    exp->add_option("--spec", exp_spec, "experiment spec JSON")->required();
    exp->add_option("--plot", exp_plot, "also write a log-log SVG plot");
    exp->add_flag("--fresh-seeds", exp_fresh, "explore with a new seed (not CI-gating)");

    auto* ce = app.add_subcommand("counterexample", "run a shipped non-uniqueness demo");
    std::string ce_which;
    ce->add_option("--which", ce_which,
                   "internal-point-ray, internal-vector-coordinatewise, "
                   "internal-vector-disconnected")
        ->required();

    auto* align = app.add_subcommand("align", "align two configurations under a gauge group");
    std::string align_variant = "similarity", align_src, align_tgt, align_src_obj, align_tgt_obj;
    bool align_no_reflection = false;
    align->add_option("--variant", align_variant, "similarity, orthogonal or gauge")
        ->capture_default_str();
    align->add_option("--source", align_src, "source configuration CSV")->required();
    align->add_option("--target", align_tgt, "target configuration CSV")->required();
    align->add_option("--source-objects", align_src_obj, "source objects (gauge)");
    align->add_option("--target-objects", align_tgt_obj, "target objects (gauge)");
    align->add_flag("--no-reflection", align_no_reflection, "restrict to proper rotations");

    try {
        app.parse(argc, argv);
        apply_kernel_choice(g.kernel);
        if (gen->parsed()) {
            return run_generate(g, gen_design, gen_dim, gen_count, gen_ranks, gen_triples,
                                gen_sample);
        }
        if (rank->parsed()) {
            return run_rank(g, rank_model, rank_viewers, rank_objects, rank_items,
                            rank_triples, rank_sample);
        }
        if (solve->parsed()) {
            return run_solve(g, solve_variant, solve_input, solve_anchors, solve_dim,
                             solve_count, solve_opts);
        }
        if (exp->parsed()) return run_experiment(g, exp_spec, exp_plot, exp_fresh);
        if (ce->parsed()) return run_counterexample(g, ce_which);
        if (align->parsed()) {
            return run_align(g, align_variant, align_src, align_tgt, align_src_obj,
                             align_tgt_obj, align_no_reflection);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
