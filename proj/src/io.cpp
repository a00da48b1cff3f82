/// @file  io.cpp
/// @brief CSV/JSON readers and writers, manifests, report serialization.

#include <ordembed/io.hpp>
#include <ordembed/kernels.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ordembed::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("malformed integer: " + s);
    return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

const char* triple_model_name(TripleModel m) {
    switch (m) {
        case TripleModel::PointDistance:
            return "point";
        case TripleModel::VectorInnerProduct:
            return "vector";
        case TripleModel::SelfDistance:
            return "self";
    }
    return "?";
}

TripleModel triple_model_from_name(const std::string& s) {
    if (s == "point") return TripleModel::PointDistance;
    if (s == "vector") return TripleModel::VectorInnerProduct;
    if (s == "self") return TripleModel::SelfDistance;
    throw std::invalid_argument("unknown triple model: " + s);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const std::size_t rows = j.size();
    if (rows == 0) throw std::invalid_argument("empty matrix in JSON");
    const std::size_t cols = j.at(0).size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols) throw std::invalid_argument("ragged matrix in JSON");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    }
    return m;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Configuration read_configuration_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0].rfind("dim=", 0) != 0) {
        throw std::invalid_argument(path.string() + ": expected 'dim=<p>' header");
    }
    const int dim = parse_int(lines[0].substr(4));
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    const int count = static_cast<int>(lines.size()) - 1;
    if (count < 1) throw std::invalid_argument(path.string() + ": no points");
    Eigen::MatrixXd pts(count, dim);
    for (int i = 0; i < count; ++i) {
        const std::vector<std::string> fields = split(lines[i + 1], ',');
        if (static_cast<int>(fields.size()) != dim) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(i) +
                                        " has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(dim));
        }
        for (int j = 0; j < dim; ++j) pts(i, j) = parse_double(fields[j]);
    }
    return Configuration(std::move(pts));
}

void write_configuration_csv(const Configuration& c, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "dim=" << c.dim() << "\n";
    for (Eigen::Index i = 0; i < c.count(); ++i) {
        for (Eigen::Index j = 0; j < c.dim(); ++j) {
            if (j > 0) out << ",";
            out << format_double(c.points()(i, j));
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

json configuration_to_json(const Configuration& c) {
    json j;
    j["dim"] = c.dim();
    j["points"] = matrix_to_json(c.points());
    return j;
}

Configuration configuration_from_json(const json& j) {
    Eigen::MatrixXd pts = matrix_from_json(j.at("points"));
    if (pts.cols() != j.at("dim").get<Eigen::Index>()) {
        throw std::invalid_argument("configuration dim does not match points");
    }
    return Configuration(std::move(pts));
}

RankMatrix read_rank_matrix_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw std::invalid_argument(path.string() + ": empty rank file");
    const int cols = static_cast<int>(split(lines[0], ',').size());
    std::vector<int> ranks;
    ranks.reserve(lines.size() * cols);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split(lines[i], ',');
        if (static_cast<int>(fields.size()) != cols) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(i) +
                                        " has inconsistent column count");
        }
        for (const std::string& f : fields) ranks.push_back(parse_int(f));
    }
    return RankMatrix(static_cast<int>(lines.size()), cols, std::move(ranks));
}

void write_rank_matrix_csv(const RankMatrix& R, const std::filesystem::path& path) {
    std::ostringstream out;
    for (int i = 0; i < R.rows(); ++i) {
        for (int k = 0; k < R.cols(); ++k) {
            if (k > 0) out << ",";
            out << R.rank(i, k);
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

TripleSet read_triples_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0].rfind("model=", 0) != 0) {
        throw std::invalid_argument(path.string() + ": expected 'model=<point|vector|self>' header");
    }
    const TripleModel model = triple_model_from_name(lines[0].substr(6));
    std::vector<Triple> triples;
    triples.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split(lines[i], ',');
        if (fields.size() != 3) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(i - 1) +
                                        " must be 'i,j,k'");
        }
        triples.push_back({parse_int(fields[0]), parse_int(fields[1]), parse_int(fields[2])});
    }
    return TripleSet(model, std::move(triples));
}

void write_triples_csv(const TripleSet& T, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "model=" << triple_model_name(T.model()) << "\n";
    for (const Triple& t : T.triples()) {
        out << t.viewer << "," << t.preferred << "," << t.other << "\n";
    }
    write_text_file(path, out.str());
}

json similarity_to_json(const SimilarityTransform& T) {
    json j;
    j["scale"] = T.scale();
    j["orthogonal"] = matrix_to_json(T.orthogonal());
    json t = json::array();
    for (Eigen::Index i = 0; i < T.translation().size(); ++i) t.push_back(T.translation()(i));
    j["translation"] = std::move(t);
    return j;
}

SimilarityTransform similarity_from_json(const json& j) {
    const Eigen::MatrixXd Q = matrix_from_json(j.at("orthogonal"));
    Eigen::VectorXd t(j.at("translation").size());
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = j.at("translation").at(i).get<double>();
    return SimilarityTransform(j.at("scale").get<double>(), Q, t);
}

json gauge_to_json(const GaugePair& G) {
    json j;
    j["linear"] = matrix_to_json(G.linear());
    json t = json::array();
    for (Eigen::Index i = 0; i < G.translation().size(); ++i) t.push_back(G.translation()(i));
    j["translation"] = std::move(t);
    return j;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string hash_file(const std::filesystem::path& path) {
    return fnv1a64_hex(read_text_file(path));
}

json make_manifest(const std::string& command,
                   const std::vector<std::filesystem::path>& inputs,
                   std::uint64_t seed) {
    json m;
    m["command"] = command;
    json files = json::array();
    for (const auto& p : inputs) {
        json f;
        f["path"] = p.string();
        f["fnv1a64"] = hash_file(p);
        files.push_back(std::move(f));
    }
    m["inputs"] = std::move(files);
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    m["kernel"] = kernels::name(kernels::active());
    std::time_t epoch = 0;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
        epoch = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    }
    char stamp[32];
    std::tm tm{};
    gmtime_r(&epoch, &tm);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);
    m["timestamp"] = stamp;
    return m;
}

json solver_options_to_json(const SolverOptions& o) {
    json j;
    j["max_iterations"] = o.max_iterations;
    j["learning_rate"] = o.learning_rate;
    j["margin"] = o.margin;
    j["restarts"] = o.restarts;
    j["seed"] = o.seed;
    j["tolerance"] = o.tolerance;
    j["repulsion_weight"] = o.repulsion_weight;
    j["repulsion_radius"] = o.repulsion_radius;
    return j;
}

SolverOptions solver_options_from_json(const json& j) {
    SolverOptions o;
    if (j.contains("max_iterations")) o.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("learning_rate")) o.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("margin")) o.margin = j.at("margin").get<double>();
    if (j.contains("restarts")) o.restarts = j.at("restarts").get<int>();
    if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance")) o.tolerance = j.at("tolerance").get<double>();
    if (j.contains("repulsion_weight")) o.repulsion_weight = j.at("repulsion_weight").get<double>();
    if (j.contains("repulsion_radius")) o.repulsion_radius = j.at("repulsion_radius").get<double>();
    if (o.max_iterations < 1 || o.learning_rate <= 0.0 || o.margin <= 0.0 ||
        o.restarts < 1 || o.tolerance <= 0.0) {
        throw std::invalid_argument("invalid solver options");
    }
    return o;
}

json solve_result_to_json(const SolveResult& r) {
    json j;
    j["status"] = to_string(r.status);
    j["converged"] = r.converged;
    j["iterations_used"] = r.iterations_used;
    j["violations"] = r.violations;
    j["loss"] = r.loss;
    json trace;
    trace["length"] = r.loss_trace.size();
    trace["first"] = r.loss_trace.empty() ? 0.0 : r.loss_trace.front();
    trace["last"] = r.loss_trace.empty() ? 0.0 : r.loss_trace.back();
    j["loss_trace"] = std::move(trace);
    j["solution"] = configuration_to_json(r.solution);
    if (r.objects) j["objects"] = configuration_to_json(*r.objects);
    return j;
}

ExperimentSpec experiment_spec_from_json(const json& j) {
    ExperimentSpec spec;
    spec.variant = variant_from_string(j.at("variant").get<std::string>());
    spec.dim = j.at("dim").get<int>();
    for (const auto& s : j.at("sizes")) {
        ExperimentSize size;
        if (s.is_array()) {
            if (s.size() != 2) throw std::invalid_argument("size entries must be n or [m, n]");
            size.viewers = s.at(0).get<int>();
            size.objects = s.at(1).get<int>();
        } else {
            size.objects = s.get<int>();
        }
        spec.sizes.push_back(size);
    }
    if (j.contains("design")) spec.design = design_from_string(j.at("design").get<std::string>());
    if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("solver_opts")) spec.solver_opts = solver_options_from_json(j.at("solver_opts"));
    if (j.contains("triple_sample") && !j.at("triple_sample").is_null()) {
        spec.triple_sample = j.at("triple_sample").get<std::size_t>();
    }
    if (j.contains("bypass_solver")) spec.bypass_solver = j.at("bypass_solver").get<bool>();
    if (j.contains("object_offset")) {
        for (const auto& v : j.at("object_offset")) spec.object_offset.push_back(v.get<double>());
    }
    return spec;
}

json experiment_spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["variant"] = to_string(spec.variant);
    j["dim"] = spec.dim;
    json sizes = json::array();
    for (const ExperimentSize& s : spec.sizes) {
        if (s.viewers > 0) {
            sizes.push_back(json::array({s.viewers, s.objects}));
        } else {
            sizes.push_back(s.objects);
        }
    }
    j["sizes"] = std::move(sizes);
    j["design"] = to_string(spec.design);
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["solver_opts"] = solver_options_to_json(spec.solver_opts);
    if (spec.triple_sample) j["triple_sample"] = *spec.triple_sample;
    if (spec.bypass_solver) j["bypass_solver"] = true;
    if (!spec.object_offset.empty()) j["object_offset"] = spec.object_offset;
    return j;
}

json experiment_report_to_json(const ExperimentReport& report) {
    json j;
    j["spec"] = experiment_spec_to_json(report.spec);
    json trials = json::array();
    for (const TrialRecord& rec : report.trials) {
        json t;
        t["size_index"] = rec.size_index;
        t["trial"] = rec.trial;
        if (rec.failed) {
            t["failed"] = true;
            t["error"] = rec.error;
        } else {
            t["violations"] = rec.violations;
            t["comparisons"] = rec.comparisons;
            t["violation_fraction"] =
                rec.comparisons > 0
                    ? static_cast<double>(rec.violations) / rec.comparisons
                    : 0.0;
            t["aligned_residual"] = rec.aligned_residual;
            t["recovery_error"] = rec.recovery_error;
            if (rec.degenerate) t["degenerate"] = true;
        }
        trials.push_back(std::move(t));
    }
    j["trials"] = std::move(trials);
    json summaries = json::array();
    for (const SizeSummary& s : report.summaries) {
        json sj;
        if (s.size.viewers > 0) {
            sj["size"] = json::array({s.size.viewers, s.size.objects});
        } else {
            sj["size"] = s.size.objects;
        }
        sj["median_aligned_residual"] = s.median_residual;
        sj["iqr_aligned_residual"] = s.iqr_residual;
        sj["median_recovery_error"] = s.median_recovery;
        sj["iqr_recovery_error"] = s.iqr_recovery;
        sj["zero_violation_fraction"] = s.zero_violation_fraction;
        sj["mean_violation_fraction"] = s.mean_violation_fraction;
        sj["failed_trials"] = s.failed_trials;
        summaries.push_back(std::move(sj));
    }
    j["summary"] = std::move(summaries);
    return j;
}

json counterexample_report_to_json(const CounterexampleReport& r) {
    json j;
    j["which"] = r.which;
    j["rank_data_equal"] = r.rank_data_equal;
    j["alignment_residual"] = r.alignment_residual;
    j["residual_floor"] = r.residual_floor;
    j["pass"] = r.pass;
    return j;
}

void write_report_svg(const ExperimentReport& report, const std::filesystem::path& path) {
    const double width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 30, mb = 50;
    std::vector<double> xs, med_res, med_rec;
    for (const SizeSummary& s : report.summaries) {
        xs.push_back(s.size.objects);
        med_res.push_back(std::max(s.median_residual, 1e-12));
        med_rec.push_back(std::max(s.median_recovery, 1e-12));
    }
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (double v : xs) {
        xlo = std::min(xlo, std::log10(v));
        xhi = std::max(xhi, std::log10(v));
    }
    for (const auto* series : {&med_res, &med_rec}) {
        for (double v : *series) {
            ylo = std::min(ylo, std::log10(v));
            yhi = std::max(yhi, std::log10(v));
        }
    }
    if (xhi <= xlo) xhi = xlo + 1;
    if (yhi <= ylo) yhi = ylo + 1;
    const auto px = [&](double lx) {
        return ml + (lx - xlo) / (xhi - xlo) * (width - ml - mr);
    };
    const auto py = [&](double ly) {
        return height - mb - (ly - ylo) / (yhi - ylo) * (height - mt - mb);
    };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    const char* colors[2] = {"#1f77b4", "#d62728"};
    const char* labels[2] = {"median aligned residual", "median recovery error"};
    const std::vector<double>* series[2] = {&med_res, &med_rec};
    for (int s = 0; s < 2; ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            svg << px(std::log10(xs[i])) << "," << py(std::log10((*series[s])[i])) << " ";
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            svg << "<circle cx=\"" << px(std::log10(xs[i])) << "\" cy=\""
                << py(std::log10((*series[s])[i])) << "\" r=\"3\" fill=\"" << colors[s]
                << "\"/>\n";
        }
        svg << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 * (s + 1) << "\" fill=\""
            << colors[s] << "\" font-size=\"12\">" << labels[s] << "</text>\n";
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        svg << "<text x=\"" << px(std::log10(xs[i])) - 8 << "\" y=\"" << height - mb + 18
            << "\" font-size=\"11\">" << report.summaries[i].size.objects << "</text>\n";
    }
    svg << "<text x=\"" << (width / 2 - 20) << "\" y=\"" << height - 12
        << "\" font-size=\"12\">size (log)</text>\n";
    svg << "<text x=\"12\" y=\"" << (height / 2) << "\" font-size=\"12\" transform=\"rotate(-90 12 "
        << (height / 2) << ")\">residual (log)</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << mt - 10 << "\" font-size=\"13\">"
        << to_string(report.spec.variant) << " identifiability</text>\n";
    svg << "</svg>\n";
    write_text_file(path, svg.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ordembed::io
