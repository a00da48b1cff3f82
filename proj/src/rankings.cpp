/// @file  rankings.cpp
/// @brief Rank generation, triple enumeration, violation counting.

#include <ordembed/kernels.hpp>
#include <ordembed/rankings.hpp>
#include <ordembed/rng.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ordembed {

namespace {

void require_same_dim(const Configuration& a, const Configuration& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string("dimension mismatch in ") + what);
    }
}

/// Ranks of one value row: rank 1 for the smallest value when ascending,
/// for the largest when descending. Exact ties raise TieError.
std::vector<int> rank_row(const double* values, int n, int viewer, bool ascending) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ascending ? values[a] < values[b] : values[a] > values[b];
    });
    for (int t = 0; t + 1 < n; ++t) {
        if (values[order[t]] == values[order[t + 1]]) {
            throw TieError(viewer, order[t], order[t + 1]);
        }
    }
    std::vector<int> ranks(n);
    for (int t = 0; t < n; ++t) ranks[order[t]] = t + 1;
    return ranks;
}

RankMatrix ranks_from_values(const std::vector<double>& values, int m, int n,
                             bool ascending) {
    std::vector<int> ranks(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        const std::vector<int> row = rank_row(values.data() + static_cast<std::size_t>(i) * n,
                                              n, i, ascending);
        std::copy(row.begin(), row.end(), ranks.begin() + static_cast<std::size_t>(i) * n);
    }
    return RankMatrix(m, n, std::move(ranks));
}

/// Flat (preferred, other) index pairs of a triple set over an m-by-n value
/// matrix.
struct FlatPairs {
    std::vector<std::int32_t> preferred;
    std::vector<std::int32_t> other;
};

FlatPairs flatten(const TripleSet& T, int m, int n) {
    FlatPairs fp;
    fp.preferred.reserve(T.size());
    fp.other.reserve(T.size());
    for (const Triple& t : T.triples()) {
        if (t.viewer < 0 || t.viewer >= m || t.preferred < 0 || t.preferred >= n ||
            t.other < 0 || t.other >= n) {
            throw std::out_of_range("triple index out of range");
        }
        fp.preferred.push_back(static_cast<std::int32_t>(t.viewer) * n + t.preferred);
        fp.other.push_back(static_cast<std::int32_t>(t.viewer) * n + t.other);
    }
    return fp;
}

}  // namespace

RankMatrix::RankMatrix(int rows, int cols, std::vector<int> ranks)
    : rows_(rows), cols_(cols), ranks_(std::move(ranks)) {
    if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("rank matrix must be non-empty");
    if (ranks_.size() != static_cast<std::size_t>(rows_) * cols_) {
        throw std::invalid_argument("rank matrix size mismatch");
    }
    std::vector<bool> seen(cols_);
    for (int i = 0; i < rows_; ++i) {
        std::fill(seen.begin(), seen.end(), false);
        for (int k = 0; k < cols_; ++k) {
            const int r = rank(i, k);
            if (r < 1 || r > cols_ || seen[r - 1]) {
                throw std::invalid_argument("row " + std::to_string(i) +
                                            " is not a permutation of 1.." +
                                            std::to_string(cols_));
            }
            seen[r - 1] = true;
        }
    }
}

std::vector<int> RankMatrix::row(int i) const {
    return std::vector<int>(ranks_.begin() + static_cast<std::size_t>(i) * cols_,
                            ranks_.begin() + static_cast<std::size_t>(i + 1) * cols_);
}

TripleSet::TripleSet(TripleModel model, std::vector<Triple> triples)
    : model_(model), triples_(std::move(triples)) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(triples_.size() * 2);
    for (const Triple& t : triples_) {
        if (t.preferred == t.other) {
            throw std::invalid_argument("triple compares an object with itself");
        }
        if (model_ == TripleModel::SelfDistance &&
            (t.preferred == t.viewer || t.other == t.viewer)) {
            throw std::invalid_argument("self-model triple involves its own viewer");
        }
        const auto key = [](int i, int j, int k) {
            return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 42) ^
                   (static_cast<std::uint64_t>(static_cast<std::uint32_t>(j)) << 21) ^
                   static_cast<std::uint64_t>(static_cast<std::uint32_t>(k));
        };
        if (!seen.insert(key(t.viewer, t.preferred, t.other)).second) {
            throw std::invalid_argument("duplicate triple");
        }
        if (seen.count(key(t.viewer, t.other, t.preferred)) > 0) {
            throw std::invalid_argument("triple set contains both orientations of a pair");
        }
    }
}

std::vector<double> squared_distance_matrix(const Configuration& viewers,
                                            const Configuration& objects) {
    require_same_dim(viewers, objects, "squared_distance_matrix");
    const int m = static_cast<int>(viewers.count());
    const int n = static_cast<int>(objects.count());
    const int p = static_cast<int>(viewers.dim());
    std::vector<double> vals(static_cast<std::size_t>(m) * n);
    Eigen::VectorXd x(p);
    for (int i = 0; i < m; ++i) {
        x = viewers.points().row(i);
        kernels::squared_distance_row(x.data(), objects.coord_data(), n, p,
                                      vals.data() + static_cast<std::size_t>(i) * n);
    }
    return vals;
}

std::vector<double> inner_product_matrix(const Configuration& viewers,
                                         const Configuration& objects) {
    require_same_dim(viewers, objects, "inner_product_matrix");
    const int m = static_cast<int>(viewers.count());
    const int n = static_cast<int>(objects.count());
    const int p = static_cast<int>(viewers.dim());
    std::vector<double> vals(static_cast<std::size_t>(m) * n);
    Eigen::VectorXd x(p);
    for (int i = 0; i < m; ++i) {
        x = viewers.points().row(i);
        kernels::dot_row(x.data(), objects.coord_data(), n, p,
                         vals.data() + static_cast<std::size_t>(i) * n);
    }
    return vals;
}

RankMatrix row_ranks_point(const Configuration& viewers, const Configuration& objects) {
    const std::vector<double> vals = squared_distance_matrix(viewers, objects);
    return ranks_from_values(vals, static_cast<int>(viewers.count()),
                             static_cast<int>(objects.count()), true);
}

RankMatrix row_ranks_vector(const SphericalConfiguration& viewers,
                            const Configuration& objects) {
    const std::vector<double> vals = inner_product_matrix(viewers.config(), objects);
    return ranks_from_values(vals, static_cast<int>(viewers.count()),
                             static_cast<int>(objects.count()), false);
}

RankMatrix mds_row_ranks(const Configuration& items) {
    return row_ranks_point(items, items);
}

TripleSet triples_from_ranks(const RankMatrix& R, TripleModel model,
                             std::optional<std::size_t> sample_count,
                             std::uint64_t seed) {
    std::vector<Triple> all;
    const int m = R.rows();
    const int n = R.cols();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                if (model == TripleModel::SelfDistance && (j == i || k == i)) continue;
                if (R.rank(i, j) < R.rank(i, k)) {
                    all.push_back({i, j, k});
                } else {
                    all.push_back({i, k, j});
                }
            }
        }
    }
    if (sample_count) {
        if (*sample_count > all.size()) {
            throw std::invalid_argument("sample_count exceeds available triples (" +
                                        std::to_string(all.size()) + ")");
        }
        // Partial Fisher-Yates; keep the sampled prefix in enumeration order.
        Rng rng(seed);
        for (std::size_t t = 0; t < *sample_count; ++t) {
            const std::size_t j = t + rng.index(all.size() - t);
            std::swap(all[t], all[j]);
        }
        all.resize(*sample_count);
        std::sort(all.begin(), all.end(), [](const Triple& a, const Triple& b) {
            if (a.viewer != b.viewer) return a.viewer < b.viewer;
            if (a.preferred != b.preferred) return a.preferred < b.preferred;
            return a.other < b.other;
        });
    }
    return TripleSet(model, std::move(all));
}

long violation_count(const TripleSet& T, const Configuration& viewers,
                     const Configuration& objects) {
    if (T.model() != TripleModel::PointDistance) {
        throw std::invalid_argument("triple model does not match point-distance data");
    }
    const std::vector<double> vals = squared_distance_matrix(viewers, objects);
    const FlatPairs fp = flatten(T, static_cast<int>(viewers.count()),
                                 static_cast<int>(objects.count()));
    // Violation: preferred not strictly closer, i.e. d2[pref] >= d2[other].
    return kernels::count_ge(vals.data(), fp.preferred.data(), fp.other.data(), T.size());
}

long violation_count(const TripleSet& T, const SphericalConfiguration& viewers,
                     const Configuration& objects) {
    if (T.model() != TripleModel::VectorInnerProduct) {
        throw std::invalid_argument("triple model does not match inner-product data");
    }
    const std::vector<double> vals = inner_product_matrix(viewers.config(), objects);
    const FlatPairs fp = flatten(T, static_cast<int>(viewers.count()),
                                 static_cast<int>(objects.count()));
    // Violation: preferred not strictly larger, i.e. dot[other] >= dot[pref].
    return kernels::count_ge(vals.data(), fp.other.data(), fp.preferred.data(), T.size());
}

long violation_count(const TripleSet& T, const Configuration& items) {
    if (T.model() != TripleModel::SelfDistance) {
        throw std::invalid_argument("triple model does not match self-distance data");
    }
    const std::vector<double> vals = squared_distance_matrix(items, items);
    const FlatPairs fp = flatten(T, static_cast<int>(items.count()),
                                 static_cast<int>(items.count()));
    return kernels::count_ge(vals.data(), fp.preferred.data(), fp.other.data(), T.size());
}

bool rank_data_equal_point(const Configuration& a_viewers, const Configuration& a_objects,
                           const Configuration& b_viewers, const Configuration& b_objects) {
    if (a_viewers.count() != b_viewers.count() || a_objects.count() != b_objects.count()) {
        throw std::invalid_argument("rank_data_equal: count mismatch");
    }
    return row_ranks_point(a_viewers, a_objects) == row_ranks_point(b_viewers, b_objects);
}

bool rank_data_equal_vector(const SphericalConfiguration& a_viewers,
                            const Configuration& a_objects,
                            const SphericalConfiguration& b_viewers,
                            const Configuration& b_objects) {
    if (a_viewers.count() != b_viewers.count() || a_objects.count() != b_objects.count()) {
        throw std::invalid_argument("rank_data_equal: count mismatch");
    }
    return row_ranks_vector(a_viewers, a_objects) == row_ranks_vector(b_viewers, b_objects);
}

bool rank_data_equal_self(const Configuration& a_items, const Configuration& b_items) {
    if (a_items.count() != b_items.count()) {
        throw std::invalid_argument("rank_data_equal: count mismatch");
    }
    return mds_row_ranks(a_items) == mds_row_ranks(b_items);
}

}  // namespace ordembed
