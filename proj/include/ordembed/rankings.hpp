/// @file  rankings.hpp
/// @brief Rank matrices and comparison triples under the distance and
///        inner-product conventions; violation counting; data equivalence.

#pragma once

#include <ordembed/types.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ordembed {

/// Row-wise preference ranks; every row is a permutation of 1..cols.
/// Rank 1 marks the most preferred object of that row.
class RankMatrix {
public:
    RankMatrix(int rows, int cols, std::vector<int> ranks);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int rank(int i, int k) const { return ranks_[static_cast<std::size_t>(i) * cols_ + k]; }
    const std::vector<int>& data() const { return ranks_; }
    std::vector<int> row(int i) const;

    bool operator==(const RankMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && ranks_ == other.ranks_;
    }

private:
    int rows_;
    int cols_;
    std::vector<int> ranks_;
};

enum class TripleModel { PointDistance, VectorInnerProduct, SelfDistance };

/// Ordered comparisons (i, j, k): from viewpoint i, object j strictly
/// precedes object k. Precedence means smaller distance (point/self models)
/// or larger inner product (vector model); the orientation is normalized at
/// generation time so all downstream consumers see one semantics.
struct Triple {
    int viewer;
    int preferred;
    int other;

    bool operator==(const Triple& t) const {
        return viewer == t.viewer && preferred == t.preferred && other == t.other;
    }
};

class TripleSet {
public:
    TripleSet(TripleModel model, std::vector<Triple> triples);

    TripleModel model() const { return model_; }
    const std::vector<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }

private:
    TripleModel model_;
    std::vector<Triple> triples_;
};

/// ranks[i][k] < ranks[i][l] iff viewer i is closer to object k than to
/// object l. Throws TieError on equal distances.
RankMatrix row_ranks_point(const Configuration& viewers, const Configuration& objects);

/// Inner-product convention: smaller rank iff larger inner product.
RankMatrix row_ranks_vector(const SphericalConfiguration& viewers,
                            const Configuration& objects);

/// Self-distance ranks of a single item set; the diagonal always ranks 1.
RankMatrix mds_row_ranks(const Configuration& items);

/// All per-row ordered comparisons of R, or a seeded uniform subsample
/// without replacement. The self model skips comparisons involving the
/// viewer itself.
TripleSet triples_from_ranks(const RankMatrix& R, TripleModel model,
                             std::optional<std::size_t> sample_count,
                             std::uint64_t seed);

/// Number of triples whose strict precedence fails (ties violate).
long violation_count(const TripleSet& T, const Configuration& viewers,
                     const Configuration& objects);
long violation_count(const TripleSet& T, const SphericalConfiguration& viewers,
                     const Configuration& objects);
long violation_count(const TripleSet& T, const Configuration& items);

/// True iff the full rank matrices of the two configuration pairs coincide.
bool rank_data_equal_point(const Configuration& a_viewers, const Configuration& a_objects,
                           const Configuration& b_viewers, const Configuration& b_objects);
bool rank_data_equal_vector(const SphericalConfiguration& a_viewers,
                            const Configuration& a_objects,
                            const SphericalConfiguration& b_viewers,
                            const Configuration& b_objects);
bool rank_data_equal_self(const Configuration& a_items, const Configuration& b_items);

/// Flat squared-distance matrix, vals[i*objects.count() + k].
std::vector<double> squared_distance_matrix(const Configuration& viewers,
                                            const Configuration& objects);
/// Flat inner-product matrix.
std::vector<double> inner_product_matrix(const Configuration& viewers,
                                         const Configuration& objects);

}  // namespace ordembed
