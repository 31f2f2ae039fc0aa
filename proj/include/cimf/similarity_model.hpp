#ifndef CIMF_SIMILARITY_MODEL_HPP
#define CIMF_SIMILARITY_MODEL_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/coupled_similarity.hpp"
#include "cimf/rating_dataset.hpp"

namespace cimf {

enum class SimilarityKind { coupled, pearson, cosine, jaccard, rating_pearson };

std::string_view to_string(SimilarityKind kind);
/// Throws std::invalid_argument for an unknown name.
SimilarityKind parse_similarity_kind(std::string_view name);

struct Neighbor {
    ItemId item;
    double weight;

    bool operator==(const Neighbor&) const = default;
};

/// Per-item weighted neighborhoods plus the reverse index (which items list
/// a given item as a neighbor) that the item gradient needs.
class SimilarityModel {
public:
    SimilarityModel() = default;

    /// Throws std::invalid_argument for self-neighbors, out-of-range ids or
    /// non-finite weights.
    SimilarityModel(SimilarityKind kind, std::vector<std::vector<Neighbor>> neighbors);

    /// A model over `items` items where nobody has neighbors.
    static SimilarityModel without_neighbors(std::size_t items);

    SimilarityKind kind() const { return kind_; }
    std::size_t item_count() const { return neighbors_.size(); }
    std::span<const Neighbor> neighbors(ItemId i) const { return neighbors_.at(i); }
    /// Entries (j, w_ji) for every j whose neighborhood contains i, ascending j.
    std::span<const Neighbor> reverse(ItemId i) const { return reverse_.at(i); }
    bool has_neighbors() const;

    /// Stable 64-bit FNV-1a digest of kind and neighbor lists, as 16 hex digits.
    std::string fingerprint() const;

    /// "item<TAB>neighbor<TAB>weight" lines, weights with 12 significant digits.
    void dump(std::ostream& out, const LabelIndex& items) const;
    static SimilarityModel load(std::istream& in, const LabelIndex& items);

    bool operator==(const SimilarityModel& other) const {
        return kind_ == other.kind_ && neighbors_ == other.neighbors_;
    }

private:
    SimilarityKind kind_ = SimilarityKind::coupled;
    std::vector<std::vector<Neighbor>> neighbors_;
    std::vector<std::vector<Neighbor>> reverse_;
};

/// Top-K neighborhoods under an attribute-based measure (coupled or one of the
/// one-hot vector measures). Candidates with zero similarity are skipped; ties
/// go to the smaller item id. Throws std::invalid_argument when K >= m.
SimilarityModel build_neighborhoods(const AttributeSpace& space, const CouplingConfig& config,
                                    SimilarityKind kind, std::size_t workers = 1);

/// Top-K neighborhoods under Pearson correlation of item rating columns.
SimilarityModel build_rating_neighborhoods(const RatingDataset& ratings, std::size_t neighborhood_size,
                                           bool normalize, std::size_t workers = 1);

/// Pearson correlation over the ids present in both sparse vectors (sorted by
/// id). Returns 0 below `min_overlap` shared ids or when either side has zero
/// variance on the overlap.
double corated_pearson(std::span<const RatingMatrix::Entry> a, std::span<const RatingMatrix::Entry> b,
                       std::size_t min_overlap = 2);

}  // namespace cimf

#endif  // CIMF_SIMILARITY_MODEL_HPP
