#ifndef CIMF_COUPLED_SIMILARITY_HPP
#define CIMF_COUPLED_SIMILARITY_HPP

#include <cstddef>
#include <vector>

#include "cimf/attribute_space.hpp"

namespace cimf {

struct CouplingConfig {
    /// Base attribute weights. Empty means uniform. For a target attribute j
    /// the weights of the other attributes are renormalized to unit sum.
    std::vector<double> gamma;
    /// Neighborhood size per item.
    std::size_t neighborhood_size = 20;
    /// Rescale each item's neighbor weights to unit sum.
    bool normalize_neighbors = true;

    /// Throws std::invalid_argument if gamma is malformed for `attribute_count`.
    void validate(std::size_t attribute_count) const;
};

/// Non-iid similarity between attribute values and between items, computed
/// from value frequencies (intra-coupling) and from co-occurrence with the
/// other attributes (inter-coupling).
///
/// All measures are symmetric bit for bit: arguments are put in canonical
/// order before evaluation.
class CoupledSimilarity {
public:
    /// Keeps a reference to `space`, which must outlive this object.
    CoupledSimilarity(const AttributeSpace& space, CouplingConfig config);

    const AttributeSpace& space() const { return space_; }
    const CouplingConfig& config() const { return config_; }

    /// Weight of attribute k when aggregating inter-coupling for attribute j.
    double gamma(AttributeId j, AttributeId k) const;

    /// |g(x)||g(y)| / (|g(x)| + |g(y)| + |g(x)||g(y)|)
    double iaavs(AttributeId j, ValueId x, ValueId y) const;

    /// Sum over values w of A_k of min(P_{k|j}(w|x), P_{k|j}(w|y)).
    double irs(AttributeId j, AttributeId k, ValueId x, ValueId y) const;

    /// gamma-weighted IRS over every attribute k != j; 1 when J == 1.
    double ieavs(AttributeId j, ValueId x, ValueId y) const;

    double cavs(AttributeId j, ValueId x, ValueId y) const;

    /// Coupled item similarity: sum of per-attribute CAVS. Lies in [0, J].
    double cis(ItemId a, ItemId b) const;

private:
    double cavs_uncached(AttributeId j, ValueId x, ValueId y) const;

    const AttributeSpace& space_;
    CouplingConfig config_;
    // gamma_[j][k], zero on the diagonal
    std::vector<std::vector<double>> gamma_;
    // dense CAVS tables for attributes with few values, upper triangle
    std::vector<std::vector<double>> cavs_table_;
};

/// One-hot attribute-vector measures used by the hybrid baselines.
enum class VectorMeasure { pearson, cosine, jaccard };

/// Pearson, cosine or Jaccard similarity of two items' one-hot encodings over
/// all (attribute, value) pairs, clamped to [0, 1]. Zero-variance Pearson is 0.
double attribute_vector_similarity(const AttributeSpace& space, ItemId a, ItemId b,
                                   VectorMeasure measure);

}  // namespace cimf

#endif  // CIMF_COUPLED_SIMILARITY_HPP
