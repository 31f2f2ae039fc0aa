#ifndef CIMF_BASELINES_HPP
#define CIMF_BASELINES_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/coupled_similarity.hpp"
#include "cimf/mf_model.hpp"
#include "cimf/rating_dataset.hpp"
#include "cimf/similarity_model.hpp"

namespace cimf {

enum class MethodKind { cimf, plain_mf, ubcf, ibcf, psmf, csmf, jsmf };

std::string_view to_string(MethodKind kind);
/// Throws std::invalid_argument for an unknown name.
MethodKind parse_method_kind(std::string_view name);
bool is_matrix_factorization(MethodKind kind);
/// Attribute similarity the MF-family method regularizes with; none for
/// plain-mf and the CF methods.
std::optional<SimilarityKind> similarity_kind_for(MethodKind kind);

struct MethodSpec {
    MethodKind kind = MethodKind::cimf;
    TrainingConfig mf;
    CouplingConfig coupling;
    std::size_t cf_neighbors = 20;
};

struct PredictionRecord {
    UserId user;
    ItemId item;
    double actual;
    double predicted;
    bool fallback;
};

/// Writes "user<TAB>item<TAB>actual<TAB>predicted<TAB>fallback_flag" lines.
void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& predictions,
                       const LabelIndex& users, const LabelIndex& items);

/// Mean-centered K-nearest-neighbor collaborative filtering over co-rating
/// Pearson weights (at least two co-ratings, positive weights only).
class NeighborhoodCf {
public:
    enum class Mode { user_based, item_based };

    NeighborhoodCf(const RatingDataset& train, Mode mode, std::size_t neighbors);

    /// Unclamped estimate. Unknown users or items give the global mean with
    /// the fallback flag; no qualifying neighbor gives the user (or item) mean.
    Prediction predict(UserId u, ItemId i) const;

    double similarity(std::size_t a, std::size_t b) const;

private:
    const RatingMatrix& rows() const;

    Mode mode_;
    std::size_t k_;
    double global_mean_;
    RatingMatrix matrix_;
    std::vector<double> user_mean_;
    std::vector<double> item_mean_;
};

/// Runs one method on `train` and predicts every pair of `test`. For the
/// MF family, `neighborhoods` may carry a precomputed similarity model of
/// the matching kind; otherwise one is built from `space`. Test predictions
/// are not clamped here.
std::vector<PredictionRecord> run_method(const MethodSpec& spec, const RatingDataset& train,
                                         const AttributeSpace& space, const RatingDataset& test,
                                         const SimilarityModel* neighborhoods = nullptr);

}  // namespace cimf

#endif  // CIMF_BASELINES_HPP
