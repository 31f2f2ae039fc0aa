#ifndef CIMF_EVALUATION_HPP
#define CIMF_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/baselines.hpp"
#include "cimf/rating_dataset.hpp"

namespace cimf {

/// Record-level k-fold partition. Fold sizes differ by at most one.
struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignment;  // record -> fold

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Throws std::invalid_argument when k < 2 or k > records.
FoldPlan make_folds(std::size_t records, std::size_t k, std::uint64_t seed);

/// (actual, predicted) pairs. Both throw std::invalid_argument when empty.
double rmse(std::span<const std::pair<double, double>> pairs);
double mae(std::span<const std::pair<double, double>> pairs);

/// (reference - candidate) * 100 rounded to two decimals: the metric
/// difference in hundredths, which is how the comparison tables print it.
double improvement(double reference, double candidate);

/// Deterministic child seed for a named purpose, e.g. "folds".
std::uint64_t sub_seed(std::uint64_t base, std::string_view name);

struct EvalCell {
    MethodKind method = MethodKind::cimf;
    std::size_t dimension = 0;
    std::size_t fold = 0;
    bool ok = false;
    double rmse = 0.0;
    double mae = 0.0;
    double fallback_rate = 0.0;
    std::string error;
};

struct EvalPlan {
    std::vector<MethodKind> methods{MethodKind::cimf, MethodKind::plain_mf};
    std::vector<std::size_t> dimensions{10, 50, 100};
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    TrainingConfig training;
    CouplingConfig coupling;
    std::size_t cf_neighbors = 20;
    /// Grid cells evaluated concurrently.
    std::size_t workers = 1;
    /// When set, each cell writes its CSV row (and optionally predictions)
    /// here via write-then-rename.
    std::optional<std::filesystem::path> cell_dir;
    bool write_cell_predictions = false;
};

class EvalReport {
public:
    std::vector<EvalCell> cells;

    /// Mean over the folds of (method, dim); nullopt if any fold failed.
    std::optional<std::pair<double, double>> mean_rmse_mae(MethodKind method, std::size_t dimension) const;
    bool all_ok() const;

    /// "method,dim,fold,rmse,mae,fallback_rate"; failed cells print "failed".
    void write_csv(std::ostream& out) const;
    /// Aligned table: one row per (dimension, metric), one column per
    /// method, "value (improvement%)" against `target` when present.
    void write_table(std::ostream& out, MethodKind target = MethodKind::cimf) const;
};

/// Formats one CSV row as written by write_csv.
std::string csv_row(const EvalCell& cell);

/// Runs every (method, dimension, fold) cell. Predictions are clamped to
/// the rating range before scoring; cold pairs keep their fallback
/// prediction and count toward fallback_rate. Failures are captured per cell.
EvalReport evaluate(const RatingDataset& ratings, const AttributeSpace& space, const EvalPlan& plan);

}  // namespace cimf

#endif  // CIMF_EVALUATION_HPP
