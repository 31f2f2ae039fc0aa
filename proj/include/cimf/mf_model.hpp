#ifndef CIMF_MF_MODEL_HPP
#define CIMF_MF_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cimf/rating_dataset.hpp"

namespace cimf {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

struct TrainingConfig {
    std::size_t dimension = 10;
    double lambda = 0.05;
    double alpha = 0.1;
    double learning_rate = 0.005;
    std::size_t max_epochs = 200;
    /// Stop when |L_prev - L| / |L_prev| drops below this.
    double convergence_tol = 1e-5;
    std::uint64_t seed = 42;
    double init_scale = 0.1;
    /// Threads used for gradient accumulation; results do not depend on it.
    std::size_t workers = 1;

    /// Throws std::invalid_argument on out-of-domain values.
    void validate() const;

    bool operator==(const TrainingConfig&) const = default;
};

/// R_hat(u, i) = offset + <users.row(u), items.row(i)>
struct FactorModel {
    Matrix users;  // n x d
    Matrix items;  // m x d
    double offset = 0.0;
    /// Entities the model has information about. Predictions touching an
    /// unknown user or item fall back to the offset.
    std::vector<bool> user_known;
    std::vector<bool> item_known;

    FactorModel() = default;
    FactorModel(std::size_t n, std::size_t m, std::size_t d, double offset = 0.0);

    std::size_t dimension() const { return users.cols; }
    std::size_t user_count() const { return users.rows; }
    std::size_t item_count() const { return items.rows; }

    bool operator==(const FactorModel&) const = default;
};

struct Prediction {
    double value;
    bool fallback;
};

/// Unclamped model prediction. Out-of-range ids and unknown entities give
/// the offset with the fallback flag set.
Prediction predict(const FactorModel& model, UserId u, ItemId i);

double dot(std::span<const double> a, std::span<const double> b);

/// Trained model plus everything needed to serve predictions by label.
struct Checkpoint {
    FactorModel model;
    TrainingConfig config;
    std::string similarity_fingerprint;
    std::vector<std::string> user_labels;
    std::vector<std::string> item_labels;
    RatingRange range;
};

/// Text format; doubles are written as hex floats so reading back is exact.
void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

}  // namespace cimf

#endif  // CIMF_MF_MODEL_HPP
