#ifndef CIMF_MF_TRAINER_HPP
#define CIMF_MF_TRAINER_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cimf/mf_model.hpp"
#include "cimf/rating_dataset.hpp"
#include "cimf/similarity_model.hpp"

namespace cimf {

/// Raised when the objective turns non-finite or keeps growing.
class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coupled objective:
///
///   L = 1/2 sum_{(u,i) in K} (R_ui - R_hat_ui)^2
///     + lambda/2 sum_{(u,i) in K} (|Q_i|^2 + |P_u|^2)
///     + alpha/2 sum_i |Q_i - sum_{j in N(i)} w_ij Q_j|^2
///
/// The lambda term runs over rated pairs, so a user with n_u ratings is
/// penalized n_u times. Items without neighbors contribute alpha/2 |Q_i|^2.
double objective(const FactorModel& model, const RatingDataset& ratings, const SimilarityModel& sim,
                 const TrainingConfig& config);

/// dL/dP_u = sum_{i rated by u} [(R_hat_ui - R_ui) Q_i + lambda P_u]
std::vector<double> grad_user(const FactorModel& model, const RatingMatrix& ratings,
                              const TrainingConfig& config, UserId u);

/// dL/dQ_i: rating and lambda terms as for users, plus
///   alpha (Q_i - sum_j w_ij Q_j) - alpha sum_{j : i in N(j)} w_ji (Q_j - sum_k w_jk Q_k)
std::vector<double> grad_item(const FactorModel& model, const RatingMatrix& ratings, const SimilarityModel& sim,
                              const TrainingConfig& config, ItemId i);

struct TrainResult {
    FactorModel model;
    double initial_objective = 0.0;
    /// Objective after each completed epoch.
    std::vector<double> trace;
    bool converged = false;
};

/// Full-batch gradient descent from a seeded Gaussian start. The offset is
/// the training mean. With alpha == 0 the coupling terms are skipped
/// entirely, which makes the run identical to plain regularized MF.
TrainResult train(const RatingDataset& ratings, const SimilarityModel& sim, const TrainingConfig& config);

}  // namespace cimf

#endif  // CIMF_MF_TRAINER_HPP
