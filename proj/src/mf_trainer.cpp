#include "cimf/mf_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <sstream>
#include <string>

#include "cimf/parallel.hpp"

namespace cimf {

namespace {

void check_shapes(const FactorModel& model, std::size_t users, std::size_t items, const SimilarityModel& sim) {
    if (model.user_count() != users || model.item_count() != items) {
        std::ostringstream msg;
        msg << "model shape " << model.user_count() << "x" << model.item_count() << " does not match data "
            << users << "x" << items;
        throw std::invalid_argument(msg.str());
    }
    if (sim.item_count() != items) {
        throw std::invalid_argument("similarity model covers " + std::to_string(sim.item_count()) +
                                    " items, data has " + std::to_string(items));
    }
}

// out = Q_i - sum_{j in N(i)} w_ij Q_j
void coupling_residual(const Matrix& q, const SimilarityModel& sim, ItemId i, std::span<double> out) {
    auto qi = q.row(i);
    std::copy(qi.begin(), qi.end(), out.begin());
    for (const Neighbor& n : sim.neighbors(i)) {
        auto qj = q.row(n.item);
        for (std::size_t f = 0; f < out.size(); ++f) out[f] -= n.weight * qj[f];
    }
}

void user_gradient(const FactorModel& model, std::span<const RatingMatrix::Entry> rated, double lambda,
                   UserId u, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    auto pu = model.users.row(u);
    for (const auto& [item, r] : rated) {
        auto qi = model.items.row(item);
        const double e = model.offset + dot(pu, qi) - r;
        for (std::size_t f = 0; f < g.size(); ++f) g[f] += e * qi[f];
    }
    const double reg = lambda * static_cast<double>(rated.size());
    for (std::size_t f = 0; f < g.size(); ++f) g[f] += reg * pu[f];
}

// `residual(j)` must return the coupling residual of item j.
template <class Residual>
void item_gradient(const FactorModel& model, std::span<const RatingMatrix::Entry> raters, const SimilarityModel& sim,
                   const TrainingConfig& config, ItemId i, Residual&& residual, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    auto qi = model.items.row(i);
    for (const auto& [user, r] : raters) {
        auto pu = model.users.row(user);
        const double e = model.offset + dot(pu, qi) - r;
        for (std::size_t f = 0; f < g.size(); ++f) g[f] += e * pu[f];
    }
    const double reg = config.lambda * static_cast<double>(raters.size());
    for (std::size_t f = 0; f < g.size(); ++f) g[f] += reg * qi[f];

    if (config.alpha == 0.0) return;
    std::span<const double> own = residual(i);
    for (std::size_t f = 0; f < g.size(); ++f) g[f] += config.alpha * own[f];
    for (const Neighbor& back : sim.reverse(i)) {
        std::span<const double> other = residual(back.item);
        for (std::size_t f = 0; f < g.size(); ++f) g[f] -= config.alpha * back.weight * other[f];
    }
}

}  // namespace

double objective(const FactorModel& model, const RatingDataset& ratings, const SimilarityModel& sim,
                 const TrainingConfig& config) {
    check_shapes(model, ratings.user_count(), ratings.item_count(), sim);
    double data = 0.0;
    double reg = 0.0;
    for (const Rating& r : ratings.ratings()) {
        auto pu = model.users.row(r.user);
        auto qi = model.items.row(r.item);
        const double e = r.value - (model.offset + dot(pu, qi));
        data += e * e;
        reg += dot(qi, qi) + dot(pu, pu);
    }
    double loss = 0.5 * data + 0.5 * config.lambda * reg;
    if (config.alpha != 0.0) {
        std::vector<double> res(model.dimension());
        double coupling = 0.0;
        for (ItemId i = 0; i < model.item_count(); ++i) {
            coupling_residual(model.items, sim, i, res);
            coupling += dot(res, res);
        }
        loss += 0.5 * config.alpha * coupling;
    }
    return loss;
}

std::vector<double> grad_user(const FactorModel& model, const RatingMatrix& ratings, const TrainingConfig& config,
                              UserId u) {
    if (u >= model.user_count() || u >= ratings.by_user.size()) throw std::out_of_range("unknown user id");
    std::vector<double> g(model.dimension());
    user_gradient(model, ratings.by_user[u], config.lambda, u, g);
    return g;
}

std::vector<double> grad_item(const FactorModel& model, const RatingMatrix& ratings, const SimilarityModel& sim,
                              const TrainingConfig& config, ItemId i) {
    if (i >= model.item_count() || i >= ratings.by_item.size()) throw std::out_of_range("unknown item id");
    check_shapes(model, ratings.by_user.size(), ratings.by_item.size(), sim);
    const std::size_t d = model.dimension();
    std::vector<std::vector<double>> cache;
    auto residual = [&](ItemId j) -> std::span<const double> {
        cache.emplace_back(d);
        coupling_residual(model.items, sim, j, cache.back());
        return cache.back();
    };
    std::vector<double> g(d);
    item_gradient(model, ratings.by_item[i], sim, config, i, residual, g);
    return g;
}

TrainResult train(const RatingDataset& ratings, const SimilarityModel& sim, const TrainingConfig& config) {
    config.validate();
    if (ratings.empty()) throw std::invalid_argument("cannot train on an empty rating set");
    const std::size_t n = ratings.user_count();
    const std::size_t m = ratings.item_count();
    const std::size_t d = config.dimension;
    if (d > std::min(n, m)) {
        throw std::invalid_argument("latent dimension " + std::to_string(d) + " exceeds min(users, items) = " +
                                    std::to_string(std::min(n, m)));
    }
    if (sim.item_count() != m) throw std::invalid_argument("similarity model does not cover the item set");

    const RatingMatrix matrix(ratings);
    TrainResult result;
    FactorModel& model = result.model;
    model = FactorModel(n, m, d, ratings.mean());

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, config.init_scale);
    if (config.init_scale > 0.0) {
        for (double& v : model.users.data) v = gauss(rng);
        for (double& v : model.items.data) v = gauss(rng);
    }
    const bool coupled = config.alpha != 0.0;
    for (UserId u = 0; u < n; ++u) model.user_known[u] = !matrix.by_user[u].empty();
    for (ItemId i = 0; i < m; ++i)
        model.item_known[i] = !matrix.by_item[i].empty() || (coupled && !sim.neighbors(i).empty());

    Matrix grad_p(n, d), grad_q(m, d), residuals(coupled ? m : 0, d);
    result.initial_objective = objective(model, ratings, sim, config);
    double previous = result.initial_objective;
    std::size_t rising = 0;

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        parallel_for(n, config.workers, [&](UserId u) {
            user_gradient(model, matrix.by_user[u], config.lambda, u, grad_p.row(u));
        });
        if (coupled) {
            parallel_for(m, config.workers,
                         [&](ItemId i) { coupling_residual(model.items, sim, i, residuals.row(i)); });
        }
        auto residual = [&](ItemId j) -> std::span<const double> { return residuals.row(j); };
        parallel_for(m, config.workers, [&](ItemId i) {
            item_gradient(model, matrix.by_item[i], sim, config, i, residual, grad_q.row(i));
        });

        for (std::size_t k = 0; k < grad_p.data.size(); ++k) model.users.data[k] -= config.learning_rate * grad_p.data[k];
        for (std::size_t k = 0; k < grad_q.data.size(); ++k) model.items.data[k] -= config.learning_rate * grad_q.data[k];

        const double current = objective(model, ratings, sim, config);
        if (!std::isfinite(current)) {
            throw TrainingDiverged("objective became non-finite at epoch " + std::to_string(epoch + 1) +
                                   "; use a smaller learning rate");
        }
        result.trace.push_back(current);
        rising = current > previous ? rising + 1 : 0;
        if (rising >= 5) {
            throw TrainingDiverged("objective grew for 5 consecutive epochs (epoch " + std::to_string(epoch + 1) +
                                   "); use a smaller learning rate");
        }
        const double change = std::abs(previous - current) / std::max(std::abs(previous), 1e-300);
        previous = current;
        if (change < config.convergence_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace cimf
