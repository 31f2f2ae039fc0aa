#include "cimf/baselines.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "cimf/mf_trainer.hpp"

namespace cimf {

namespace {

constexpr MethodKind kAllMethods[] = {MethodKind::cimf, MethodKind::plain_mf, MethodKind::ubcf, MethodKind::ibcf,
                                      MethodKind::psmf, MethodKind::csmf,     MethodKind::jsmf};

}  // namespace

std::string_view to_string(MethodKind kind) {
    switch (kind) {
        case MethodKind::cimf: return "cimf";
        case MethodKind::plain_mf: return "plain-mf";
        case MethodKind::ubcf: return "ubcf";
        case MethodKind::ibcf: return "ibcf";
        case MethodKind::psmf: return "psmf";
        case MethodKind::csmf: return "csmf";
        case MethodKind::jsmf: return "jsmf";
    }
    return "unknown";
}

MethodKind parse_method_kind(std::string_view name) {
    for (MethodKind kind : kAllMethods)
        if (to_string(kind) == name) return kind;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected cimf, plain-mf, ubcf, ibcf, psmf, csmf or jsmf)");
}

bool is_matrix_factorization(MethodKind kind) { return kind != MethodKind::ubcf && kind != MethodKind::ibcf; }

std::optional<SimilarityKind> similarity_kind_for(MethodKind kind) {
    switch (kind) {
        case MethodKind::cimf: return SimilarityKind::coupled;
        case MethodKind::psmf: return SimilarityKind::pearson;
        case MethodKind::csmf: return SimilarityKind::cosine;
        case MethodKind::jsmf: return SimilarityKind::jaccard;
        default: return std::nullopt;
    }
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& predictions, const LabelIndex& users,
                       const LabelIndex& items) {
    char buf[64];
    for (const auto& p : predictions) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g", p.actual, p.predicted);
        out << users.label(p.user) << '\t' << items.label(p.item) << '\t' << buf << '\t' << (p.fallback ? 1 : 0)
            << '\n';
    }
}

NeighborhoodCf::NeighborhoodCf(const RatingDataset& train, Mode mode, std::size_t neighbors)
    : mode_(mode), k_(neighbors), global_mean_(train.mean()), matrix_(train) {
    if (neighbors == 0) throw std::invalid_argument("CF neighbor count must be at least 1");
    auto means = [](const std::vector<std::vector<RatingMatrix::Entry>>& lists) {
        std::vector<double> out(lists.size(), 0.0);
        for (std::size_t a = 0; a < lists.size(); ++a) {
            if (lists[a].empty()) continue;
            double s = 0.0;
            for (const auto& e : lists[a]) s += e.second;
            out[a] = s / static_cast<double>(lists[a].size());
        }
        return out;
    };
    user_mean_ = means(matrix_.by_user);
    item_mean_ = means(matrix_.by_item);
}

double NeighborhoodCf::similarity(std::size_t a, std::size_t b) const {
    const auto& lists = mode_ == Mode::user_based ? matrix_.by_user : matrix_.by_item;
    return corated_pearson(lists.at(a), lists.at(b));
}

Prediction NeighborhoodCf::predict(UserId u, ItemId i) const {
    if (u >= matrix_.by_user.size() || i >= matrix_.by_item.size() || matrix_.by_user[u].empty() ||
        matrix_.by_item[i].empty()) {
        return {global_mean_, true};
    }
    const bool user_based = mode_ == Mode::user_based;
    const std::size_t self = user_based ? u : i;
    // Candidates: users who rated i, or items rated by u.
    const auto& pool = user_based ? matrix_.by_item[i] : matrix_.by_user[u];
    const auto& means = user_based ? user_mean_ : item_mean_;

    struct Candidate {
        std::size_t id;
        double weight;
        double rating;
    };
    std::vector<Candidate> candidates;
    for (const auto& [other, rating] : pool) {
        if (other == self) continue;
        const double w = similarity(self, other);
        if (w > 0.0) candidates.push_back({other, w, rating});
    }
    if (candidates.empty()) return {means[self], false};
    auto better = [](const Candidate& a, const Candidate& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
    };
    const std::size_t keep = std::min(k_, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      better);
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < keep; ++c) {
        num += candidates[c].weight * (candidates[c].rating - means[candidates[c].id]);
        den += candidates[c].weight;
    }
    return {means[self] + num / den, false};
}

std::vector<PredictionRecord> run_method(const MethodSpec& spec, const RatingDataset& train,
                                         const AttributeSpace& space, const RatingDataset& test,
                                         const SimilarityModel* neighborhoods) {
    std::vector<PredictionRecord> out;
    if (test.empty()) return out;
    if (train.empty()) throw std::invalid_argument("empty training set");

    std::unordered_set<std::uint64_t> seen;
    auto key = [](UserId u, ItemId i) { return (static_cast<std::uint64_t>(u) << 32) ^ i; };
    for (const Rating& r : train.ratings()) seen.insert(key(r.user, r.item));
    for (const Rating& r : test.ratings()) {
        if (seen.contains(key(r.user, r.item)))
            throw std::invalid_argument("train and test sets share a (user, item) pair");
    }
    out.reserve(test.size());

    if (!is_matrix_factorization(spec.kind)) {
        NeighborhoodCf cf(train,
                          spec.kind == MethodKind::ubcf ? NeighborhoodCf::Mode::user_based
                                                        : NeighborhoodCf::Mode::item_based,
                          spec.cf_neighbors);
        for (const Rating& r : test.ratings()) {
            Prediction p = cf.predict(r.user, r.item);
            out.push_back({r.user, r.item, r.value, p.value, p.fallback});
        }
        return out;
    }

    TrainingConfig config = spec.mf;
    SimilarityModel built;
    const SimilarityModel* sim = nullptr;
    if (auto kind = similarity_kind_for(spec.kind)) {
        if (space.item_count() != train.item_count())
            throw std::invalid_argument("attribute space and ratings disagree on the item set");
        if (neighborhoods) {
            if (neighborhoods->kind() != *kind || neighborhoods->item_count() != train.item_count())
                throw std::invalid_argument("precomputed neighborhoods do not match the method");
            sim = neighborhoods;
        } else {
            built = build_neighborhoods(space, spec.coupling, *kind, config.workers);
            sim = &built;
        }
    } else {
        config.alpha = 0.0;
        built = SimilarityModel::without_neighbors(train.item_count());
        sim = &built;
    }

    TrainResult trained = cimf::train(train, *sim, config);
    for (const Rating& r : test.ratings()) {
        Prediction p = predict(trained.model, r.user, r.item);
        out.push_back({r.user, r.item, r.value, p.value, p.fallback});
    }
    return out;
}

}  // namespace cimf
