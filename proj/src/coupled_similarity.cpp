#include "cimf/coupled_similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace cimf {

namespace {

// Attributes with at most this many values get a precomputed CAVS table.
constexpr std::size_t kMaxTabulatedValues = 1024;

std::size_t triangle_index(ValueId x, ValueId y) {
    // requires x <= y
    return y * (y + 1) / 2 + x;
}

}  // namespace

void CouplingConfig::validate(std::size_t attribute_count) const {
    if (neighborhood_size == 0) throw std::invalid_argument("neighborhood size must be at least 1");
    if (gamma.empty()) return;
    if (gamma.size() != attribute_count) {
        throw std::invalid_argument("gamma has " + std::to_string(gamma.size()) +
                                    " weights for " + std::to_string(attribute_count) + " attributes");
    }
    for (double g : gamma) {
        if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("gamma weights must lie in [0, 1]");
    }
    if (attribute_count < 2) return;
    for (std::size_t j = 0; j < attribute_count; ++j) {
        double rest = 0.0;
        for (std::size_t k = 0; k < attribute_count; ++k)
            if (k != j) rest += gamma[k];
        if (rest <= 0.0) {
            throw std::invalid_argument("gamma weights of attributes other than " + std::to_string(j) +
                                        " sum to zero");
        }
    }
}

CoupledSimilarity::CoupledSimilarity(const AttributeSpace& space, CouplingConfig config)
    : space_(space), config_(std::move(config)) {
    const std::size_t J = space_.attribute_count();
    config_.validate(J);

    gamma_.assign(J, std::vector<double>(J, 0.0));
    for (AttributeId j = 0; j < J; ++j) {
        double rest = 0.0;
        for (AttributeId k = 0; k < J; ++k)
            if (k != j) rest += config_.gamma.empty() ? 1.0 : config_.gamma[k];
        for (AttributeId k = 0; k < J; ++k) {
            if (k == j) continue;
            double base = config_.gamma.empty() ? 1.0 : config_.gamma[k];
            gamma_[j][k] = base / rest;
        }
    }

    cavs_table_.resize(J);
    for (AttributeId j = 0; j < J; ++j) {
        const std::size_t v = space_.value_count(j);
        if (v > kMaxTabulatedValues) continue;
        auto& table = cavs_table_[j];
        table.resize(v * (v + 1) / 2);
        for (ValueId y = 0; y < v; ++y)
            for (ValueId x = 0; x <= y; ++x) table[triangle_index(x, y)] = cavs_uncached(j, x, y);
    }
}

double CoupledSimilarity::gamma(AttributeId j, AttributeId k) const {
    if (j >= gamma_.size() || k >= gamma_.size()) throw std::domain_error("unknown attribute id");
    return gamma_[j][k];
}

double CoupledSimilarity::iaavs(AttributeId j, ValueId x, ValueId y) const {
    if (x > y) std::swap(x, y);
    const double fx = static_cast<double>(space_.value_frequency(j, x));
    const double fy = static_cast<double>(space_.value_frequency(j, y));
    return (fx * fy) / (fx + fy + fx * fy);
}

double CoupledSimilarity::irs(AttributeId j, AttributeId k, ValueId x, ValueId y) const {
    if (j == k) throw std::domain_error("inter-coupled similarity needs two distinct attributes");
    if (x > y) std::swap(x, y);
    const auto px = space_.cooccurrence(j, x, k);
    const auto py = space_.cooccurrence(j, y, k);
    const double nx = static_cast<double>(space_.value_frequency(j, x));
    const double ny = static_cast<double>(space_.value_frequency(j, y));

    // Values of A_k absent from either profile contribute min(., 0) = 0.
    double sum = 0.0;
    auto a = px.begin();
    auto b = py.begin();
    while (a != px.end() && b != py.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            sum += std::min(static_cast<double>(a->second) / nx, static_cast<double>(b->second) / ny);
            ++a;
            ++b;
        }
    }
    return sum;
}

double CoupledSimilarity::ieavs(AttributeId j, ValueId x, ValueId y) const {
    const std::size_t J = space_.attribute_count();
    if (j >= J) throw std::domain_error("unknown attribute id " + std::to_string(j));
    if (x > y) std::swap(x, y);
    if (J == 1) {
        space_.value_frequency(j, x);
        space_.value_frequency(j, y);
        return 1.0;
    }
    double sum = 0.0;
    for (AttributeId k = 0; k < J; ++k) {
        if (k == j) continue;
        sum += gamma_[j][k] * irs(j, k, x, y);
    }
    return sum;
}

double CoupledSimilarity::cavs_uncached(AttributeId j, ValueId x, ValueId y) const {
    return iaavs(j, x, y) * ieavs(j, x, y);
}

double CoupledSimilarity::cavs(AttributeId j, ValueId x, ValueId y) const {
    if (x > y) std::swap(x, y);
    if (j < cavs_table_.size() && !cavs_table_[j].empty()) {
        if (y >= space_.value_count(j)) throw std::domain_error("unknown attribute value");
        return cavs_table_[j][triangle_index(x, y)];
    }
    return cavs_uncached(j, x, y);
}

double CoupledSimilarity::cis(ItemId a, ItemId b) const {
    if (a >= space_.item_count() || b >= space_.item_count())
        throw std::domain_error("unknown item id");
    if (a > b) std::swap(a, b);
    const auto ra = space_.row(a);
    const auto rb = space_.row(b);
    double sum = 0.0;
    for (AttributeId k = 0; k < ra.size(); ++k) sum += cavs(k, ra[k], rb[k]);
    return sum;
}

double attribute_vector_similarity(const AttributeSpace& space, ItemId a, ItemId b,
                                   VectorMeasure measure) {
    const auto ra = space.row(a);
    const auto rb = space.row(b);
    const double J = static_cast<double>(ra.size());
    double shared = 0.0;
    for (std::size_t k = 0; k < ra.size(); ++k)
        if (ra[k] == rb[k]) shared += 1.0;

    switch (measure) {
        case VectorMeasure::cosine:
            // both encodings have exactly J ones
            return J == 0.0 ? 0.0 : shared / J;
        case VectorMeasure::jaccard: {
            const double uni = 2.0 * J - shared;
            return uni == 0.0 ? 0.0 : shared / uni;
        }
        case VectorMeasure::pearson: {
            double D = 0.0;
            for (AttributeId k = 0; k < ra.size(); ++k) D += static_cast<double>(space.value_count(k));
            // cov = shared - J^2/D, var = J - J^2/D for both encodings
            const double num = D * shared - J * J;
            const double den = D * J - J * J;
            if (den <= 0.0) return 0.0;
            return std::clamp(num / den, 0.0, 1.0);
        }
    }
    throw std::invalid_argument("unknown vector measure");
}

}  // namespace cimf
