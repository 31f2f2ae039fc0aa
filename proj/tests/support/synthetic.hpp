// Corpus where item attributes drive the ratings: each attribute value owns
// a latent vector, an item's taste profile is the sum over its values, and
// users rate items by affinity with that profile.
#ifndef CIMF_TESTS_SYNTHETIC_HPP
#define CIMF_TESTS_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/rating_dataset.hpp"

namespace synthetic {

struct Params {
    std::size_t users = 200;
    std::size_t items = 100;
    std::size_t attributes = 2;
    std::size_t values_per_attribute = 5;
    std::size_t rank = 3;
    double density = 0.05;
    double noise = 0.3;
    double item_jitter = 0.1;
};

struct Corpus {
    cimf::RatingDataset ratings{cimf::RatingRange{1.0, 5.0}};
    cimf::AttributeSpace space;
};

inline Corpus generate(const Params& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.rank * p.attributes));

    std::vector<std::vector<std::vector<double>>> value_vec(p.attributes);
    for (auto& per_attr : value_vec) {
        per_attr.resize(p.values_per_attribute);
        for (auto& v : per_attr) {
            v.resize(p.rank);
            for (double& x : v) x = unit(rng) * scale;
        }
    }

    std::vector<cimf::ItemRecord> records;
    std::vector<std::vector<double>> item_vec(p.items, std::vector<double>(p.rank, 0.0));
    std::uniform_int_distribution<std::size_t> pick(0, p.values_per_attribute - 1);
    for (std::size_t i = 0; i < p.items; ++i) {
        cimf::ItemRecord r{"item" + std::to_string(i), {}};
        for (std::size_t j = 0; j < p.attributes; ++j) {
            const std::size_t v = pick(rng);
            r.values.push_back("v" + std::to_string(v));
            for (std::size_t f = 0; f < p.rank; ++f) item_vec[i][f] += value_vec[j][v][f];
        }
        for (double& x : item_vec[i]) x += unit(rng) * p.item_jitter;
        records.push_back(std::move(r));
    }

    std::vector<std::vector<double>> user_vec(p.users, std::vector<double>(p.rank));
    for (auto& u : user_vec)
        for (double& x : u) x = unit(rng) * 1.5;

    // every user rates at least one item; the rest of the budget is uniform
    const std::size_t target = static_cast<std::size_t>(p.density * static_cast<double>(p.users * p.items));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<char> taken(p.users * p.items, 0);
    std::uniform_int_distribution<std::size_t> any_item(0, p.items - 1), any_user(0, p.users - 1);
    for (std::size_t u = 0; u < p.users; ++u) {
        const std::size_t i = any_item(rng);
        taken[u * p.items + i] = 1;
        pairs.emplace_back(u, i);
    }
    while (pairs.size() < target) {
        const std::size_t u = any_user(rng), i = any_item(rng);
        if (taken[u * p.items + i]) continue;
        taken[u * p.items + i] = 1;
        pairs.emplace_back(u, i);
    }

    Corpus c;
    for (const auto& r : records) c.ratings.intern_item(r.label);
    for (auto [u, i] : pairs) {
        double s = 3.0;
        for (std::size_t f = 0; f < p.rank; ++f) s += user_vec[u][f] * item_vec[i][f];
        s += unit(rng) * p.noise;
        const double value = std::clamp(std::round(s), 1.0, 5.0);
        c.ratings.add("user" + std::to_string(u), records[i].label, value);
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p.attributes; ++j) names.push_back("attr" + std::to_string(j));
    c.space = cimf::AttributeSpace::build(std::move(names), records);
    return c;
}

}  // namespace synthetic

#endif
