#ifndef CIMF_TESTS_FIXTURES_HPP
#define CIMF_TESTS_FIXTURES_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/rating_dataset.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return CIMF_TEST_DATA_DIR; }

inline const std::vector<std::string>& table1_attributes() {
    static const std::vector<std::string> names{"Director", "Actor", "Genre"};
    return names;
}

// Ids follow first appearance in the ratings: God Father 0 .. N by NW 3.
inline const std::vector<cimf::ItemRecord>& table1_items() {
    static const std::vector<cimf::ItemRecord> items{
        {"God Father", {"Scorsese", "De Niro", "Crime"}},
        {"Good Fellas", {"Coppola", "De Niro", "Crime"}},
        {"Vertigo", {"Hitchcock", "Stewart", "Thriller"}},
        {"N by NW", {"Hitchcock", "Grant", "Thriller"}},
    };
    return items;
}

inline cimf::AttributeSpace table1_space() {
    return cimf::AttributeSpace::build(table1_attributes(), table1_items());
}

inline cimf::RatingDataset table1_ratings() {
    cimf::RatingDataset d;
    const char* items[] = {"God Father", "Good Fellas", "Vertigo", "N by NW"};
    const int u1[] = {1, 3, 5, 4};
    const int u2[] = {4, 2, 1, 5};
    for (int i = 0; i < 4; ++i) d.add("u1", items[i], u1[i]);
    for (int i = 0; i < 4; ++i) d.add("u2", items[i], u2[i]);
    d.add("u3", "Good Fellas", 2);
    d.add("u3", "N by NW", 4);
    return d;
}

inline oracle::Table to_table(const std::vector<cimf::ItemRecord>& items) {
    oracle::Table t;
    for (const auto& r : items) t.push_back(r.values);
    return t;
}

// m items, J attributes, value labels drawn from a small alphabet.
inline std::vector<cimf::ItemRecord> random_items(std::mt19937_64& rng, std::size_t m, std::size_t J,
                                                  std::size_t max_values) {
    std::vector<cimf::ItemRecord> items;
    for (std::size_t i = 0; i < m; ++i) {
        cimf::ItemRecord r{"i" + std::to_string(i), {}};
        for (std::size_t j = 0; j < J; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, max_values - 1);
            r.values.push_back("v" + std::to_string(pick(rng)));
        }
        items.push_back(std::move(r));
    }
    return items;
}

inline std::vector<std::string> attribute_names(std::size_t J) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < J; ++j) names.push_back("a" + std::to_string(j));
    return names;
}

}  // namespace fixtures

#endif
