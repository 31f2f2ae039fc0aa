#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "cimf/attribute_space.hpp"
#include "fixtures.hpp"

using namespace cimf;

TEST(AttributeSpace, Table1Shape) {
    auto s = fixtures::table1_space();
    EXPECT_EQ(s.item_count(), 4u);
    EXPECT_EQ(s.attribute_count(), 3u);
    EXPECT_EQ(s.value_count(*s.find_attribute("Director")), 3u);
    EXPECT_EQ(s.value_count(*s.find_attribute("Actor")), 3u);
    EXPECT_EQ(s.value_count(*s.find_attribute("Genre")), 2u);
    EXPECT_EQ(*s.find_item("Vertigo"), 2u);
}

TEST(AttributeSpace, InvertedIndex) {
    auto s = fixtures::table1_space();
    const auto actor = *s.find_attribute("Actor");
    const auto deniro = *s.find_value(actor, "De Niro");
    auto g = s.items_with(actor, deniro);
    EXPECT_EQ(std::vector<ItemId>(g.begin(), g.end()), (std::vector<ItemId>{0, 1}));
    EXPECT_EQ(s.value_frequency(actor, deniro), 2u);
    const auto director = *s.find_attribute("Director");
    EXPECT_EQ(s.value_frequency(director, *s.find_value(director, "Hitchcock")), 2u);
    EXPECT_THROW(s.value_frequency(director, 99), std::domain_error);
}

TEST(AttributeSpace, ConditionalProbability) {
    auto s = fixtures::table1_space();
    const auto director = *s.find_attribute("Director");
    const auto actor = *s.find_attribute("Actor");
    const auto genre = *s.find_attribute("Genre");
    // every De Niro film here is a crime film
    EXPECT_DOUBLE_EQ(s.cond_prob(genre, actor, *s.find_value(genre, "Crime"), *s.find_value(actor, "De Niro")), 1.0);
    EXPECT_DOUBLE_EQ(
        s.cond_prob(actor, director, *s.find_value(actor, "Stewart"), *s.find_value(director, "Hitchcock")), 0.5);
    EXPECT_DOUBLE_EQ(
        s.cond_prob(actor, director, *s.find_value(actor, "De Niro"), *s.find_value(director, "Hitchcock")), 0.0);
    EXPECT_THROW(s.cond_prob(actor, actor, 0, 0), std::domain_error);
}

TEST(AttributeSpace, ConditionalDistributionsSumToOne) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto items = fixtures::random_items(rng, 1 + rng() % 12, 2 + rng() % 3, 1 + rng() % 5);
        auto s = AttributeSpace::build(fixtures::attribute_names(items[0].values.size()), items);
        for (AttributeId j = 0; j < s.attribute_count(); ++j)
            for (AttributeId k = 0; k < s.attribute_count(); ++k) {
                if (j == k) continue;
                for (ValueId x = 0; x < s.value_count(j); ++x) {
                    double sum = 0.0;
                    for (ValueId w = 0; w < s.value_count(k); ++w) sum += s.cond_prob(k, j, w, x);
                    EXPECT_NEAR(sum, 1.0, 1e-12);
                }
            }
    }
}

TEST(AttributeSpace, ValueSetsPartitionItems) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto items = fixtures::random_items(rng, 1 + rng() % 15, 1 + rng() % 3, 1 + rng() % 6);
        auto s = AttributeSpace::build(fixtures::attribute_names(items[0].values.size()), items);
        for (AttributeId j = 0; j < s.attribute_count(); ++j) {
            std::vector<int> seen(s.item_count(), 0);
            for (ValueId x = 0; x < s.value_count(j); ++x) {
                EXPECT_GT(s.value_frequency(j, x), 0u);
                for (ItemId i : s.items_with(j, x)) {
                    ++seen[i];
                    EXPECT_EQ(s.value_of(i, j), x);
                }
            }
            for (int c : seen) EXPECT_EQ(c, 1);
        }
    }
}

TEST(AttributeSpace, CooccurrenceCountsSumToFrequency) {
    auto s = fixtures::table1_space();
    for (AttributeId j = 0; j < 3; ++j)
        for (AttributeId k = 0; k < 3; ++k) {
            if (j == k) continue;
            for (ValueId x = 0; x < s.value_count(j); ++x) {
                std::size_t total = 0;
                for (auto [w, c] : s.cooccurrence(j, x, k)) {
                    EXPECT_EQ(c, s.pair_count(j, x, k, w));
                    total += c;
                }
                EXPECT_EQ(total, s.value_frequency(j, x));
            }
        }
}

TEST(AttributeSpace, MissingValueIsItsOwnValue) {
    std::vector<ItemRecord> items{{"a", {"x", ""}}, {"b", {"x", ""}}, {"c", {"y", "p"}}};
    auto s = AttributeSpace::build({"one", "two"}, items);
    auto missing = s.find_value(1, kMissingValue);
    ASSERT_TRUE(missing.has_value());
    EXPECT_EQ(s.value_frequency(1, *missing), 2u);
}

TEST(AttributeSpace, RejectsBadRecords) {
    std::vector<ItemRecord> dup{{"a", {"x"}}, {"a", {"y"}}};
    EXPECT_THROW(AttributeSpace::build({"one"}, dup), std::invalid_argument);
    std::vector<ItemRecord> ragged{{"a", {"x"}}, {"b", {"y", "z"}}};
    try {
        AttributeSpace::build({"one"}, ragged);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos) << e.what();
    }
}

TEST(AttributeSpace, EmptySpace) {
    auto s = AttributeSpace::build({"one"}, {});
    EXPECT_EQ(s.item_count(), 0u);
    EXPECT_EQ(s.value_count(0), 0u);
}

TEST(AttributeSpace, DumpRoundTrip) {
    auto s = fixtures::table1_space();
    std::stringstream buf;
    s.dump(buf);
    auto back = AttributeSpace::load_dump(buf);
    ASSERT_EQ(back.item_count(), s.item_count());
    ASSERT_EQ(back.attribute_count(), s.attribute_count());
    for (ItemId i = 0; i < s.item_count(); ++i) {
        EXPECT_EQ(back.item_label(i), s.item_label(i));
        for (AttributeId j = 0; j < s.attribute_count(); ++j)
            EXPECT_EQ(back.value_label(j, back.value_of(i, j)), s.value_label(j, s.value_of(i, j)));
    }
}
