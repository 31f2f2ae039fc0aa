#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cimf/ingestion.hpp"
#include "fixtures.hpp"

using namespace cimf;
namespace fs = std::filesystem;

namespace {

class Files : public testing::Test {
protected:
    fs::path dir;
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("cimf_ingest_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path write(const std::string& name, const std::string& content) {
        std::ofstream(dir / name, std::ios::binary) << content;
        return dir / name;
    }
};

}  // namespace

TEST_F(Files, MovieLensLines) {
    auto r = write("ratings.dat", "1::1193::5::978300760\n1::661::3::978302109\n2::1193::4::978298413\n");
    auto m = write("movies.dat", "1193::One Flew Over the Cuckoo's Nest (1975)::Drama\n"
                                 "661::James and the Giant Peach (1996)::Musical|Animation|Children's\n");
    auto c = load_movielens(r, m);
    EXPECT_EQ(c.ratings.size(), 3u);
    EXPECT_EQ(c.ratings.user_count(), 2u);
    EXPECT_EQ(c.ratings.item_count(), 2u);
    EXPECT_EQ(c.ratings[0].value, 5.0);
    const auto peach = *c.space.find_item("661");
    EXPECT_EQ(c.space.value_label(0, c.space.value_of(peach, 0)), "Animation|Children's|Musical");
    EXPECT_EQ(c.space.attribute_name(0), "genre");
}

TEST_F(Files, MovieLensErrors) {
    auto m = write("movies.dat", "1::A::Drama\n");
    EXPECT_THROW(load_movielens(write("empty.dat", ""), m), ParseError);
    try {
        load_movielens(write("bad.dat", "1::1::5::0\n1::1::9::0\n"), m);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("bad.dat"), std::string::npos);
    }
    auto c = load_movielens(write("orphan.dat", "1::2::5::0\n"), m);
    EXPECT_EQ(c.stats.items_without_metadata, 1u);
    EXPECT_EQ(c.space.value_label(0, c.space.value_of(0, 0)), kMissingValue);
}

TEST_F(Files, BookCrossing) {
    auto r = write("ratings.csv",
                   "\"User-ID\";\"ISBN\";\"Book-Rating\"\n"
                   "\"276725\";\"034545104X\";\"0\"\n"
                   "\"276726\";\"0155061224\";\"5\"\n"
                   "\"276727\";\"0446520802\";\"0\"\n"
                   "\"276729\";\"052165615X\";\"3\"\n"
                   "\"276729\";\"0000000000\";\"7\"\n");
    auto b = write("books.csv",
                   "\"ISBN\";\"Book-Title\";\"Book-Author\";\"Year-Of-Publication\";\"Publisher\";\"Image-URL-S\"\n"
                   "\"0155061224\";\"Rites of Passage\";\"Judith Rae\";\"2001\";\"Heinle\";\"http://x\"\n"
                   "\"052165615X\";\"Help!: Level 1\";\"Philip Prowse\";\"1999\";\"\";\"http://y\"\n"
                   "\"0000000001\";\"Broken \\\"row\";\"A\";\"1\";\"P\";\"u\";\"extra\"\n");
    auto c = load_bookcrossing(r, b);
    EXPECT_EQ(c.stats.rating_lines, 5u);
    EXPECT_EQ(c.stats.excluded_zero_ratings, 2u);
    EXPECT_EQ(c.ratings.size(), 3u);
    EXPECT_EQ(c.stats.skipped_item_rows, 1u);
    EXPECT_EQ(c.stats.items_without_metadata, 1u);
    const auto help = *c.space.find_item("052165615X");
    const auto publisher = *c.space.find_attribute("publisher");
    EXPECT_EQ(c.space.value_label(publisher, c.space.value_of(help, publisher)), kMissingValue);
    EXPECT_EQ(c.space.value_label(0, c.space.value_of(help, 0)), "Philip Prowse");
    EXPECT_EQ(c.ratings.range().max, 10.0);
}

TEST_F(Files, BookCrossingBadQuoteNamesLine) {
    auto b = write("books.csv", "\"ISBN\";\"Book-Title\";\"Book-Author\";\"Year-Of-Publication\";\"Publisher\"\n");
    auto r = write("ratings.csv", "\"1\";\"2\";\"5\"\n\"1\";\"3;\"6\"\n");
    try {
        load_bookcrossing(r, b);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST_F(Files, GenericTable1) {
    auto c = load_generic(fixtures::data_dir() / "table1" / "ratings.tsv", fixtures::data_dir() / "table1" / "items.tsv",
                          GenericSchema{});
    EXPECT_EQ(c.ratings.user_count(), 3u);
    EXPECT_EQ(c.ratings.item_count(), 4u);
    EXPECT_EQ(c.ratings.size(), 10u);
    EXPECT_EQ(c.space.attribute_count(), 3u);
    for (ItemId i = 0; i < 4; ++i) EXPECT_EQ(c.space.item_label(i), c.ratings.items().label(i));
    EXPECT_EQ(c.space.item_label(0), "God Father");
}

TEST_F(Files, GenericErrors) {
    auto items = write("items.tsv", "item\tgenre\na\tx\n");
    EXPECT_THROW(load_generic(write("r1.tsv", "user\titem\trating\nu\ta\t6\n"), items, GenericSchema{}), ParseError);
    EXPECT_THROW(load_generic(write("r2.tsv", "user\titem\trating\nu\ta\n"), items, GenericSchema{}), ParseError);
    EXPECT_THROW(load_generic(write("r3.tsv", "user\tthing\trating\nu\ta\t3\n"), items, GenericSchema{}), ParseError);
    auto ok = write("r4.tsv", "user\titem\trating\nu\ta\t3\nu\ta\t4\n");
    EXPECT_THROW(load_generic(ok, write("dup.tsv", "item\tgenre\na\tx\na\ty\n"), GenericSchema{}), ParseError);
    auto c = load_generic(ok, items, GenericSchema{});
    EXPECT_EQ(c.stats.duplicate_ratings, 1u);
    EXPECT_EQ(c.ratings[0].value, 4.0);
}

TEST_F(Files, GenericAttributeSubset) {
    GenericSchema s;
    s.attribute_columns = {"Genre"};
    auto c = load_generic(fixtures::data_dir() / "table1" / "ratings.tsv", fixtures::data_dir() / "table1" / "items.tsv", s);
    EXPECT_EQ(c.space.attribute_count(), 1u);
    EXPECT_EQ(c.space.attribute_name(0), "Genre");
}

TEST(SplitRecord, Quoting) {
    EXPECT_EQ(split_record("a;b;c", ';'), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(split_record("\"a;b\";\"c\"\"d\"", ';'), (std::vector<std::string>{"a;b", "c\"d"}));
    EXPECT_EQ(split_record("\"x \\\"y\\\"\";", ';'), (std::vector<std::string>{"x \"y\"", ""}));
    EXPECT_EQ(split_record("", ';'), (std::vector<std::string>{""}));
    EXPECT_THROW(split_record("\"open;b", ';'), std::invalid_argument);
    EXPECT_THROW(split_record("\"a\"b;c", ';'), std::invalid_argument);
}

TEST(SanitizeUtf8, ReplacesInvalidBytes) {
    std::size_t replaced = 0;
    EXPECT_EQ(sanitize_utf8("caf\xc3\xa9", replaced), "caf\xc3\xa9");
    EXPECT_EQ(replaced, 0u);
    EXPECT_EQ(sanitize_utf8("caf\xe9!", replaced), "caf\xef\xbf\xbd!");
    EXPECT_EQ(replaced, 1u);
    EXPECT_EQ(sanitize_utf8("\xc3", replaced), "\xef\xbf\xbd");
    EXPECT_EQ(replaced, 2u);
}
