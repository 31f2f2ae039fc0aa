#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "cimf/evaluation.hpp"
#include "fixtures.hpp"

using namespace cimf;

TEST(Folds, SizesAndCoverage) {
    auto plan = make_folds(10, 3, 1);
    std::vector<std::size_t> sizes;
    std::vector<int> seen(10, 0);
    for (std::size_t f = 0; f < 3; ++f) {
        auto test = plan.test_indices(f);
        auto train = plan.train_indices(f);
        EXPECT_EQ(test.size() + train.size(), 10u);
        sizes.push_back(test.size());
        for (auto r : test) ++seen[r];
    }
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 4}));
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Folds, DeterministicPerSeed) {
    EXPECT_EQ(make_folds(100, 5, 9).assignment, make_folds(100, 5, 9).assignment);
    EXPECT_NE(make_folds(100, 5, 9).assignment, make_folds(100, 5, 10).assignment);
    EXPECT_THROW(make_folds(3, 5, 1), std::invalid_argument);
    EXPECT_THROW(make_folds(3, 1, 1), std::invalid_argument);
}

TEST(Metrics, SmallCases) {
    std::vector<std::pair<double, double>> p{{3, 4}, {4, 4}};
    EXPECT_DOUBLE_EQ(rmse(p), std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(mae(p), 0.5);
    std::vector<std::pair<double, double>> one{{5, 2}};
    EXPECT_DOUBLE_EQ(rmse(one), 3.0);
    EXPECT_DOUBLE_EQ(mae(one), 3.0);
    std::vector<std::pair<double, double>> none;
    EXPECT_THROW(rmse(none), std::invalid_argument);
}

TEST(Metrics, RmseNeverBelowMae) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 5.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::pair<double, double>> p(1 + rng() % 30);
        for (auto& x : p) x = {u(rng), u(rng)};
        EXPECT_GE(rmse(p), mae(p));
    }
}

TEST(Metrics, Improvement) {
    EXPECT_DOUBLE_EQ(improvement(1.1787, 0.9002), 27.85);
    EXPECT_DOUBLE_EQ(improvement(1.7111, 1.0058), 70.53);
    EXPECT_DOUBLE_EQ(improvement(1.5127, 1.4763), 3.64);
    EXPECT_DOUBLE_EQ(improvement(1.0, 1.0), 0.0);
}

TEST(SubSeed, StableAndDistinct) {
    EXPECT_EQ(sub_seed(42, "folds"), sub_seed(42, "folds"));
    EXPECT_NE(sub_seed(42, "folds"), sub_seed(42, "init"));
    EXPECT_NE(sub_seed(42, "folds"), sub_seed(43, "folds"));
}

namespace {

EvalPlan table1_plan() {
    EvalPlan plan;
    plan.dimensions = {2};
    plan.folds = 2;
    plan.coupling.neighborhood_size = 2;
    return plan;
}

}  // namespace

TEST(Evaluate, Table1Grid) {
    auto report = evaluate(fixtures::table1_ratings(), fixtures::table1_space(), table1_plan());
    ASSERT_EQ(report.cells.size(), 4u);
    for (const auto& c : report.cells) {
        ASSERT_TRUE(c.ok) << c.error;
        EXPECT_GE(c.rmse, c.mae);
        EXPECT_GE(c.fallback_rate, 0.0);
        EXPECT_LE(c.fallback_rate, 1.0);
    }
    std::ostringstream csv;
    report.write_csv(csv);
    const std::string text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
    EXPECT_TRUE(text.starts_with("method,dim,fold,rmse,mae,fallback_rate\ncimf,2,0,"));
    std::ostringstream table;
    report.write_table(table);
    EXPECT_NE(table.str().find("plain-mf (Improve)"), std::string::npos);
}

TEST(Evaluate, DeterministicAcrossWorkers) {
    auto plan = table1_plan();
    plan.methods = {MethodKind::cimf, MethodKind::plain_mf, MethodKind::ubcf, MethodKind::ibcf};
    auto a = evaluate(fixtures::table1_ratings(), fixtures::table1_space(), plan);
    plan.workers = 3;
    auto b = evaluate(fixtures::table1_ratings(), fixtures::table1_space(), plan);
    std::ostringstream ca, cb;
    a.write_csv(ca);
    b.write_csv(cb);
    EXPECT_EQ(ca.str(), cb.str());
}

TEST(Evaluate, FailedCellsAreReported) {
    auto plan = table1_plan();
    plan.dimensions = {2, 4};  // more factors than users
    auto report = evaluate(fixtures::table1_ratings(), fixtures::table1_space(), plan);
    EXPECT_FALSE(report.all_ok());
    EXPECT_TRUE(report.mean_rmse_mae(MethodKind::cimf, 2).has_value());
    EXPECT_FALSE(report.mean_rmse_mae(MethodKind::cimf, 4).has_value());
    std::ostringstream csv;
    report.write_csv(csv);
    EXPECT_NE(csv.str().find("cimf,4,0,failed,failed,failed"), std::string::npos);
}

TEST(Evaluate, WritesCellFiles) {
    auto dir = std::filesystem::temp_directory_path() / "cimf_eval_cells";
    std::filesystem::remove_all(dir);
    auto plan = table1_plan();
    plan.cell_dir = dir;
    plan.write_cell_predictions = true;
    auto report = evaluate(fixtures::table1_ratings(), fixtures::table1_space(), plan);
    EXPECT_TRUE(std::filesystem::exists(dir / "cimf_d2_f0.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "plain-mf_d2_f1.predictions.tsv"));
    std::filesystem::remove_all(dir);
}
