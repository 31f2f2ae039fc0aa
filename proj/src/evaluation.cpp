#include "cimf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cimf/parallel.hpp"

namespace cimf {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < assignment.size(); ++r)
        if (assignment[r] == fold) out.push_back(r);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < assignment.size(); ++r)
        if (assignment[r] != fold) out.push_back(r);
    return out;
}

FoldPlan make_folds(std::size_t records, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("fold count must be at least 2");
    if (k > records) {
        throw std::invalid_argument("fold count " + std::to_string(k) + " exceeds record count " +
                                    std::to_string(records));
    }
    std::vector<std::size_t> order(records);
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with an explicit generator so the plan is portable.
    std::mt19937_64 rng(seed);
    for (std::size_t i = records; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    FoldPlan plan{k, seed, std::vector<std::size_t>(records)};
    for (std::size_t pos = 0; pos < records; ++pos) plan.assignment[order[pos]] = pos % k;
    return plan;
}

double rmse(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) throw std::invalid_argument("RMSE of an empty prediction set");
    double sum = 0.0;
    for (auto [actual, predicted] : pairs) sum += (actual - predicted) * (actual - predicted);
    return std::sqrt(sum / static_cast<double>(pairs.size()));
}

double mae(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) throw std::invalid_argument("MAE of an empty prediction set");
    double sum = 0.0;
    for (auto [actual, predicted] : pairs) sum += std::abs(actual - predicted);
    return sum / static_cast<double>(pairs.size());
}

double improvement(double reference, double candidate) {
    return std::round((reference - candidate) * 10000.0) / 100.0;
}

std::uint64_t sub_seed(std::uint64_t base, std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer
    std::uint64_t z = base ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::optional<std::pair<double, double>> EvalReport::mean_rmse_mae(MethodKind method, std::size_t dimension) const {
    double r = 0.0, m = 0.0;
    std::size_t count = 0;
    for (const auto& c : cells) {
        if (c.method != method || c.dimension != dimension) continue;
        if (!c.ok) return std::nullopt;
        r += c.rmse;
        m += c.mae;
        ++count;
    }
    if (count == 0) return std::nullopt;
    return std::make_pair(r / static_cast<double>(count), m / static_cast<double>(count));
}

bool EvalReport::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const EvalCell& c) { return c.ok; });
}

std::string csv_row(const EvalCell& c) {
    std::ostringstream out;
    out << to_string(c.method) << ',' << c.dimension << ',' << c.fold << ',';
    if (!c.ok) {
        out << "failed,failed,failed";
    } else {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.10f,%.10f,%.6f", c.rmse, c.mae, c.fallback_rate);
        out << buf;
    }
    return out.str();
}

void EvalReport::write_csv(std::ostream& out) const {
    out << "method,dim,fold,rmse,mae,fallback_rate\n";
    for (const auto& c : cells) out << csv_row(c) << '\n';
}

void EvalReport::write_table(std::ostream& out, MethodKind target) const {
    std::vector<MethodKind> methods;
    std::vector<std::size_t> dims;
    for (const auto& c : cells) {
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
        if (std::find(dims.begin(), dims.end(), c.dimension) == dims.end()) dims.push_back(c.dimension);
    }
    // the target method goes last, as the column others are compared with
    auto has_target = std::find(methods.begin(), methods.end(), target);
    const bool compare = has_target != methods.end();
    if (compare) std::rotate(has_target, has_target + 1, methods.end());

    constexpr int kWidth = 20;
    out << std::left << std::setw(6) << "Dim" << std::setw(8) << "Metric";
    for (MethodKind m : methods) {
        std::string head(to_string(m));
        if (compare && m != target) head += " (Improve)";
        out << std::setw(kWidth) << head;
    }
    out << '\n';

    for (std::size_t d : dims) {
        for (int metric = 0; metric < 2; ++metric) {
            out << std::setw(6) << (metric == 0 ? std::to_string(d) + "D" : std::string()) << std::setw(8)
                << (metric == 0 ? "MAE" : "RMSE");
            auto pick = [&](MethodKind m) -> std::optional<double> {
                auto v = mean_rmse_mae(m, d);
                if (!v) return std::nullopt;
                return metric == 0 ? v->second : v->first;
            };
            const auto target_value = compare ? pick(target) : std::nullopt;
            for (MethodKind m : methods) {
                auto v = pick(m);
                std::string cell = "failed";
                if (v) {
                    char buf[64];
                    if (compare && m != target && target_value) {
                        std::snprintf(buf, sizeof buf, "%.4f (%.2f%%)", *v, improvement(*v, *target_value));
                    } else {
                        std::snprintf(buf, sizeof buf, "%.4f", *v);
                    }
                    cell = buf;
                }
                out << std::setw(kWidth) << cell;
            }
            out << '\n';
        }
    }
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string cell_stem(const EvalCell& cell) {
    return std::string(to_string(cell.method)) + "_d" + std::to_string(cell.dimension) + "_f" +
           std::to_string(cell.fold);
}

}  // namespace

EvalReport evaluate(const RatingDataset& ratings, const AttributeSpace& space, const EvalPlan& plan) {
    if (plan.methods.empty() || plan.dimensions.empty()) throw std::invalid_argument("empty evaluation grid");
    const FoldPlan folds = make_folds(ratings.size(), plan.folds, sub_seed(plan.seed, "folds"));

    // Attribute neighborhoods do not depend on the fold; build each kind once.
    std::map<SimilarityKind, SimilarityModel> neighborhoods;
    std::map<SimilarityKind, std::string> neighborhood_errors;
    for (MethodKind m : plan.methods) {
        auto kind = similarity_kind_for(m);
        if (!kind || neighborhoods.contains(*kind) || neighborhood_errors.contains(*kind)) continue;
        try {
            neighborhoods.emplace(*kind, build_neighborhoods(space, plan.coupling, *kind, plan.workers));
        } catch (const std::exception& e) {
            neighborhood_errors.emplace(*kind, e.what());
        }
    }

    EvalReport report;
    for (MethodKind m : plan.methods)
        for (std::size_t d : plan.dimensions)
            for (std::size_t f = 0; f < plan.folds; ++f) {
                EvalCell cell;
                cell.method = m;
                cell.dimension = d;
                cell.fold = f;
                report.cells.push_back(std::move(cell));
            }

    if (plan.cell_dir) std::filesystem::create_directories(*plan.cell_dir);

    parallel_for(report.cells.size(), plan.workers, [&](std::size_t idx) {
        EvalCell& cell = report.cells[idx];
        try {
            MethodSpec spec;
            spec.kind = cell.method;
            spec.mf = plan.training;
            spec.mf.dimension = cell.dimension;
            spec.mf.workers = 1;
            spec.mf.seed = sub_seed(plan.seed, "init/d" + std::to_string(cell.dimension) + "/f" +
                                                   std::to_string(cell.fold));
            spec.coupling = plan.coupling;
            spec.cf_neighbors = plan.cf_neighbors;

            const SimilarityModel* sim = nullptr;
            if (auto kind = similarity_kind_for(cell.method)) {
                if (auto err = neighborhood_errors.find(*kind); err != neighborhood_errors.end())
                    throw std::runtime_error(err->second);
                sim = &neighborhoods.at(*kind);
            }
            const auto train_idx = folds.train_indices(cell.fold);
            const auto test_idx = folds.test_indices(cell.fold);
            const RatingDataset train = ratings.subset(train_idx);
            const RatingDataset test = ratings.subset(test_idx);
            auto predictions = run_method(spec, train, space, test, sim);

            std::vector<std::pair<double, double>> pairs;
            pairs.reserve(predictions.size());
            std::size_t fallbacks = 0;
            for (auto& p : predictions) {
                p.predicted = ratings.range().clamp(p.predicted);
                pairs.emplace_back(p.actual, p.predicted);
                if (p.fallback) ++fallbacks;
            }
            cell.rmse = rmse(pairs);
            cell.mae = mae(pairs);
            cell.fallback_rate = static_cast<double>(fallbacks) / static_cast<double>(pairs.size());
            cell.ok = true;

            if (plan.cell_dir) {
                const std::string stem = cell_stem(cell);
                if (plan.write_cell_predictions) {
                    std::ostringstream buf;
                    write_predictions(buf, predictions, ratings.users(), ratings.items());
                    write_atomically(*plan.cell_dir / (stem + ".predictions.tsv"), buf.str());
                }
                write_atomically(*plan.cell_dir / (stem + ".csv"), csv_row(cell) + "\n");
            }
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
            if (plan.cell_dir) write_atomically(*plan.cell_dir / (cell_stem(cell) + ".csv"), csv_row(cell) + "\n");
        }
    });
    return report;
}

}  // namespace cimf
