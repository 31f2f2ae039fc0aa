#ifndef CIMF_RUN_CONFIG_HPP
#define CIMF_RUN_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cimf/coupled_similarity.hpp"
#include "cimf/evaluation.hpp"
#include "cimf/ingestion.hpp"
#include "cimf/mf_model.hpp"

namespace cimf {

struct DatasetSpec {
    /// movielens, bookcrossing or generic
    std::string kind = "generic";
    std::string ratings;
    std::string items;
    GenericSchema schema;

    bool operator==(const DatasetSpec& other) const;
};

/// Everything a CLI run depends on. Written next to every run's outputs.
struct RunConfig {
    DatasetSpec dataset;
    std::vector<std::string> methods{"cimf", "plain-mf"};
    std::vector<std::size_t> dimensions{10, 50, 100};
    std::size_t folds = 5;
    /// Its seed field is ignored; see `seed`.
    TrainingConfig training;
    CouplingConfig coupling;
    std::string similarity = "coupled";
    std::size_t cf_neighbors = 20;
    std::string output_dir = "cimf-out";
    /// Root of all randomness; folds and initializations use named sub-seeds.
    std::uint64_t seed = 42;

    bool operator==(const RunConfig& other) const;
};

nlohmann::json to_json(const RunConfig& config);
/// Fields absent from `j` keep the values already in `base`. Unknown keys
/// throw std::invalid_argument.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

Corpus load_corpus(const DatasetSpec& spec);

/// Throws std::invalid_argument on an unknown method name.
EvalPlan make_eval_plan(const RunConfig& config, std::size_t workers);

}  // namespace cimf

#endif  // CIMF_RUN_CONFIG_HPP
