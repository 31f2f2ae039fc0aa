#include "cimf/run_config.hpp"

#include <set>
#include <stdexcept>

namespace cimf {

using nlohmann::json;

bool DatasetSpec::operator==(const DatasetSpec& o) const {
    const GenericSchema& a = schema;
    const GenericSchema& b = o.schema;
    return kind == o.kind && ratings == o.ratings && items == o.items && a.delimiter == b.delimiter &&
           a.range.min == b.range.min && a.range.max == b.range.max && a.user_column == b.user_column &&
           a.item_column == b.item_column && a.rating_column == b.rating_column &&
           a.item_key_column == b.item_key_column && a.attribute_columns == b.attribute_columns;
}

bool RunConfig::operator==(const RunConfig& o) const {
    TrainingConfig ta = training, tb = o.training;
    ta.seed = tb.seed = 0;
    ta.workers = tb.workers = 1;
    return dataset == o.dataset && methods == o.methods && dimensions == o.dimensions && folds == o.folds &&
           ta == tb && coupling.gamma == o.coupling.gamma &&
           coupling.neighborhood_size == o.coupling.neighborhood_size &&
           coupling.normalize_neighbors == o.coupling.normalize_neighbors && similarity == o.similarity &&
           cf_neighbors == o.cf_neighbors && output_dir == o.output_dir && seed == o.seed;
}

json to_json(const RunConfig& c) {
    const GenericSchema& s = c.dataset.schema;
    return json{
        {"dataset",
         {{"kind", c.dataset.kind},
          {"ratings", c.dataset.ratings},
          {"items", c.dataset.items},
          {"delimiter", std::string(1, s.delimiter)},
          {"rating_min", s.range.min},
          {"rating_max", s.range.max},
          {"user_column", s.user_column},
          {"item_column", s.item_column},
          {"rating_column", s.rating_column},
          {"item_key_column", s.item_key_column},
          {"attribute_columns", s.attribute_columns}}},
        {"methods", c.methods},
        {"dimensions", c.dimensions},
        {"folds", c.folds},
        {"training",
         {{"lambda", c.training.lambda},
          {"alpha", c.training.alpha},
          {"learning_rate", c.training.learning_rate},
          {"max_epochs", c.training.max_epochs},
          {"convergence_tol", c.training.convergence_tol},
          {"init_scale", c.training.init_scale},
          {"dimension", c.training.dimension}}},
        {"coupling",
         {{"gamma", c.coupling.gamma},
          {"neighborhood_size", c.coupling.neighborhood_size},
          {"normalize_neighbors", c.coupling.normalize_neighbors}}},
        {"similarity", c.similarity},
        {"cf_neighbors", c.cf_neighbors},
        {"output_dir", c.output_dir},
        {"seed", c.seed},
    };
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw std::invalid_argument("unknown config key '" + where + key + "'");
    }
}

template <class T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

RunConfig run_config_from_json(const json& j, RunConfig c) {
    reject_unknown(j,
                   {"dataset", "methods", "dimensions", "folds", "training", "coupling", "similarity", "cf_neighbors",
                    "output_dir", "seed"},
                   "");
    if (j.contains("dataset")) {
        const json& d = j.at("dataset");
        reject_unknown(d,
                       {"kind", "ratings", "items", "delimiter", "rating_min", "rating_max", "user_column",
                        "item_column", "rating_column", "item_key_column", "attribute_columns"},
                       "dataset.");
        GenericSchema& s = c.dataset.schema;
        take(d, "kind", c.dataset.kind);
        take(d, "ratings", c.dataset.ratings);
        take(d, "items", c.dataset.items);
        if (d.contains("delimiter")) {
            auto delim = d.at("delimiter").get<std::string>();
            if (delim == "\\t") delim = "\t";
            if (delim.size() != 1) throw std::invalid_argument("dataset.delimiter must be one character");
            s.delimiter = delim[0];
        }
        take(d, "rating_min", s.range.min);
        take(d, "rating_max", s.range.max);
        take(d, "user_column", s.user_column);
        take(d, "item_column", s.item_column);
        take(d, "rating_column", s.rating_column);
        take(d, "item_key_column", s.item_key_column);
        take(d, "attribute_columns", s.attribute_columns);
    }
    take(j, "methods", c.methods);
    take(j, "dimensions", c.dimensions);
    take(j, "folds", c.folds);
    if (j.contains("training")) {
        const json& t = j.at("training");
        reject_unknown(t,
                       {"lambda", "alpha", "learning_rate", "max_epochs", "convergence_tol", "init_scale",
                        "dimension"},
                       "training.");
        take(t, "lambda", c.training.lambda);
        take(t, "alpha", c.training.alpha);
        take(t, "learning_rate", c.training.learning_rate);
        take(t, "max_epochs", c.training.max_epochs);
        take(t, "convergence_tol", c.training.convergence_tol);
        take(t, "init_scale", c.training.init_scale);
        take(t, "dimension", c.training.dimension);
    }
    if (j.contains("coupling")) {
        const json& k = j.at("coupling");
        reject_unknown(k, {"gamma", "neighborhood_size", "normalize_neighbors"}, "coupling.");
        take(k, "gamma", c.coupling.gamma);
        take(k, "neighborhood_size", c.coupling.neighborhood_size);
        take(k, "normalize_neighbors", c.coupling.normalize_neighbors);
    }
    take(j, "similarity", c.similarity);
    take(j, "cf_neighbors", c.cf_neighbors);
    take(j, "output_dir", c.output_dir);
    take(j, "seed", c.seed);
    return c;
}

Corpus load_corpus(const DatasetSpec& spec) {
    if (spec.ratings.empty()) throw std::invalid_argument("no ratings file given");
    if (spec.items.empty()) throw std::invalid_argument("no item file given");
    if (spec.kind == "movielens") return load_movielens(spec.ratings, spec.items);
    if (spec.kind == "bookcrossing") return load_bookcrossing(spec.ratings, spec.items);
    if (spec.kind == "generic") return load_generic(spec.ratings, spec.items, spec.schema);
    throw std::invalid_argument("unknown dataset kind '" + spec.kind + "' (expected movielens, bookcrossing or generic)");
}

EvalPlan make_eval_plan(const RunConfig& config, std::size_t workers) {
    EvalPlan plan;
    plan.methods.clear();
    for (const auto& name : config.methods) plan.methods.push_back(parse_method_kind(name));
    plan.dimensions = config.dimensions;
    plan.folds = config.folds;
    plan.seed = config.seed;
    plan.training = config.training;
    plan.coupling = config.coupling;
    plan.cf_neighbors = config.cf_neighbors;
    plan.workers = workers;
    return plan;
}

}  // namespace cimf
