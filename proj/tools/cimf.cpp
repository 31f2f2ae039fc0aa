// Command-line front end: similarity, train, evaluate, predict.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cimf/baselines.hpp"
#include "cimf/evaluation.hpp"
#include "cimf/ingestion.hpp"
#include "cimf/mf_trainer.hpp"
#include "cimf/run_config.hpp"
#include "cimf/similarity_model.hpp"

namespace fs = std::filesystem;
using namespace cimf;

namespace {

std::size_t workers_from_env() {
    if (const char* env = std::getenv("CIMF_WORKERS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid CIMF_WORKERS='" << env << "'\n";
    }
    return 1;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

void report_load(const Corpus& corpus) {
    const LoadStats& s = corpus.stats;
    std::cerr << "loaded " << corpus.ratings.size() << " ratings from " << corpus.ratings.user_count() << " users on "
              << corpus.ratings.item_count() << " items (" << corpus.space.attribute_count() << " attributes)\n";
    if (s.duplicate_ratings) std::cerr << "  duplicate ratings overwritten: " << s.duplicate_ratings << '\n';
    if (s.excluded_zero_ratings) std::cerr << "  zero ratings excluded: " << s.excluded_zero_ratings << '\n';
    if (s.replaced_bytes) std::cerr << "  invalid UTF-8 bytes replaced: " << s.replaced_bytes << '\n';
    if (s.items_without_metadata) std::cerr << "  items without metadata: " << s.items_without_metadata << '\n';
    if (s.skipped_item_rows) std::cerr << "  malformed item rows skipped: " << s.skipped_item_rows << '\n';
}

// Options shared by subcommands. Values land in `flags`; after parsing,
// only options the user actually gave are copied over the config file.
struct SharedOptions {
    std::string config_path;
    RunConfig flags;
    std::string delimiter;
    std::vector<std::function<void(RunConfig&)>> overrides;

    template <class T>
    void bind(CLI::App* app, const std::string& name, T& field, const std::string& help,
              std::function<void(RunConfig&, const T&)> apply) {
        CLI::Option* opt = app->add_option(name, field, help);
        overrides.push_back([opt, &field, apply](RunConfig& c) {
            if (opt->count() > 0) apply(c, field);
        });
    }

    void add_dataset(CLI::App* app) {
        app->add_option("--config", config_path, "JSON run configuration; flags override its values");
        bind<std::string>(app, "--dataset", flags.dataset.kind, "movielens | bookcrossing | generic",
                          [](RunConfig& c, const std::string& v) { c.dataset.kind = v; });
        bind<std::string>(app, "--ratings", flags.dataset.ratings, "ratings file",
                          [](RunConfig& c, const std::string& v) { c.dataset.ratings = v; });
        bind<std::string>(app, "--items", flags.dataset.items, "item attribute file",
                          [](RunConfig& c, const std::string& v) { c.dataset.items = v; });
        bind<std::string>(app, "--delimiter", delimiter, "generic: field delimiter (\\t for tab)",
                          [](RunConfig& c, const std::string& v) {
                              std::string d = v == "\\t" ? "\t" : v;
                              if (d.size() != 1) throw CLI::ValidationError("--delimiter", "must be one character");
                              c.dataset.schema.delimiter = d[0];
                          });
        bind<double>(app, "--rating-min", flags.dataset.schema.range.min, "generic: lowest rating",
                     [](RunConfig& c, const double& v) { c.dataset.schema.range.min = v; });
        bind<double>(app, "--rating-max", flags.dataset.schema.range.max, "generic: highest rating",
                     [](RunConfig& c, const double& v) { c.dataset.schema.range.max = v; });
        bind<std::vector<std::string>>(app, "--attributes", flags.dataset.schema.attribute_columns,
                                       "generic: attribute columns (default: all but the key)",
                                       [](RunConfig& c, const std::vector<std::string>& v) {
                                           c.dataset.schema.attribute_columns = v;
                                       });
        bind<std::uint64_t>(app, "--seed", flags.seed, "root random seed",
                            [](RunConfig& c, const std::uint64_t& v) { c.seed = v; });
        bind<std::string>(app, "--out", flags.output_dir, "output directory",
                          [](RunConfig& c, const std::string& v) { c.output_dir = v; });
    }

    void add_coupling(CLI::App* app) {
        bind<std::size_t>(app, "-k,--neighbors", flags.coupling.neighborhood_size, "neighborhood size K",
                          [](RunConfig& c, const std::size_t& v) { c.coupling.neighborhood_size = v; });
        bind<std::vector<double>>(app, "--gamma", flags.coupling.gamma, "per-attribute coupling weights",
                                  [](RunConfig& c, const std::vector<double>& v) { c.coupling.gamma = v; });
        CLI::Option* raw = app->add_flag("--raw-weights", "keep unnormalized neighbor weights");
        overrides.push_back([raw](RunConfig& c) {
            if (raw->count() > 0) c.coupling.normalize_neighbors = false;
        });
    }

    void add_training(CLI::App* app) {
        bind<double>(app, "--lambda", flags.training.lambda, "regularization weight",
                     [](RunConfig& c, const double& v) { c.training.lambda = v; });
        bind<double>(app, "--alpha", flags.training.alpha, "coupling weight",
                     [](RunConfig& c, const double& v) { c.training.alpha = v; });
        bind<double>(app, "--learning-rate", flags.training.learning_rate, "gradient step size",
                     [](RunConfig& c, const double& v) { c.training.learning_rate = v; });
        bind<std::size_t>(app, "--epochs", flags.training.max_epochs, "maximum epochs",
                          [](RunConfig& c, const std::size_t& v) { c.training.max_epochs = v; });
        bind<double>(app, "--tol", flags.training.convergence_tol, "relative objective change to stop at",
                     [](RunConfig& c, const double& v) { c.training.convergence_tol = v; });
        bind<double>(app, "--init-scale", flags.training.init_scale, "std-dev of factor initialization",
                     [](RunConfig& c, const double& v) { c.training.init_scale = v; });
        bind<std::size_t>(app, "--cf-neighbors", flags.cf_neighbors, "neighbors for ubcf/ibcf",
                          [](RunConfig& c, const std::size_t& v) { c.cf_neighbors = v; });
    }

    RunConfig resolve() const {
        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config " + config_path);
            config = run_config_from_json(nlohmann::json::parse(in));
        }
        for (const auto& apply : overrides) apply(config);
        return config;
    }
};

void write_effective_config(const RunConfig& config) {
    write_file(fs::path(config.output_dir) / "effective_config.json", to_json(config).dump(2) + "\n");
}

int run_similarity(const RunConfig& config, std::size_t workers) {
    const SimilarityKind kind = parse_similarity_kind(config.similarity);
    Corpus corpus = load_corpus(config.dataset);
    report_load(corpus);
    SimilarityModel model =
        kind == SimilarityKind::rating_pearson
            ? build_rating_neighborhoods(corpus.ratings, config.coupling.neighborhood_size,
                                         config.coupling.normalize_neighbors, workers)
            : build_neighborhoods(corpus.space, config.coupling, kind, workers);

    std::ostringstream dump;
    model.dump(dump, corpus.space.items());
    const fs::path out = config.output_dir;
    write_file(out / "neighbors.tsv", dump.str());

    double total = 0.0;
    std::size_t edges = 0;
    for (ItemId i = 0; i < model.item_count(); ++i) {
        for (const auto& n : model.neighbors(i)) {
            total += n.weight;
            ++edges;
        }
    }
    std::ostringstream summary;
    summary << "kind\t" << to_string(kind) << "\nitems\t" << model.item_count() << "\nneighbor_links\t" << edges
            << "\nmean_neighbor_weight\t" << (edges ? total / static_cast<double>(edges) : 0.0) << "\nfingerprint\t"
            << model.fingerprint() << '\n';
    write_file(out / "summary.txt", summary.str());
    write_effective_config(config);
    std::cout << summary.str();
    return 0;
}

int run_train(const RunConfig& config, const std::string& method_name, const std::string& model_path,
              std::size_t workers) {
    const MethodKind method = parse_method_kind(method_name);
    if (!is_matrix_factorization(method))
        throw std::invalid_argument("train supports the matrix factorization methods only");
    Corpus corpus = load_corpus(config.dataset);
    report_load(corpus);

    TrainingConfig training = config.training;
    training.seed = sub_seed(config.seed, "init");
    training.workers = workers;
    SimilarityModel sim;
    if (auto kind = similarity_kind_for(method)) {
        sim = build_neighborhoods(corpus.space, config.coupling, *kind, workers);
    } else {
        training.alpha = 0.0;
        sim = SimilarityModel::without_neighbors(corpus.ratings.item_count());
    }
    TrainResult result = train(corpus.ratings, sim, training);

    Checkpoint cp{result.model, training, sim.fingerprint(), corpus.ratings.users().labels(),
                  corpus.ratings.items().labels(), corpus.ratings.range()};
    std::ostringstream buf;
    write_checkpoint(buf, cp);
    const fs::path path = model_path.empty() ? fs::path(config.output_dir) / "model.ckpt" : fs::path(model_path);
    write_file(path, buf.str());
    write_effective_config(config);

    std::ostringstream trace;
    trace << "epoch,objective\n0," << result.initial_objective << '\n';
    for (std::size_t e = 0; e < result.trace.size(); ++e) trace << e + 1 << ',' << result.trace[e] << '\n';
    write_file(fs::path(config.output_dir) / "trace.csv", trace.str());
    std::cout << "epochs\t" << result.trace.size() << "\nconverged\t" << (result.converged ? 1 : 0)
              << "\nobjective\t" << (result.trace.empty() ? result.initial_objective : result.trace.back())
              << "\nmodel\t" << path.string() << '\n';
    return 0;
}

int run_evaluate(const RunConfig& config, bool write_predictions, std::size_t workers) {
    EvalPlan plan = make_eval_plan(config, workers);  // rejects unknown methods before loading
    Corpus corpus = load_corpus(config.dataset);
    report_load(corpus);
    const fs::path out = config.output_dir;
    plan.cell_dir = out / "cells";
    plan.write_cell_predictions = write_predictions;
    write_effective_config(config);

    EvalReport report = evaluate(corpus.ratings, corpus.space, plan);
    std::ostringstream csv, table;
    report.write_csv(csv);
    report.write_table(table);
    write_file(out / "results.csv", csv.str());
    write_file(out / "report.txt", table.str());
    std::cout << table.str();
    int status = 0;
    for (const auto& cell : report.cells) {
        if (cell.ok) continue;
        std::cerr << "failed: " << to_string(cell.method) << " d=" << cell.dimension << " fold=" << cell.fold << ": "
                  << cell.error << '\n';
        status = 1;
    }
    return status;
}

int run_predict(const std::string& model_path, const std::string& pairs_path) {
    std::ifstream model_in(model_path);
    if (!model_in) throw std::runtime_error("cannot open checkpoint " + model_path);
    const Checkpoint cp = read_checkpoint(model_in);
    LabelIndex users, items;
    for (const auto& l : cp.user_labels) users.intern(l);
    for (const auto& l : cp.item_labels) items.intern(l);

    std::ifstream file_in;
    std::istream* in = &std::cin;
    if (!pairs_path.empty() && pairs_path != "-") {
        file_in.open(pairs_path);
        if (!file_in) throw std::runtime_error("cannot open pairs file " + pairs_path);
        in = &file_in;
    }
    std::string line;
    char buf[64];
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::invalid_argument("pair line without a tab: '" + line + "'");
        const std::string user = line.substr(0, tab);
        std::string item = line.substr(tab + 1);
        if (auto t = item.find('\t'); t != std::string::npos) item.resize(t);
        auto u = users.find(user);
        auto i = items.find(item);
        Prediction p = (u && i) ? predict(cp.model, *u, *i) : Prediction{cp.model.offset, true};
        std::snprintf(buf, sizeof buf, "%.17g", p.value);
        std::cout << user << '\t' << item << '\t' << buf << '\t' << (p.fallback ? 1 : 0) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled item-based matrix factorization recommender"};
    app.require_subcommand(1);

    SharedOptions sim_opts, train_opts, eval_opts;

    CLI::App* similarity = app.add_subcommand("similarity", "compute and dump item neighborhoods");
    sim_opts.add_dataset(similarity);
    sim_opts.add_coupling(similarity);
    sim_opts.bind<std::string>(similarity, "--kind", sim_opts.flags.similarity,
                               "coupled | pearson | cosine | jaccard | rating-pearson",
                               [](RunConfig& c, const std::string& v) { c.similarity = v; });

    CLI::App* train_cmd = app.add_subcommand("train", "train one model on the full dataset and save a checkpoint");
    train_opts.add_dataset(train_cmd);
    train_opts.add_coupling(train_cmd);
    train_opts.add_training(train_cmd);
    std::string train_method = "cimf";
    std::string model_out;
    train_cmd->add_option("--method", train_method, "cimf | plain-mf | psmf | csmf | jsmf");
    train_cmd->add_option("--model", model_out, "checkpoint path (default: <out>/model.ckpt)");
    std::size_t train_dim = 0;
    CLI::Option* dim_opt = train_cmd->add_option("-d,--dim", train_dim, "latent dimension");
    train_opts.overrides.push_back([dim_opt, &train_dim](RunConfig& c) {
        if (dim_opt->count() > 0) c.training.dimension = train_dim;
    });

    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "cross-validate methods over latent dimensions");
    eval_opts.add_dataset(evaluate_cmd);
    eval_opts.add_coupling(evaluate_cmd);
    eval_opts.add_training(evaluate_cmd);
    eval_opts.bind<std::vector<std::string>>(evaluate_cmd, "--methods", eval_opts.flags.methods,
                                             "methods to compare",
                                             [](RunConfig& c, const std::vector<std::string>& v) { c.methods = v; });
    eval_opts.bind<std::vector<std::size_t>>(evaluate_cmd, "--dims", eval_opts.flags.dimensions,
                                             "latent dimensions",
                                             [](RunConfig& c, const std::vector<std::size_t>& v) { c.dimensions = v; });
    eval_opts.bind<std::size_t>(evaluate_cmd, "--folds", eval_opts.flags.folds, "cross-validation folds",
                                [](RunConfig& c, const std::size_t& v) { c.folds = v; });
    bool write_predictions = false;
    evaluate_cmd->add_flag("--predictions", write_predictions, "also write per-cell prediction files");

    CLI::App* predict_cmd = app.add_subcommand("predict", "score user<TAB>item pairs with a checkpoint");
    std::string model_in, pairs_in;
    predict_cmd->add_option("--model", model_in, "checkpoint path")->required();
    predict_cmd->add_option("--pairs", pairs_in, "pairs file (default: standard input)");

    CLI11_PARSE(app, argc, argv);

    const std::size_t workers = workers_from_env();
    try {
        if (*similarity) return run_similarity(sim_opts.resolve(), workers);
        if (*train_cmd) return run_train(train_opts.resolve(), train_method, model_out, workers);
        if (*evaluate_cmd) {
            RunConfig config = eval_opts.resolve();
            for (const auto& m : config.methods) {
                try {
                    parse_method_kind(m);
                } catch (const std::invalid_argument& e) {
                    std::cerr << "usage error: " << e.what() << '\n';
                    return 2;
                }
            }
            return run_evaluate(config, write_predictions, workers);
        }
        if (*predict_cmd) return run_predict(model_in, pairs_in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
