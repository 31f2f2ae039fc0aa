#include "cimf/mf_model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cimf {

void TrainingConfig::validate() const {
    if (dimension == 0) throw std::invalid_argument("latent dimension must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw std::invalid_argument("learning rate must be finite and > 0");
    if (max_epochs == 0) throw std::invalid_argument("max_epochs must be positive");
    if (!(convergence_tol >= 0.0)) throw std::invalid_argument("convergence tolerance must be >= 0");
    if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) throw std::invalid_argument("init_scale must be >= 0");
}

FactorModel::FactorModel(std::size_t n, std::size_t m, std::size_t d, double offset_value)
    : users(n, d), items(m, d), offset(offset_value), user_known(n, true), item_known(m, true) {}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) s += a[f] * b[f];
    return s;
}

Prediction predict(const FactorModel& model, UserId u, ItemId i) {
    if (u >= model.user_count() || i >= model.item_count() || !model.user_known[u] || !model.item_known[i])
        return {model.offset, true};
    return {model.offset + dot(model.users.row(u), model.items.row(i)), false};
}

namespace {

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::invalid_argument("checkpoint: bad number '" + s + "'");
    return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto t = line.find('\t', start);
        out.push_back(line.substr(start, t - start));
        if (t == std::string::npos) break;
        start = t + 1;
    }
    return out;
}

void write_matrix(std::ostream& out, const char* tag, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        out << tag;
        for (double v : m.row(r)) out << '\t' << hex(v);
        out << '\n';
    }
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& cp) {
    const FactorModel& m = cp.model;
    if (cp.user_labels.size() != m.user_count() || cp.item_labels.size() != m.item_count())
        throw std::invalid_argument("checkpoint: label tables do not match model shape");
    const TrainingConfig& c = cp.config;
    out << "cimf-checkpoint\t1\n";
    out << "dim\t" << m.dimension() << '\n';
    out << "users\t" << m.user_count() << '\n';
    out << "items\t" << m.item_count() << '\n';
    out << "offset\t" << hex(m.offset) << '\n';
    out << "range\t" << hex(cp.range.min) << '\t' << hex(cp.range.max) << '\n';
    out << "similarity\t" << cp.similarity_fingerprint << '\n';
    out << "config\t" << c.dimension << '\t' << hex(c.lambda) << '\t' << hex(c.alpha) << '\t'
        << hex(c.learning_rate) << '\t' << c.max_epochs << '\t' << hex(c.convergence_tol) << '\t' << c.seed
        << '\t' << hex(c.init_scale) << '\n';
    for (std::size_t u = 0; u < m.user_count(); ++u)
        out << "user\t" << cp.user_labels[u] << '\t' << (m.user_known[u] ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < m.item_count(); ++i)
        out << "item\t" << cp.item_labels[i] << '\t' << (m.item_known[i] ? 1 : 0) << '\n';
    write_matrix(out, "P", m.users);
    write_matrix(out, "Q", m.items);
    out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in) {
    Checkpoint cp;
    std::string line;
    std::size_t line_no = 0;
    auto next = [&](const char* tag) {
        if (!std::getline(in, line)) throw std::invalid_argument(std::string("checkpoint: truncated before '") + tag + "'");
        ++line_no;
        auto fields = split_tabs(line);
        if (fields.empty() || fields[0] != tag) {
            throw std::invalid_argument("checkpoint: expected '" + std::string(tag) + "' on line " +
                                        std::to_string(line_no));
        }
        return fields;
    };
    auto count = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };

    auto header = next("cimf-checkpoint");
    if (header.size() != 2 || header[1] != "1") throw std::invalid_argument("checkpoint: unsupported version");
    const std::size_t d = count(next("dim").at(1));
    const std::size_t n = count(next("users").at(1));
    const std::size_t m = count(next("items").at(1));
    cp.model = FactorModel(n, m, d);
    cp.model.offset = parse_double(next("offset").at(1));
    auto range = next("range");
    cp.range = {parse_double(range.at(1)), parse_double(range.at(2))};
    auto sim = next("similarity");
    cp.similarity_fingerprint = sim.size() > 1 ? sim[1] : "";
    auto cfg = next("config");
    if (cfg.size() != 9) throw std::invalid_argument("checkpoint: malformed config line");
    cp.config.dimension = count(cfg[1]);
    cp.config.lambda = parse_double(cfg[2]);
    cp.config.alpha = parse_double(cfg[3]);
    cp.config.learning_rate = parse_double(cfg[4]);
    cp.config.max_epochs = count(cfg[5]);
    cp.config.convergence_tol = parse_double(cfg[6]);
    cp.config.seed = std::stoull(cfg[7]);
    cp.config.init_scale = parse_double(cfg[8]);

    for (std::size_t u = 0; u < n; ++u) {
        auto f = next("user");
        cp.user_labels.push_back(f.at(1));
        cp.model.user_known[u] = f.at(2) == "1";
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto f = next("item");
        cp.item_labels.push_back(f.at(1));
        cp.model.item_known[i] = f.at(2) == "1";
    }
    auto read_rows = [&](const char* tag, Matrix& mat) {
        for (std::size_t r = 0; r < mat.rows; ++r) {
            auto f = next(tag);
            if (f.size() != mat.cols + 1) throw std::invalid_argument("checkpoint: wrong row width on line " +
                                                                      std::to_string(line_no));
            for (std::size_t c = 0; c < mat.cols; ++c) mat.row(r)[c] = parse_double(f[c + 1]);
        }
    };
    read_rows("P", cp.model.users);
    read_rows("Q", cp.model.items);
    next("end");
    return cp;
}

}  // namespace cimf
