#include "cimf/similarity_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "cimf/parallel.hpp"

namespace cimf {

std::string_view to_string(SimilarityKind kind) {
    switch (kind) {
        case SimilarityKind::coupled: return "coupled";
        case SimilarityKind::pearson: return "pearson";
        case SimilarityKind::cosine: return "cosine";
        case SimilarityKind::jaccard: return "jaccard";
        case SimilarityKind::rating_pearson: return "rating-pearson";
    }
    return "unknown";
}

SimilarityKind parse_similarity_kind(std::string_view name) {
    for (auto kind : {SimilarityKind::coupled, SimilarityKind::pearson, SimilarityKind::cosine,
                      SimilarityKind::jaccard, SimilarityKind::rating_pearson}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown similarity kind '" + std::string(name) + "'");
}

SimilarityModel::SimilarityModel(SimilarityKind kind, std::vector<std::vector<Neighbor>> neighbors)
    : kind_(kind), neighbors_(std::move(neighbors)), reverse_(neighbors_.size()) {
    for (ItemId i = 0; i < neighbors_.size(); ++i) {
        for (const Neighbor& n : neighbors_[i]) {
            if (n.item == i) throw std::invalid_argument("item " + std::to_string(i) + " lists itself as a neighbor");
            if (n.item >= neighbors_.size()) throw std::invalid_argument("neighbor id out of range");
            if (!std::isfinite(n.weight)) throw std::invalid_argument("non-finite neighbor weight");
            reverse_[n.item].push_back({i, n.weight});
        }
    }
}

SimilarityModel SimilarityModel::without_neighbors(std::size_t items) {
    return SimilarityModel(SimilarityKind::coupled, std::vector<std::vector<Neighbor>>(items));
}

bool SimilarityModel::has_neighbors() const {
    return std::any_of(neighbors_.begin(), neighbors_.end(), [](const auto& n) { return !n.empty(); });
}

std::string SimilarityModel::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(kind_));
    mix(neighbors_.size());
    for (const auto& list : neighbors_) {
        mix(list.size());
        for (const auto& n : list) {
            mix(n.item);
            mix(std::bit_cast<std::uint64_t>(n.weight));
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void SimilarityModel::dump(std::ostream& out, const LabelIndex& items) const {
    if (items.size() != neighbors_.size()) throw std::invalid_argument("label table does not match model size");
    out << "#similarity\t" << to_string(kind_) << '\n';
    char buf[64];
    for (ItemId i = 0; i < neighbors_.size(); ++i) {
        for (const auto& n : neighbors_[i]) {
            std::snprintf(buf, sizeof buf, "%.12g", n.weight);
            out << items.label(i) << '\t' << items.label(n.item) << '\t' << buf << '\n';
        }
    }
}

SimilarityModel SimilarityModel::load(std::istream& in, const LabelIndex& items) {
    std::vector<std::vector<Neighbor>> lists(items.size());
    SimilarityKind kind = SimilarityKind::coupled;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.starts_with("#similarity\t")) {
            kind = parse_similarity_kind(line.substr(12));
            continue;
        }
        if (line[0] == '#') continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw std::invalid_argument("neighborhood dump: malformed line " + std::to_string(line_no));
        auto a = items.find(line.substr(0, t1));
        auto b = items.find(line.substr(t1 + 1, t2 - t1 - 1));
        if (!a || !b) throw std::invalid_argument("neighborhood dump: unknown item on line " + std::to_string(line_no));
        std::size_t used = 0;
        double w = std::stod(line.substr(t2 + 1), &used);
        lists[*a].push_back({*b, w});
    }
    return SimilarityModel(kind, std::move(lists));
}

namespace {

// Keeps the K largest positive scores (ties: smaller id first), then
// optionally rescales them to unit sum.
std::vector<Neighbor> select_top(std::vector<Neighbor> candidates, std::size_t k, bool normalize) {
    std::erase_if(candidates, [](const Neighbor& n) { return !(n.weight > 0.0); });
    auto better = [](const Neighbor& a, const Neighbor& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.item < b.item;
    };
    if (candidates.size() > k) {
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                          candidates.end(), better);
        candidates.resize(k);
    } else {
        std::sort(candidates.begin(), candidates.end(), better);
    }
    if (normalize && !candidates.empty()) {
        double total = 0.0;
        for (const auto& n : candidates) total += n.weight;
        for (auto& n : candidates) n.weight /= total;
    }
    return candidates;
}

void check_neighborhood_size(std::size_t k, std::size_t m) {
    if (m < 2) throw std::invalid_argument("neighborhoods need at least 2 items");
    if (k >= m) {
        throw std::invalid_argument("neighborhood size " + std::to_string(k) + " must be below the item count " +
                                    std::to_string(m) + "; lower the neighborhood size");
    }
}

}  // namespace

SimilarityModel build_neighborhoods(const AttributeSpace& space, const CouplingConfig& config,
                                    SimilarityKind kind, std::size_t workers) {
    const std::size_t m = space.item_count();
    if (kind == SimilarityKind::rating_pearson)
        throw std::invalid_argument("rating-pearson neighborhoods are built from ratings, not attributes");
    check_neighborhood_size(config.neighborhood_size, m);

    std::unique_ptr<CoupledSimilarity> coupled;
    if (kind == SimilarityKind::coupled) coupled = std::make_unique<CoupledSimilarity>(space, config);

    auto score = [&](ItemId a, ItemId b) {
        switch (kind) {
            case SimilarityKind::coupled: return coupled->cis(a, b);
            case SimilarityKind::pearson: return attribute_vector_similarity(space, a, b, VectorMeasure::pearson);
            case SimilarityKind::cosine: return attribute_vector_similarity(space, a, b, VectorMeasure::cosine);
            case SimilarityKind::jaccard: return attribute_vector_similarity(space, a, b, VectorMeasure::jaccard);
            case SimilarityKind::rating_pearson: break;
        }
        return 0.0;
    };

    std::vector<std::vector<Neighbor>> lists(m);
    parallel_for(m, workers, [&](ItemId i) {
        std::vector<Neighbor> candidates;
        candidates.reserve(m - 1);
        for (ItemId j = 0; j < m; ++j)
            if (j != i) candidates.push_back({j, score(i, j)});
        lists[i] = select_top(std::move(candidates), config.neighborhood_size, config.normalize_neighbors);
    });
    return SimilarityModel(kind, std::move(lists));
}

double corated_pearson(std::span<const RatingMatrix::Entry> a, std::span<const RatingMatrix::Entry> b,
                       std::size_t min_overlap) {
    std::vector<std::pair<double, double>> shared;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            shared.emplace_back(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    if (shared.size() < min_overlap || shared.empty()) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (auto [x, y] : shared) {
        ma += x;
        mb += y;
    }
    ma /= static_cast<double>(shared.size());
    mb /= static_cast<double>(shared.size());
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (auto [x, y] : shared) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

SimilarityModel build_rating_neighborhoods(const RatingDataset& ratings, std::size_t neighborhood_size,
                                           bool normalize, std::size_t workers) {
    const std::size_t m = ratings.item_count();
    check_neighborhood_size(neighborhood_size, m);
    RatingMatrix matrix(ratings);
    std::vector<std::vector<Neighbor>> lists(m);
    parallel_for(m, workers, [&](ItemId i) {
        std::vector<Neighbor> candidates;
        for (ItemId j = 0; j < m; ++j)
            if (j != i) candidates.push_back({j, corated_pearson(matrix.by_item[i], matrix.by_item[j])});
        lists[i] = select_top(std::move(candidates), neighborhood_size, normalize);
    });
    return SimilarityModel(SimilarityKind::rating_pearson, std::move(lists));
}

}  // namespace cimf
