#include "cimf/rating_dataset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cimf {

RatingDataset::RatingDataset(RatingRange range)
    : range_(range), users_(std::make_shared<LabelIndex>()), items_(std::make_shared<LabelIndex>()) {
    if (!(range.min < range.max)) throw std::invalid_argument("rating range must satisfy min < max");
}

ItemId RatingDataset::intern_item(std::string_view item) { return items_->intern(item); }

UserId RatingDataset::intern_user(std::string_view user) { return users_->intern(user); }

void RatingDataset::add(std::string_view user, std::string_view item, double value) {
    if (!range_.contains(value)) {
        throw std::out_of_range("rating " + std::to_string(value) + " outside declared range [" +
                                std::to_string(range_.min) + ", " + std::to_string(range_.max) + "]");
    }
    UserId u = users_->intern(user);
    ItemId i = items_->intern(item);
    auto [it, inserted] = position_.try_emplace(key(u, i), ratings_.size());
    if (inserted) {
        ratings_.push_back({u, i, value});
    } else {
        ratings_[it->second].value = value;
        ++duplicates_;
    }
}

double RatingDataset::mean() const {
    if (ratings_.empty()) throw std::logic_error("mean of an empty rating set");
    double sum = 0.0;
    for (const auto& r : ratings_) sum += r.value;
    return sum / static_cast<double>(ratings_.size());
}

RatingDataset RatingDataset::subset(std::span<const std::size_t> indices) const {
    RatingDataset out(range_);
    out.users_ = users_;
    out.items_ = items_;
    out.ratings_.reserve(indices.size());
    for (std::size_t idx : indices) {
        const Rating& r = ratings_.at(idx);
        out.position_.emplace(key(r.user, r.item), out.ratings_.size());
        out.ratings_.push_back(r);
    }
    return out;
}

RatingMatrix::RatingMatrix(const RatingDataset& ratings)
    : by_user(ratings.user_count()), by_item(ratings.item_count()) {
    for (const auto& r : ratings.ratings()) {
        by_user[r.user].emplace_back(r.item, r.value);
        by_item[r.item].emplace_back(r.user, r.value);
    }
    auto by_id = [](const Entry& a, const Entry& b) { return a.first < b.first; };
    for (auto& row : by_user) std::sort(row.begin(), row.end(), by_id);
    for (auto& col : by_item) std::sort(col.begin(), col.end(), by_id);
}

}  // namespace cimf
