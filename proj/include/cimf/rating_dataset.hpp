#ifndef CIMF_RATING_DATASET_HPP
#define CIMF_RATING_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cimf/attribute_space.hpp"

namespace cimf {

using UserId = std::size_t;

struct Rating {
    UserId user;
    ItemId item;
    double value;
};

struct RatingRange {
    double min = 1.0;
    double max = 5.0;

    bool contains(double v) const { return v >= min && v <= max; }
    double clamp(double v) const { return v < min ? min : (v > max ? max : v); }
};

/// Sparse (user, item, rating) triples with label interning.
///
/// At most one rating per (user, item): a repeated pair overwrites the
/// earlier value and is counted in duplicate_count(). Subsets produced by
/// subset() share the label tables of their parent.
class RatingDataset {
public:
    explicit RatingDataset(RatingRange range = {});

    /// Throws std::out_of_range if `value` lies outside the declared range.
    void add(std::string_view user, std::string_view item, double value);
    /// Registers an item with no ratings (yet).
    ItemId intern_item(std::string_view item);
    UserId intern_user(std::string_view user);

    std::size_t size() const { return ratings_.size(); }
    bool empty() const { return ratings_.empty(); }
    std::size_t user_count() const { return users_->size(); }
    std::size_t item_count() const { return items_->size(); }
    std::span<const Rating> ratings() const { return ratings_; }
    const Rating& operator[](std::size_t i) const { return ratings_[i]; }
    RatingRange range() const { return range_; }
    std::size_t duplicate_count() const { return duplicates_; }

    const LabelIndex& users() const { return *users_; }
    const LabelIndex& items() const { return *items_; }

    /// Mean rating; throws std::logic_error when empty.
    double mean() const;

    /// The ratings at `indices`, with shared user/item id spaces.
    RatingDataset subset(std::span<const std::size_t> indices) const;

private:
    static std::uint64_t key(UserId u, ItemId i) { return (static_cast<std::uint64_t>(u) << 32) ^ i; }

    RatingRange range_;
    std::shared_ptr<LabelIndex> users_;
    std::shared_ptr<LabelIndex> items_;
    std::vector<Rating> ratings_;
    std::unordered_map<std::uint64_t, std::size_t> position_;
    std::size_t duplicates_ = 0;
};

/// Row- and column-wise adjacency of a rating set, entries sorted by id.
struct RatingMatrix {
    using Entry = std::pair<std::size_t, double>;

    std::vector<std::vector<Entry>> by_user;  // (item, rating)
    std::vector<std::vector<Entry>> by_item;  // (user, rating)

    explicit RatingMatrix(const RatingDataset& ratings);
};

}  // namespace cimf

#endif  // CIMF_RATING_DATASET_HPP
