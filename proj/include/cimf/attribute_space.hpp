#ifndef CIMF_ATTRIBUTE_SPACE_HPP
#define CIMF_ATTRIBUTE_SPACE_HPP

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cimf {

using ItemId = std::size_t;
using AttributeId = std::size_t;
using ValueId = std::size_t;

/// Label substituted for absent attribute values; it takes part in
/// similarity like any other value.
inline constexpr std::string_view kMissingValue = "⟨missing⟩";

/// Bidirectional string <-> dense id table, ids in first-appearance order.
class LabelIndex {
public:
    /// Returns the id of `label`, assigning the next id if it is new.
    std::size_t intern(std::string_view label);
    std::optional<std::size_t> find(std::string_view label) const;
    const std::string& label(std::size_t id) const { return labels_.at(id); }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> ids_;
};

/// One raw item row: the item label and one value label per attribute.
/// An empty value label is read as missing.
struct ItemRecord {
    std::string label;
    std::vector<std::string> values;
};

/// (value of the conditioning attribute, co-occurrence count)
using CooccurrenceEntry = std::pair<ValueId, std::size_t>;

/// Items described by categorical attributes, with the value -> item-set
/// indexes that the coupled similarity formulas consume.
///
/// Immutable after build. Co-occurrence tables between attribute pairs are
/// computed on first use and cached; that cache is safe to fill from several
/// reader threads.
class AttributeSpace {
public:
    AttributeSpace() = default;
    AttributeSpace(AttributeSpace&&) noexcept = default;
    AttributeSpace& operator=(AttributeSpace&&) noexcept = default;

    /// Throws std::invalid_argument on a duplicate item label or a record
    /// whose value count differs from the schema.
    static AttributeSpace build(std::vector<std::string> attribute_names,
                                std::span<const ItemRecord> records);

    std::size_t item_count() const { return assignment_.size(); }
    std::size_t attribute_count() const { return attributes_.size(); }
    std::size_t value_count(AttributeId j) const;

    const std::string& item_label(ItemId item) const;
    const std::string& attribute_name(AttributeId j) const;
    const std::string& value_label(AttributeId j, ValueId x) const;
    const LabelIndex& items() const { return items_; }
    std::optional<ItemId> find_item(std::string_view label) const { return items_.find(label); }
    std::optional<AttributeId> find_attribute(std::string_view name) const { return attributes_.find(name); }
    std::optional<ValueId> find_value(AttributeId j, std::string_view label) const;

    /// The value item `item` takes on attribute j.
    ValueId value_of(ItemId item, AttributeId j) const;
    std::span<const ValueId> row(ItemId item) const;

    /// g_j(x): items whose attribute j equals x, ascending.
    std::span<const ItemId> items_with(AttributeId j, ValueId x) const;

    /// |g_j(x)|. Throws std::domain_error for an unknown (j, x).
    std::size_t value_frequency(AttributeId j, ValueId x) const;

    /// |g_{j,k}(x, w)|: items with attribute j equal to x and k equal to w.
    std::size_t pair_count(AttributeId j, ValueId x, AttributeId k, ValueId w) const;

    /// Sparse co-occurrence profile of value x of attribute j over the
    /// values of attribute k, sorted by the k-value. Counts sum to |g_j(x)|.
    std::span<const CooccurrenceEntry> cooccurrence(AttributeId j, ValueId x, AttributeId k) const;

    /// P_{k|j}(w | x) = |g_{j,k}(x, w)| / |g_j(x)|. Throws std::domain_error
    /// when j == k or an id is unknown.
    double cond_prob(AttributeId k, AttributeId j, ValueId w, ValueId x) const;

    /// Writes "item<TAB>attr<TAB>value" lines, items in id order.
    void dump(std::ostream& out) const;
    /// Rebuilds a space from dump() output.
    static AttributeSpace load_dump(std::istream& in);

private:
    struct PairTable {
        std::once_flag once;
        // indexed by value of the first attribute
        std::vector<std::vector<CooccurrenceEntry>> rows;
    };

    void check_value(AttributeId j, ValueId x) const;
    const PairTable& pair_table(AttributeId j, AttributeId k) const;

    LabelIndex items_;
    LabelIndex attributes_;
    std::vector<LabelIndex> values_;
    std::vector<std::vector<ValueId>> assignment_;
    std::vector<std::vector<std::vector<ItemId>>> inverted_;
    // J*J slots, filled lazily
    std::unique_ptr<PairTable[]> pair_tables_;
};

}  // namespace cimf

#endif  // CIMF_ATTRIBUTE_SPACE_HPP
