#include "cimf/attribute_space.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cimf {

std::size_t LabelIndex::intern(std::string_view label) {
    auto it = ids_.find(std::string(label));
    if (it != ids_.end()) return it->second;
    std::size_t id = labels_.size();
    labels_.emplace_back(label);
    ids_.emplace(labels_.back(), id);
    return id;
}

std::optional<std::size_t> LabelIndex::find(std::string_view label) const {
    auto it = ids_.find(std::string(label));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

AttributeSpace AttributeSpace::build(std::vector<std::string> attribute_names,
                                     std::span<const ItemRecord> records) {
    AttributeSpace space;
    for (const auto& name : attribute_names) {
        if (space.attributes_.find(name))
            throw std::invalid_argument("duplicate attribute name '" + name + "'");
        space.attributes_.intern(name);
    }
    const std::size_t arity = attribute_names.size();
    space.values_.resize(arity);
    space.inverted_.resize(arity);
    space.assignment_.reserve(records.size());

    for (std::size_t r = 0; r < records.size(); ++r) {
        const ItemRecord& rec = records[r];
        if (rec.values.size() != arity) {
            std::ostringstream msg;
            msg << "record " << r << " ('" << rec.label << "') has " << rec.values.size()
                << " attribute values, schema has " << arity;
            throw std::invalid_argument(msg.str());
        }
        if (space.items_.find(rec.label))
            throw std::invalid_argument("duplicate item label '" + rec.label + "'");
        ItemId item = space.items_.intern(rec.label);

        std::vector<ValueId> row(arity);
        for (AttributeId j = 0; j < arity; ++j) {
            std::string_view v = rec.values[j];
            if (v.empty()) v = kMissingValue;
            ValueId x = space.values_[j].intern(v);
            if (x == space.inverted_[j].size()) space.inverted_[j].emplace_back();
            space.inverted_[j][x].push_back(item);
            row[j] = x;
        }
        space.assignment_.push_back(std::move(row));
    }
    space.pair_tables_ = std::make_unique<PairTable[]>(arity * arity);
    return space;
}

std::size_t AttributeSpace::value_count(AttributeId j) const {
    if (j >= values_.size()) throw std::domain_error("unknown attribute id " + std::to_string(j));
    return values_[j].size();
}

const std::string& AttributeSpace::item_label(ItemId item) const {
    if (item >= item_count()) throw std::domain_error("unknown item id " + std::to_string(item));
    return items_.label(item);
}

const std::string& AttributeSpace::attribute_name(AttributeId j) const {
    if (j >= attribute_count()) throw std::domain_error("unknown attribute id " + std::to_string(j));
    return attributes_.label(j);
}

const std::string& AttributeSpace::value_label(AttributeId j, ValueId x) const {
    check_value(j, x);
    return values_[j].label(x);
}

std::optional<ValueId> AttributeSpace::find_value(AttributeId j, std::string_view label) const {
    if (j >= values_.size()) return std::nullopt;
    return values_[j].find(label);
}

void AttributeSpace::check_value(AttributeId j, ValueId x) const {
    if (j >= values_.size() || x >= values_[j].size()) {
        throw std::domain_error("unknown attribute value (attribute " + std::to_string(j) +
                                ", value " + std::to_string(x) + ")");
    }
}

ValueId AttributeSpace::value_of(ItemId item, AttributeId j) const {
    if (item >= item_count() || j >= attribute_count())
        throw std::domain_error("unknown (item, attribute) pair");
    return assignment_[item][j];
}

std::span<const ValueId> AttributeSpace::row(ItemId item) const {
    if (item >= item_count()) throw std::domain_error("unknown item id " + std::to_string(item));
    return assignment_[item];
}

std::span<const ItemId> AttributeSpace::items_with(AttributeId j, ValueId x) const {
    check_value(j, x);
    return inverted_[j][x];
}

std::size_t AttributeSpace::value_frequency(AttributeId j, ValueId x) const {
    check_value(j, x);
    return inverted_[j][x].size();
}

const AttributeSpace::PairTable& AttributeSpace::pair_table(AttributeId j, AttributeId k) const {
    PairTable& table = pair_tables_[j * attribute_count() + k];
    std::call_once(table.once, [&] {
        table.rows.resize(values_[j].size());
        std::vector<std::size_t> counts(values_[k].size(), 0);
        for (ValueId x = 0; x < values_[j].size(); ++x) {
            const auto& members = inverted_[j][x];
            for (ItemId o : members) ++counts[assignment_[o][k]];
            auto& out = table.rows[x];
            for (ItemId o : members) {
                ValueId w = assignment_[o][k];
                if (counts[w] != 0) {
                    out.emplace_back(w, counts[w]);
                    counts[w] = 0;
                }
            }
            std::sort(out.begin(), out.end());
        }
    });
    return table;
}

std::span<const CooccurrenceEntry> AttributeSpace::cooccurrence(AttributeId j, ValueId x,
                                                                AttributeId k) const {
    check_value(j, x);
    if (k >= attribute_count()) throw std::domain_error("unknown attribute id " + std::to_string(k));
    return pair_table(j, k).rows[x];
}

std::size_t AttributeSpace::pair_count(AttributeId j, ValueId x, AttributeId k, ValueId w) const {
    check_value(k, w);
    auto profile = cooccurrence(j, x, k);
    auto it = std::lower_bound(profile.begin(), profile.end(), CooccurrenceEntry{w, 0});
    return (it != profile.end() && it->first == w) ? it->second : 0;
}

double AttributeSpace::cond_prob(AttributeId k, AttributeId j, ValueId w, ValueId x) const {
    if (j == k) throw std::domain_error("conditional probability of an attribute on itself is undefined");
    return static_cast<double>(pair_count(j, x, k, w)) / static_cast<double>(value_frequency(j, x));
}

void AttributeSpace::dump(std::ostream& out) const {
    out << "#attributes";
    for (const auto& name : attributes_.labels()) out << '\t' << name;
    out << '\n';
    for (ItemId i = 0; i < item_count(); ++i) {
        for (AttributeId j = 0; j < attribute_count(); ++j) {
            out << items_.label(i) << '\t' << attributes_.label(j) << '\t'
                << values_[j].label(assignment_[i][j]) << '\n';
        }
    }
}

AttributeSpace AttributeSpace::load_dump(std::istream& in) {
    std::string line;
    std::vector<std::string> names;
    if (!std::getline(in, line) || !line.starts_with("#attributes"))
        throw std::invalid_argument("attribute dump: missing '#attributes' header");
    {
        std::istringstream header(line.substr(std::string_view("#attributes").size()));
        std::string name;
        std::getline(header, name, '\t');  // leading empty field
        while (std::getline(header, name, '\t')) names.push_back(name);
    }

    std::vector<ItemRecord> records;
    LabelIndex seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw std::invalid_argument("attribute dump: malformed line " + std::to_string(line_no));
        std::string item = line.substr(0, t1);
        std::string attr = line.substr(t1 + 1, t2 - t1 - 1);
        std::string value = line.substr(t2 + 1);

        std::size_t id = seen.intern(item);
        if (id == records.size()) records.push_back({item, {}});
        auto& rec = records[id];
        if (rec.values.size() >= names.size() || names[rec.values.size()] != attr)
            throw std::invalid_argument("attribute dump: unexpected attribute '" + attr + "' on line " +
                                        std::to_string(line_no));
        rec.values.push_back(std::move(value));
    }
    return build(std::move(names), records);
}

}  // namespace cimf
