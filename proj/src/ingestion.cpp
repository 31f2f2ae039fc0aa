#include "cimf/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <unordered_map>
#include <utility>

namespace cimf {

ParseError::ParseError(const std::filesystem::path& file, std::size_t line, const std::string& what)
    : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::optional<long> parse_integer(std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_real(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_on(std::string_view line, std::string_view sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + sep.size();
    }
    return out;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::filesystem::path& file) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(file, 1, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

// Builds the attribute space over the dataset's items, in item-id order.
// Items without a catalog entry get the missing value on every attribute.
AttributeSpace space_for(const RatingDataset& ratings, std::vector<std::string> attribute_names,
                         const std::unordered_map<std::string, std::vector<std::string>>& catalog,
                         LoadStats& stats) {
    std::vector<ItemRecord> records;
    records.reserve(ratings.item_count());
    const std::size_t arity = attribute_names.size();
    for (ItemId i = 0; i < ratings.item_count(); ++i) {
        const std::string& label = ratings.items().label(i);
        auto it = catalog.find(label);
        if (it == catalog.end()) {
            ++stats.items_without_metadata;
            records.push_back({label, std::vector<std::string>(arity, std::string(kMissingValue))});
        } else {
            records.push_back({label, it->second});
        }
    }
    return AttributeSpace::build(std::move(attribute_names), records);
}

}  // namespace

std::vector<std::string> split_record(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::size_t i = 0;
    while (true) {
        field.clear();
        if (i < line.size() && line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char c = line[i];
                if (c == '\\' && i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else if (c == '"') {
                    ++i;
                    closed = true;
                    break;
                } else {
                    field.push_back(c);
                    ++i;
                }
            }
            if (!closed) throw std::invalid_argument("unterminated quoted field");
            if (i < line.size() && line[i] != delimiter)
                throw std::invalid_argument("unexpected text after closing quote");
        } else {
            while (i < line.size() && line[i] != delimiter) field.push_back(line[i++]);
        }
        fields.push_back(field);
        if (i >= line.size()) break;
        ++i;  // delimiter
    }
    return fields;
}

std::string sanitize_utf8(std::string_view text, std::size_t& replaced) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(text.size());
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    auto cont = [&](std::size_t k) { return k < text.size() && (byte(k) & 0xC0) == 0x80; };
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = byte(i);
        std::size_t len = 0;
        if (c < 0x80) {
            len = 1;
        } else if (c >= 0xC2 && c <= 0xDF) {
            len = cont(i + 1) ? 2 : 0;
        } else if (c >= 0xE0 && c <= 0xEF) {
            const unsigned char lo = c == 0xE0 ? 0xA0 : 0x80;
            const unsigned char hi = c == 0xED ? 0x9F : 0xBF;
            if (i + 1 < text.size() && byte(i + 1) >= lo && byte(i + 1) <= hi && cont(i + 2)) len = 3;
        } else if (c >= 0xF0 && c <= 0xF4) {
            const unsigned char lo = c == 0xF0 ? 0x90 : 0x80;
            const unsigned char hi = c == 0xF4 ? 0x8F : 0xBF;
            if (i + 1 < text.size() && byte(i + 1) >= lo && byte(i + 1) <= hi && cont(i + 2) && cont(i + 3)) len = 4;
        }
        if (len == 0) {
            out.append(kReplacement);
            ++replaced;
            ++i;
        } else {
            out.append(text.substr(i, len));
            i += len;
        }
    }
    return out;
}

Corpus load_movielens(const std::filesystem::path& ratings_path, const std::filesystem::path& movies_path) {
    LoadStats stats;
    RatingDataset ratings(RatingRange{1.0, 5.0});
    {
        auto in = open_input(ratings_path);
        std::string line;
        std::size_t line_no = 0;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split_on(line, "::");
            if (f.size() != 4 || f[0].empty() || f[1].empty())
                throw ParseError(ratings_path, line_no, "expected UserID::MovieID::Rating::Timestamp");
            auto r = parse_integer(f[2]);
            if (!r) throw ParseError(ratings_path, line_no, "rating is not an integer");
            if (*r < 1 || *r > 5) throw ParseError(ratings_path, line_no, "rating outside 1..5");
            ++stats.rating_lines;
            ratings.add(f[0], f[1], static_cast<double>(*r));
        }
    }
    if (ratings.empty()) throw ParseError(ratings_path, 0, "no ratings");
    stats.duplicate_ratings = ratings.duplicate_count();

    std::unordered_map<std::string, std::vector<std::string>> catalog;
    {
        auto in = open_input(movies_path);
        std::string line;
        std::size_t line_no = 0;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto first = line.find("::");
            auto last = line.rfind("::");
            if (first == std::string::npos || first == last)
                throw ParseError(movies_path, line_no, "expected MovieID::Title::Genres");
            std::string id = line.substr(0, first);
            std::string genres = sanitize_utf8(std::string_view(line).substr(last + 2), stats.replaced_bytes);
            std::vector<std::string> parts;
            for (auto g : split_on(genres, "|"))
                if (!g.empty()) parts.emplace_back(g);
            std::sort(parts.begin(), parts.end());
            std::string value;
            for (std::size_t k = 0; k < parts.size(); ++k) value += (k ? "|" : "") + parts[k];
            catalog.emplace(std::move(id), std::vector<std::string>{value});
        }
    }
    AttributeSpace space = space_for(ratings, {"genre"}, catalog, stats);
    return {std::move(ratings), std::move(space), stats};
}

Corpus load_bookcrossing(const std::filesystem::path& ratings_path, const std::filesystem::path& books_path) {
    LoadStats stats;
    RatingDataset ratings(RatingRange{1.0, 10.0});
    {
        auto in = open_input(ratings_path);
        std::string line;
        std::size_t line_no = 0;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::vector<std::string> f;
            try {
                f = split_record(sanitize_utf8(line, stats.replaced_bytes), ';');
            } catch (const std::invalid_argument& e) {
                throw ParseError(ratings_path, line_no, e.what());
            }
            if (line_no == 1 && !f.empty() && f[0] == "User-ID") continue;
            if (f.size() != 3) throw ParseError(ratings_path, line_no, "expected User-ID;ISBN;Book-Rating");
            auto r = parse_integer(f[2]);
            if (!r || *r < 0 || *r > 10) throw ParseError(ratings_path, line_no, "rating outside 0..10");
            ++stats.rating_lines;
            if (*r == 0) {
                ++stats.excluded_zero_ratings;
                continue;
            }
            ratings.add(f[0], f[1], static_cast<double>(*r));
        }
    }
    if (ratings.empty()) throw ParseError(ratings_path, 0, "no ratings");
    stats.duplicate_ratings = ratings.duplicate_count();

    std::unordered_map<std::string, std::vector<std::string>> catalog;
    {
        auto in = open_input(books_path);
        std::string line;
        std::size_t line_no = 0;
        std::size_t isbn = 0, author = 2, year = 3, publisher = 4, width = 0;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::vector<std::string> f;
            try {
                f = split_record(sanitize_utf8(line, stats.replaced_bytes), ';');
            } catch (const std::invalid_argument& e) {
                throw ParseError(books_path, line_no, e.what());
            }
            if (line_no == 1 && !f.empty() && f[0] == "ISBN") {
                isbn = column_index(f, "ISBN", books_path);
                author = column_index(f, "Book-Author", books_path);
                year = column_index(f, "Year-Of-Publication", books_path);
                publisher = column_index(f, "Publisher", books_path);
                width = f.size();
                continue;
            }
            const std::size_t needed = std::max({isbn, author, year, publisher}) + 1;
            if (f.size() < needed || (width != 0 && f.size() != width)) {
                ++stats.skipped_item_rows;
                continue;
            }
            catalog.emplace(f[isbn], std::vector<std::string>{f[author], f[year], f[publisher]});
        }
    }
    AttributeSpace space = space_for(ratings, {"author", "year", "publisher"}, catalog, stats);
    return {std::move(ratings), std::move(space), stats};
}

Corpus load_generic(const std::filesystem::path& ratings_path, const std::filesystem::path& items_path,
                    const GenericSchema& schema) {
    LoadStats stats;
    RatingDataset ratings(schema.range);
    auto split = [&](const std::string& line, const std::filesystem::path& file, std::size_t line_no) {
        try {
            return split_record(line, schema.delimiter);
        } catch (const std::invalid_argument& e) {
            throw ParseError(file, line_no, e.what());
        }
    };
    {
        auto in = open_input(ratings_path);
        std::string line;
        if (!read_line(in, line)) throw ParseError(ratings_path, 0, "no ratings");
        const auto header = split(line, ratings_path, 1);
        const std::size_t cu = column_index(header, schema.user_column, ratings_path);
        const std::size_t ci = column_index(header, schema.item_column, ratings_path);
        const std::size_t cr = column_index(header, schema.rating_column, ratings_path);
        std::size_t line_no = 1;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split(line, ratings_path, line_no);
            if (f.size() != header.size()) {
                throw ParseError(ratings_path, line_no,
                                 "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
            }
            auto r = parse_real(f[cr]);
            if (!r) throw ParseError(ratings_path, line_no, "rating '" + f[cr] + "' is not a number");
            if (!schema.range.contains(*r)) throw ParseError(ratings_path, line_no, "rating outside declared range");
            ++stats.rating_lines;
            ratings.add(f[cu], f[ci], *r);
        }
    }
    if (ratings.empty()) throw ParseError(ratings_path, 0, "no ratings");
    stats.duplicate_ratings = ratings.duplicate_count();

    std::unordered_map<std::string, std::vector<std::string>> catalog;
    std::vector<std::string> names;
    {
        auto in = open_input(items_path);
        std::string line;
        if (!read_line(in, line)) throw ParseError(items_path, 0, "missing header");
        const auto header = split(line, items_path, 1);
        const std::size_t key = column_index(header, schema.item_key_column, items_path);
        std::vector<std::size_t> columns;
        if (schema.attribute_columns.empty()) {
            for (std::size_t c = 0; c < header.size(); ++c) {
                if (c == key) continue;
                columns.push_back(c);
                names.push_back(header[c]);
            }
        } else {
            for (const auto& name : schema.attribute_columns) {
                columns.push_back(column_index(header, name, items_path));
                names.push_back(name);
            }
        }
        std::size_t line_no = 1;
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split(line, items_path, line_no);
            if (f.size() != header.size()) {
                throw ParseError(items_path, line_no,
                                 "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
            }
            std::vector<std::string> values;
            values.reserve(columns.size());
            for (std::size_t c : columns) values.push_back(f[c]);
            if (!catalog.emplace(f[key], std::move(values)).second)
                throw ParseError(items_path, line_no, "duplicate item '" + f[key] + "'");
        }
    }
    AttributeSpace space = space_for(ratings, std::move(names), catalog, stats);
    return {std::move(ratings), std::move(space), stats};
}

}  // namespace cimf
