#ifndef CIMF_INGESTION_HPP
#define CIMF_INGESTION_HPP

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cimf/attribute_space.hpp"
#include "cimf/rating_dataset.hpp"

namespace cimf {

/// Input that does not match the expected layout. The message names the
/// file and line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::filesystem::path& file, std::size_t line, const std::string& what);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct LoadStats {
    std::size_t rating_lines = 0;
    std::size_t duplicate_ratings = 0;
    /// Book-Crossing implicit-feedback rows (rating 0) left out.
    std::size_t excluded_zero_ratings = 0;
    /// Invalid UTF-8 bytes replaced with U+FFFD.
    std::size_t replaced_bytes = 0;
    /// Rated items absent from the item file; all their attributes are missing.
    std::size_t items_without_metadata = 0;
    /// Item-file rows skipped because of a wrong field count.
    std::size_t skipped_item_rows = 0;
};

/// Ratings plus the attribute space of the rated items. Item ids agree
/// between the two.
struct Corpus {
    RatingDataset ratings;
    AttributeSpace space;
    LoadStats stats;
};

/// MovieLens 1M: "UserID::MovieID::Rating::Timestamp" and
/// "MovieID::Title::Genres". The single attribute "genre" is the sorted,
/// '|'-joined genre combination.
Corpus load_movielens(const std::filesystem::path& ratings_path, const std::filesystem::path& movies_path);

/// Book-Crossing dump (';'-separated, double-quoted). Zero ratings are
/// dropped and counted; attributes are author, year and publisher.
Corpus load_bookcrossing(const std::filesystem::path& ratings_path, const std::filesystem::path& books_path);

/// Delimited files with a header row. The ratings file needs user, item and
/// rating columns; the item file a key column plus attribute columns.
struct GenericSchema {
    char delimiter = '\t';
    RatingRange range{1.0, 5.0};
    std::string user_column = "user";
    std::string item_column = "item";
    std::string rating_column = "rating";
    std::string item_key_column = "item";
    /// Empty means every column of the item file except the key.
    std::vector<std::string> attribute_columns;
};

Corpus load_generic(const std::filesystem::path& ratings_path, const std::filesystem::path& items_path,
                    const GenericSchema& schema);

/// Splits one delimited record. Fields may be double-quoted; inside quotes
/// `""` and `\"` both stand for a quote. Throws std::invalid_argument on an
/// unterminated quote or text after a closing quote.
std::vector<std::string> split_record(std::string_view line, char delimiter);

/// Replaces every byte that is not part of a well-formed UTF-8 sequence with
/// U+FFFD; adds the number of replaced bytes to `replaced`.
std::string sanitize_utf8(std::string_view text, std::size_t& replaced);

}  // namespace cimf

#endif  // CIMF_INGESTION_HPP
