#include "crossmatch/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crossmatch/error.hpp"

namespace crossmatch {

LabeledDataset::LabeledDataset(std::size_t dim, std::vector<double> coords, std::vector<Label> labels)
    : dim_(dim), coords_(std::move(coords)), labels_(std::move(labels)) {
    if (coords_.size() != dim_ * labels_.size()) {
        throw DataError("coordinate count " + std::to_string(coords_.size()) + " does not match " +
                        std::to_string(labels_.size()) + " points of dimension " + std::to_string(dim_));
    }
    for (std::size_t k = 0; k < coords_.size(); ++k) {
        if (!std::isfinite(coords_[k])) {
            throw DataError("non-finite coordinate at point " + std::to_string(k / dim_) + ", feature " +
                            std::to_string(k % dim_));
        }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] > 1) {
            throw DataError("label at point " + std::to_string(i) + " is outside {0,1}");
        }
    }
}

void LabeledDataset::set_feature_names(std::vector<std::string> names) {
    if (!names.empty() && names.size() != dim_) {
        throw DataError("feature name count does not match dimension");
    }
    names_ = std::move(names);
}

ClassCounts class_counts(std::span<const Label> labels) {
    ClassCounts c;
    for (Label y : labels) {
        (y == 1 ? c.m : c.n) += 1;
    }
    const std::size_t total = c.m + c.n;
    if (total > 0) {
        c.c0_hat = static_cast<double>(c.n) / static_cast<double>(total);
        c.c1_hat = static_cast<double>(c.m) / static_cast<double>(total);
    }
    return c;
}

ClassCounts class_counts(const LabeledDataset& ds) { return class_counts(ds.labels()); }

void require_two_classes(const ClassCounts& counts) {
    if (counts.m == 0 || counts.n == 0) {
        throw DataError("two-sample operation needs both classes (m=" + std::to_string(counts.m) +
                        ", n=" + std::to_string(counts.n) + ")");
    }
}

namespace {

using Record = std::vector<std::string>;

// RFC-4180 records: quoted fields may contain delimiters, doubled quotes and newlines.
std::vector<Record> split_records(const std::string& text, char delim) {
    std::vector<Record> records;
    Record current;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.size() == 1 && current[0].find_first_not_of(" \t") == std::string::npos;
        if (!blank) records.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (ch == delim) {
            end_field();
        } else if (ch == '\n') {
            end_record();
        } else if (ch == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            end_record();
        } else {
            field.push_back(ch);
            if (ch != ' ' && ch != '\t') field_started = true;
        }
    }
    if (quoted) throw DataError("unterminated quoted field at end of input");
    if (!field.empty() || !current.empty()) end_record();
    return records;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

bool is_missing(const std::string& raw) {
    const std::string s = trim(raw);
    return s.empty() || s == "?" || s == "NA" || s == "NaN" || s == "nan";
}

}  // namespace

LabeledDataset parse_csv(std::istream& in, const CsvOptions& options) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::vector<Record> records = split_records(buffer.str(), options.delimiter);
    if (records.empty()) throw DataError("empty dataset");

    const std::size_t width = records.front().size();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].size() != width) {
            throw DataError("record " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                            " fields, expected " + std::to_string(width));
        }
    }
    if (width < 2) throw DataError("need at least one feature column and a label column");

    bool has_header = options.header == HeaderMode::present;
    if (options.header == HeaderMode::automatic) {
        if (std::holds_alternative<std::string>(options.label_column)) {
            has_header = true;
        } else {
            // A first row with any non-numeric, non-missing cell outside the label column is a header.
            const long raw_index = std::get<long>(options.label_column);
            const long label_guess = raw_index < 0 ? static_cast<long>(width) + raw_index : raw_index;
            for (std::size_t c = 0; c < width; ++c) {
                if (static_cast<long>(c) == label_guess) continue;
                if (!is_missing(records[0][c]) && !parse_number(records[0][c])) has_header = true;
            }
        }
    }

    std::size_t label_col = 0;
    if (const auto* name = std::get_if<std::string>(&options.label_column)) {
        if (!has_header) throw DataError("label column given by name but the file has no header");
        const auto& head = records.front();
        const auto it = std::find_if(head.begin(), head.end(), [&](const std::string& h) { return trim(h) == *name; });
        if (it == head.end()) throw DataError("label column '" + *name + "' not found in header");
        label_col = static_cast<std::size_t>(it - head.begin());
    } else {
        const long raw_index = std::get<long>(options.label_column);
        const long index = raw_index < 0 ? static_cast<long>(width) + raw_index : raw_index;
        if (index < 0 || index >= static_cast<long>(width)) {
            throw DataError("label column index " + std::to_string(raw_index) + " out of range");
        }
        label_col = static_cast<std::size_t>(index);
    }

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t rows = records.size() - first_data;
    if (rows == 0) throw DataError("empty dataset");
    const std::size_t dim = width - 1;

    std::vector<double> coords;
    coords.reserve(rows * dim);
    std::vector<std::string> raw_labels;
    raw_labels.reserve(rows);
    for (std::size_t r = first_data; r < records.size(); ++r) {
        const auto& rec = records[r];
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col) continue;
            const std::string where = "row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1);
            if (is_missing(rec[c])) throw DataError("missing value at " + where);
            const auto value = parse_number(rec[c]);
            if (!value) throw DataError("unparseable cell '" + rec[c] + "' at " + where);
            if (!std::isfinite(*value)) throw DataError("non-finite value at " + where);
            coords.push_back(*value);
        }
        raw_labels.push_back(trim(rec[label_col]));
    }

    std::vector<Label> labels(rows);
    if (options.positive_class) {
        for (std::size_t i = 0; i < rows; ++i) labels[i] = raw_labels[i] == *options.positive_class ? 1 : 0;
    } else {
        const bool binary = std::all_of(raw_labels.begin(), raw_labels.end(),
                                        [](const std::string& s) { return s == "0" || s == "1"; });
        if (binary) {
            for (std::size_t i = 0; i < rows; ++i) labels[i] = raw_labels[i] == "1" ? 1 : 0;
        } else {
            // First distinct value seen becomes class 0, the second class 1.
            std::vector<std::string> seen;
            for (std::size_t i = 0; i < rows; ++i) {
                auto it = std::find(seen.begin(), seen.end(), raw_labels[i]);
                if (it == seen.end()) {
                    if (seen.size() == 2) {
                        throw DataError("label '" + raw_labels[i] + "' at row " + std::to_string(i + first_data + 1) +
                                        " is a third class; labels must map to {0,1}");
                    }
                    seen.push_back(raw_labels[i]);
                    it = seen.end() - 1;
                }
                labels[i] = static_cast<Label>(it - seen.begin());
            }
        }
    }

    LabeledDataset ds(dim, std::move(coords), std::move(labels));
    if (has_header) {
        std::vector<std::string> names;
        for (std::size_t c = 0; c < width; ++c) {
            if (c != label_col) names.push_back(trim(records.front()[c]));
        }
        ds.set_feature_names(std::move(names));
    }
    if (!options.allow_single_class) {
        const auto counts = class_counts(ds);
        if (counts.m == 0 || counts.n == 0) throw DataError("single-class dataset");
    }
    return ds;
}

LabeledDataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_csv(in, options);
}

void write_csv(std::ostream& out, const LabeledDataset& ds, char delimiter) {
    std::array<char, 64> buf{};
    const auto& names = ds.feature_names();
    if (!names.empty()) {
        for (const auto& name : names) out << name << delimiter;
        out << "label\n";
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double x : ds.point(i)) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
            out.write(buf.data(), res.ptr - buf.data());
            out << delimiter;
        }
        out << static_cast<int>(ds.label(i)) << '\n';
    }
}

LabeledDataset zscore(const LabeledDataset& ds) {
    const std::size_t rows = ds.size();
    const std::size_t dim = ds.dim();
    std::vector<double> coords(ds.coords().begin(), ds.coords().end());
    if (rows == 0) return ds;
    for (std::size_t c = 0; c < dim; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < rows; ++i) mean += coords[i * dim + c];
        mean /= static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            const double t = coords[i * dim + c] - mean;
            ss += t * t;
        }
        const double sd = std::sqrt(ss / static_cast<double>(rows));
        const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
        for (std::size_t i = 0; i < rows; ++i) coords[i * dim + c] = (coords[i * dim + c] - mean) * scale;
    }
    LabeledDataset out(dim, std::move(coords), std::vector<Label>(ds.labels().begin(), ds.labels().end()));
    out.set_feature_names(ds.feature_names());
    return out;
}

}  // namespace crossmatch
