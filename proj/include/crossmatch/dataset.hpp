#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace crossmatch {

using Label = std::uint8_t;

/// N points in R^d with a binary class label per point.
///
/// Coordinates are stored row-major. Class 1 has m members, class 0 has n,
/// and N = m + n. The object is immutable once constructed.
class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::size_t dim, std::vector<double> coords, std::vector<Label> labels);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    Label label(std::size_t i) const { return labels_[i]; }
    std::span<const Label> labels() const { return labels_; }
    std::span<const double> coords() const { return coords_; }

    /// Optional feature names (from a CSV header); empty when unknown.
    const std::vector<std::string>& feature_names() const { return names_; }
    void set_feature_names(std::vector<std::string> names);

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<Label> labels_;
    std::vector<std::string> names_;
};

struct ClassCounts {
    std::size_t m = 0;    // label 1
    std::size_t n = 0;    // label 0
    double c0_hat = 0.0;  // n / N
    double c1_hat = 0.0;  // m / N
};

ClassCounts class_counts(const LabeledDataset& ds);
ClassCounts class_counts(std::span<const Label> labels);

/// Throws DataError unless both classes are present.
void require_two_classes(const ClassCounts& counts);

enum class HeaderMode { automatic, present, absent };

struct CsvOptions {
    /// Column holding the class label, by zero-based index or header name.
    /// Negative indices count from the end (-1 is the last column).
    std::variant<long, std::string> label_column = -1L;
    char delimiter = ',';
    HeaderMode header = HeaderMode::automatic;
    /// When set, this label value maps to 1 and every other value to 0.
    std::optional<std::string> positive_class;
    bool allow_single_class = false;
};

LabeledDataset load_csv(const std::string& path, const CsvOptions& options = {});
LabeledDataset parse_csv(std::istream& in, const CsvOptions& options = {});

/// Writes features then the label as the last column, using shortest
/// round-trip decimal text so that a reload is bitwise identical.
void write_csv(std::ostream& out, const LabeledDataset& ds, char delimiter = ',');

/// Per-column standardization to zero mean and unit (population) variance.
/// Constant columns are centred only.
LabeledDataset zscore(const LabeledDataset& ds);

}  // namespace crossmatch
