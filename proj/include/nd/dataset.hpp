#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nd {

enum class AttributeKind { Numeric, Nominal };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    std::vector<std::string> values;  // nominal only, declaration order
};

// Missing cells are quiet NaN, for both numeric values and nominal indices.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

// Labelled instances over a mixed numeric/nominal schema. The class attribute
// is kept out of the schema; labels index into class_names, whose order is
// fixed at load time and never re-sorted.
struct Dataset {
    std::vector<Attribute> schema;
    std::vector<std::string> class_names;
    std::vector<std::vector<double>> rows;  // nominal cells hold value indices
    std::vector<int> labels;
    std::vector<double> weights;  // non-negative, default 1.0

    std::size_t n_instances() const { return rows.size(); }
    std::size_t n_classes() const { return class_names.size(); }
    std::size_t n_attributes() const { return schema.size(); }

    // Throws DataError when a structural invariant is broken.
    void validate() const;
};

enum class DataFormat { Arff, Csv };

// class_attribute: attribute name, or a 0-based index in decimal; empty
// selects the last attribute. The class attribute must be nominal (CSV class
// columns are always treated as nominal).
Dataset load_dataset(std::istream& source, DataFormat format,
                     const std::string& class_attribute);

// Loads from a file; format defaults by extension (.arff, else CSV).
Dataset load_dataset_file(const std::string& path,
                          std::optional<DataFormat> format,
                          const std::string& class_attribute);

// Feature rows matched against an existing schema by attribute name; columns
// the schema does not mention (a class column, say) are ignored. Used to
// score data files against a saved model.
std::vector<std::vector<double>> load_feature_rows(
    const std::string& path, std::optional<DataFormat> format,
    const std::vector<Attribute>& schema);

// One output column of the dense encoding, with the statistics needed to
// transform unseen instances.
struct EncodedColumn {
    int attribute = 0;       // source attribute index
    int one_hot_value = -1;  // nominal value index, or -1 for numeric
    double fill = 0.0;       // imputation value in raw units (mean / mode index)
    double offset = 0.0;     // standardization mean (numeric columns)
    double scale = 1.0;      // 1/sd, or 0 for constant columns; 1 for one-hot
    bool all_missing = false;
};

struct Encoding {
    std::vector<EncodedColumn> columns;

    std::size_t width() const { return columns.size(); }
    // raw has schema arity; out has width() slots.
    void encode_row(std::span<const double> raw, std::span<double> out) const;
};

// Dense numeric design matrix: nominal attributes one-hot expanded, missing
// cells imputed (column mean / mode of the fitted data), numeric columns
// standardized to zero mean and unit variance over the fitted data.
struct EncodedDataset {
    Encoding encoding;
    std::size_t n_rows = 0;
    std::size_t width = 0;
    std::vector<double> matrix;  // row-major
    std::vector<int> labels;
    std::vector<double> weights;
    int n_classes = 0;

    std::span<const double> row(std::size_t i) const {
        return {matrix.data() + i * width, width};
    }
};

// Fits encoding statistics on d.
Encoding fit_encoding(const Dataset& d);

// Fit on d and transform d's own rows.
EncodedDataset encode(const Dataset& d);

// Transform d with previously fitted statistics (held-out data).
EncodedDataset encode_with(const Encoding& encoding, const Dataset& d);

// Row subset of an encoded dataset (bootstrap replicates, node data).
EncodedDataset take_rows(const EncodedDataset& data, std::span<const int> indices);

// k disjoint index sets partitioning [0, n); per-class counts across folds
// differ by at most one. Deterministic in (d, k, seed).
std::vector<std::vector<int>> stratified_folds(const Dataset& d, int k,
                                               std::uint64_t seed);

// n uniform draws with replacement.
std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed);

// Bootstrap replicate of d with weights reset to 1.
Dataset bootstrap_sample(const Dataset& d, std::uint64_t seed);

}  // namespace nd
