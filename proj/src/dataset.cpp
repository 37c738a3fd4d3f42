#include "nd/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nd/errors.hpp"
#include "nd/rng.hpp"

namespace nd {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
    cells.push_back(cur);
    return cells;
}

// Strips matching single or double quotes around an ARFF token.
std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                          (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

// Both parsers reduce to this: named columns (typed for ARFF, untyped for
// CSV until scanned) plus trimmed cell text, with "?" or "" meaning missing.
struct TextTable {
    std::vector<Attribute> attributes;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

bool cell_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

TextTable parse_arff(std::istream& in) {
    TextTable table;
    std::string line;
    int line_no = 0;
    bool in_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (!in_data && t[0] == '@') {
            std::istringstream ls(t);
            std::string keyword;
            ls >> keyword;
            keyword = lower(keyword);
            if (keyword == "@relation") continue;
            if (keyword == "@data") {
                in_data = true;
                continue;
            }
            if (keyword == "@attribute") {
                std::string rest = trim(t.substr(keyword.size()));
                if (rest.empty())
                    throw DataError("line " + std::to_string(line_no) +
                                    ": attribute without a name");
                std::string name;
                std::size_t pos = 0;
                if (rest[0] == '\'' || rest[0] == '"') {
                    const char q = rest[0];
                    const std::size_t close = rest.find(q, 1);
                    if (close == std::string::npos)
                        throw DataError("line " + std::to_string(line_no) +
                                        ": unterminated attribute name");
                    name = rest.substr(1, close - 1);
                    pos = close + 1;
                } else {
                    pos = rest.find_first_of(" \t{");
                    if (pos == std::string::npos)
                        throw DataError("line " + std::to_string(line_no) +
                                        ": attribute '" + rest + "' without a type");
                    name = rest.substr(0, pos);
                }
                std::string type = trim(rest.substr(pos));
                Attribute attr;
                attr.name = name;
                if (!type.empty() && type[0] == '{') {
                    if (type.back() != '}')
                        throw DataError("line " + std::to_string(line_no) +
                                        ": unterminated nominal value list");
                    attr.kind = AttributeKind::Nominal;
                    std::string body = type.substr(1, type.size() - 2);
                    std::string value;
                    std::istringstream vs(body);
                    while (std::getline(vs, value, ','))
                        attr.values.push_back(unquote(trim(value)));
                    if (attr.values.empty())
                        throw DataError("line " + std::to_string(line_no) +
                                        ": empty nominal value list");
                } else {
                    const std::string kind = lower(type);
                    if (kind != "numeric" && kind != "real" && kind != "integer")
                        throw DataError("line " + std::to_string(line_no) +
                                        ": unsupported attribute type '" + type + "'");
                    attr.kind = AttributeKind::Numeric;
                }
                table.attributes.push_back(std::move(attr));
                continue;
            }
            throw DataError("line " + std::to_string(line_no) +
                            ": unknown declaration '" + keyword + "'");
        }
        if (!in_data)
            throw DataError("line " + std::to_string(line_no) +
                            ": data before @data section");
        std::vector<std::string> cells = split_csv_line(t, line_no);
        if (cells.size() != table.attributes.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.attributes.size()) +
                            " values, found " + std::to_string(cells.size()));
        for (auto& c : cells) c = unquote(trim(c));
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    if (table.attributes.empty())
        throw DataError("no @attribute declarations found");
    return table;
}

TextTable parse_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw DataError("empty csv input");
    ++line_no;
    TextTable table;
    for (const std::string& name : split_csv_line(trim(line), line_no)) {
        Attribute attr;
        attr.name = trim(name);
        table.attributes.push_back(std::move(attr));
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<std::string> cells = split_csv_line(t, line_no);
        if (cells.size() != table.attributes.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.attributes.size()) +
                            " values, found " + std::to_string(cells.size()));
        for (auto& c : cells) c = trim(c);
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    // A column is numeric when every non-missing cell parses as a number;
    // otherwise nominal with values in first-appearance order.
    for (std::size_t col = 0; col < table.attributes.size(); ++col) {
        bool numeric = true;
        for (const auto& row : table.rows) {
            const std::string& cell = row[col];
            if (cell_missing(cell)) continue;
            double v;
            if (!parse_double(cell, v)) {
                numeric = false;
                break;
            }
        }
        Attribute& attr = table.attributes[col];
        attr.kind = numeric ? AttributeKind::Numeric : AttributeKind::Nominal;
        if (!numeric) {
            for (const auto& row : table.rows) {
                const std::string& cell = row[col];
                if (cell_missing(cell)) continue;
                if (std::find(attr.values.begin(), attr.values.end(), cell) ==
                    attr.values.end())
                    attr.values.push_back(cell);
            }
        }
    }
    return table;
}

TextTable parse_table(std::istream& in, DataFormat format) {
    return format == DataFormat::Arff ? parse_arff(in) : parse_csv(in);
}

double convert_cell(const std::string& cell, const Attribute& attr, int line_no) {
    if (cell_missing(cell)) return missing_value();
    if (attr.kind == AttributeKind::Numeric) {
        double v;
        if (!parse_double(cell, v))
            throw DataError("line " + std::to_string(line_no) + ": '" + cell +
                            "' is not numeric");
        return v;
    }
    const auto it = std::find(attr.values.begin(), attr.values.end(), cell);
    if (it == attr.values.end())
        throw DataError("line " + std::to_string(line_no) + ": value '" + cell +
                        "' not declared for attribute '" + attr.name + "'");
    return static_cast<double>(it - attr.values.begin());
}

int resolve_class_index(const std::vector<Attribute>& attributes,
                        const std::string& class_attribute) {
    if (class_attribute.empty()) return static_cast<int>(attributes.size()) - 1;
    int idx = -1;
    auto [ptr, ec] = std::from_chars(class_attribute.data(),
                                     class_attribute.data() + class_attribute.size(),
                                     idx);
    if (ec == std::errc() && ptr == class_attribute.data() + class_attribute.size()) {
        if (idx < 0 || idx >= static_cast<int>(attributes.size()))
            throw UsageError("class attribute index " + class_attribute +
                             " out of range");
        return idx;
    }
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].name == class_attribute) return static_cast<int>(i);
    throw UsageError("unknown class attribute '" + class_attribute + "'");
}

DataFormat format_for_path(const std::string& path,
                           std::optional<DataFormat> format) {
    if (format.has_value()) return *format;
    const std::size_t dot = path.find_last_of('.');
    const std::string ext =
        dot == std::string::npos ? "" : lower(path.substr(dot + 1));
    return ext == "arff" ? DataFormat::Arff : DataFormat::Csv;
}

}  // namespace

void Dataset::validate() const {
    if (class_names.size() < 2)
        throw DataError("at least 2 classes required, found " +
                        std::to_string(class_names.size()));
    if (rows.empty()) throw DataError("dataset has no instances");
    if (labels.size() != rows.size() || weights.size() != rows.size())
        throw DataError("labels/weights size mismatch");
    bool any_positive = false;
    for (double w : weights) {
        if (w < 0.0) throw DataError("negative instance weight");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw DataError("all instance weights are zero");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != schema.size())
            throw DataError("instance " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " values, expected " +
                            std::to_string(schema.size()));
        if (labels[r] < 0 || labels[r] >= static_cast<int>(class_names.size()))
            throw DataError("instance " + std::to_string(r) +
                            " has an out-of-range label");
    }
}

Dataset load_dataset(std::istream& source, DataFormat format,
                     const std::string& class_attribute) {
    TextTable table = parse_table(source, format);
    const int class_index = resolve_class_index(table.attributes, class_attribute);
    Attribute cls = table.attributes[static_cast<std::size_t>(class_index)];
    if (cls.kind == AttributeKind::Numeric) {
        if (format == DataFormat::Arff)
            throw UsageError("class attribute '" + cls.name + "' is not nominal");
        // CSV class columns are nominal by definition; value order is first
        // appearance of the cell text.
        cls.kind = AttributeKind::Nominal;
        cls.values.clear();
        for (const auto& row : table.rows) {
            const std::string& cell = row[static_cast<std::size_t>(class_index)];
            if (cell_missing(cell)) continue;
            if (std::find(cls.values.begin(), cls.values.end(), cell) ==
                cls.values.end())
                cls.values.push_back(cell);
        }
    }
    if (cls.values.size() < 2)
        throw DataError("at least 2 classes required, found " +
                        std::to_string(cls.values.size()));

    Dataset d;
    d.class_names = cls.values;
    for (std::size_t i = 0; i < table.attributes.size(); ++i)
        if (static_cast<int>(i) != class_index)
            d.schema.push_back(table.attributes[i]);

    d.rows.reserve(table.rows.size());
    d.labels.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& text = table.rows[r];
        const int line_no = table.line_numbers[r];
        const std::string& label_cell = text[static_cast<std::size_t>(class_index)];
        if (cell_missing(label_cell))
            throw DataError("line " + std::to_string(line_no) +
                            ": missing class value");
        const double label = convert_cell(label_cell, cls, line_no);
        std::vector<double> row;
        row.reserve(text.size() - 1);
        std::size_t schema_idx = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (static_cast<int>(i) == class_index) continue;
            row.push_back(convert_cell(text[i], d.schema[schema_idx], line_no));
            ++schema_idx;
        }
        d.rows.push_back(std::move(row));
        d.labels.push_back(static_cast<int>(label));
    }
    d.weights.assign(d.rows.size(), 1.0);
    d.validate();
    return d;
}

Dataset load_dataset_file(const std::string& path,
                          std::optional<DataFormat> format,
                          const std::string& class_attribute) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_dataset(in, format_for_path(path, format), class_attribute);
}

std::vector<std::vector<double>> load_feature_rows(
    const std::string& path, std::optional<DataFormat> format,
    const std::vector<Attribute>& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    TextTable table = parse_table(in, format_for_path(path, format));
    // Columns are matched to the model schema by name; extra columns (for
    // example a class column) are ignored.
    std::vector<std::size_t> source(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
        bool found = false;
        for (std::size_t i = 0; i < table.attributes.size(); ++i) {
            if (table.attributes[i].name == schema[a].name) {
                source[a] = i;
                found = true;
                break;
            }
        }
        if (!found)
            throw DataError("data file lacks attribute '" + schema[a].name + "'");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<double> row(schema.size());
        for (std::size_t a = 0; a < schema.size(); ++a)
            row[a] = convert_cell(table.rows[r][source[a]], schema[a],
                                  table.line_numbers[r]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void Encoding::encode_row(std::span<const double> raw,
                          std::span<double> out) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const EncodedColumn& col = columns[c];
        double v = raw[static_cast<std::size_t>(col.attribute)];
        if (is_missing(v)) v = col.fill;
        if (col.one_hot_value >= 0)
            out[c] = (static_cast<int>(v) == col.one_hot_value) ? 1.0 : 0.0;
        else
            out[c] = (v - col.offset) * col.scale;
    }
}

Encoding fit_encoding(const Dataset& d) {
    Encoding enc;
    const std::size_t n = d.n_instances();
    for (std::size_t a = 0; a < d.schema.size(); ++a) {
        const Attribute& attr = d.schema[a];
        if (attr.kind == AttributeKind::Numeric) {
            double sum = 0.0;
            std::size_t observed = 0;
            for (const auto& row : d.rows) {
                if (!is_missing(row[a])) {
                    sum += row[a];
                    ++observed;
                }
            }
            EncodedColumn col;
            col.attribute = static_cast<int>(a);
            col.all_missing = observed == 0;
            col.fill = observed == 0 ? 0.0 : sum / static_cast<double>(observed);
            // Standardization statistics over the imputed column.
            double mean = 0.0;
            for (const auto& row : d.rows)
                mean += is_missing(row[a]) ? col.fill : row[a];
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (const auto& row : d.rows) {
                const double v = is_missing(row[a]) ? col.fill : row[a];
                var += (v - mean) * (v - mean);
            }
            var /= static_cast<double>(n);
            col.offset = mean;
            col.scale = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
            enc.columns.push_back(col);
        } else {
            std::vector<std::size_t> counts(attr.values.size(), 0);
            std::size_t observed = 0;
            for (const auto& row : d.rows) {
                if (!is_missing(row[a])) {
                    ++counts[static_cast<std::size_t>(row[a])];
                    ++observed;
                }
            }
            int mode = 0;
            for (std::size_t v = 1; v < counts.size(); ++v)
                if (counts[v] > counts[static_cast<std::size_t>(mode)])
                    mode = static_cast<int>(v);
            for (std::size_t v = 0; v < attr.values.size(); ++v) {
                EncodedColumn col;
                col.attribute = static_cast<int>(a);
                col.one_hot_value = static_cast<int>(v);
                col.fill = static_cast<double>(mode);
                col.all_missing = observed == 0;
                enc.columns.push_back(col);
            }
        }
    }
    return enc;
}

EncodedDataset encode_with(const Encoding& encoding, const Dataset& d) {
    EncodedDataset out;
    out.encoding = encoding;
    out.n_rows = d.n_instances();
    out.width = encoding.width();
    out.matrix.resize(out.n_rows * out.width);
    for (std::size_t r = 0; r < out.n_rows; ++r)
        encoding.encode_row(d.rows[r],
                            {out.matrix.data() + r * out.width, out.width});
    out.labels = d.labels;
    out.weights = d.weights;
    out.n_classes = static_cast<int>(d.n_classes());
    return out;
}

EncodedDataset encode(const Dataset& d) { return encode_with(fit_encoding(d), d); }

EncodedDataset take_rows(const EncodedDataset& data, std::span<const int> indices) {
    EncodedDataset out;
    out.encoding = data.encoding;
    out.n_rows = indices.size();
    out.width = data.width;
    out.n_classes = data.n_classes;
    out.matrix.resize(out.n_rows * out.width);
    out.labels.resize(out.n_rows);
    out.weights.resize(out.n_rows);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = static_cast<std::size_t>(indices[i]);
        std::copy_n(data.matrix.data() + src * data.width, data.width,
                    out.matrix.data() + i * out.width);
        out.labels[i] = data.labels[src];
        out.weights[i] = data.weights[src];
    }
    return out;
}

std::vector<std::vector<int>> stratified_folds(const Dataset& d, int k,
                                               std::uint64_t seed) {
    if (k < 1) throw UsageError("fold count must be >= 1");
    if (static_cast<std::size_t>(k) > d.n_instances())
        throw UsageError("fold count " + std::to_string(k) +
                         " exceeds instance count " +
                         std::to_string(d.n_instances()));
    std::vector<std::vector<int>> per_class(d.n_classes());
    for (std::size_t i = 0; i < d.labels.size(); ++i)
        per_class[static_cast<std::size_t>(d.labels[i])].push_back(
            static_cast<int>(i));

    Rng rng(seed);
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    std::size_t cursor = 0;  // continues across classes to balance fold sizes
    for (auto& members : per_class) {
        for (std::size_t i = members.size(); i > 1; --i)
            std::swap(members[i - 1], members[rng.below(i)]);
        for (int idx : members) {
            folds[cursor % static_cast<std::size_t>(k)].push_back(idx);
            ++cursor;
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> indices(n);
    for (auto& idx : indices) idx = static_cast<int>(rng.below(n));
    return indices;
}

Dataset bootstrap_sample(const Dataset& d, std::uint64_t seed) {
    const std::vector<int> indices = bootstrap_indices(d.n_instances(), seed);
    Dataset out;
    out.schema = d.schema;
    out.class_names = d.class_names;
    out.rows.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (int idx : indices) {
        out.rows.push_back(d.rows[static_cast<std::size_t>(idx)]);
        out.labels.push_back(d.labels[static_cast<std::size_t>(idx)]);
    }
    out.weights.assign(indices.size(), 1.0);
    return out;
}

}  // namespace nd
