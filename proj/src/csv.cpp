#include "stablefair/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "stablefair/common.hpp"

namespace stablefair {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_number(const std::string& token, double& out) {
  std::string t = token;
  if (!t.empty() && t.front() == '+') t.erase(t.begin());
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw DataError("csv: column '" + name + "' not found in header");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  if (schema.feature_columns.empty()) {
    throw DataError("csv: schema lists no feature columns");
  }
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: '" + path + "' is empty");
  const std::vector<std::string> header = split_fields(line);

  std::vector<std::size_t> feature_cols;
  feature_cols.reserve(schema.feature_columns.size());
  for (const auto& name : schema.feature_columns) {
    feature_cols.push_back(find_column(header, name));
  }
  const std::size_t sensitive_col = find_column(header, schema.sensitive_column);
  const std::size_t label_col = find_column(header, schema.label_column);

  std::map<std::string, int> group_index;  // token -> encounter-order index
  std::vector<Sample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    const auto cell = [&](std::size_t col) -> const std::string& {
      if (col >= fields.size()) {
        throw DataError("csv: line " + std::to_string(line_no) + " has only " +
                        std::to_string(fields.size()) + " fields");
      }
      return fields[col];
    };

    Sample s;
    s.x.resize(static_cast<Eigen::Index>(feature_cols.size()));
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      double v;
      if (!parse_number(cell(feature_cols[j]), v)) {
        throw DataError("csv: line " + std::to_string(line_no) +
                        ", column '" + schema.feature_columns[j] +
                        "': cannot parse '" + cell(feature_cols[j]) + "' as a number");
      }
      s.x[static_cast<Eigen::Index>(j)] = v;
    }

    double label;
    if (!parse_number(cell(label_col), label) ||
        (label != 0.0 && label != 1.0 && label != -1.0)) {
      throw DataError("csv: line " + std::to_string(line_no) +
                      ": label '" + cell(label_col) + "' is not 0/1 or -1/1");
    }
    s.y = label == 1.0 ? 1 : -1;

    const std::string& tok = cell(sensitive_col);
    if (tok.empty()) {
      throw DataError("csv: line " + std::to_string(line_no) + ": empty sensitive value");
    }
    const auto [it, inserted] =
        group_index.emplace(tok, static_cast<int>(group_index.size()));
    s.z = it->second;
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw DataError("csv: '" + path + "' has no data rows");
  return Dataset(std::move(samples), static_cast<int>(feature_cols.size()),
                 static_cast<int>(group_index.size()));
}

void write_csv(const std::string& path, const Dataset& data, const CsvSchema& schema) {
  if (static_cast<int>(schema.feature_columns.size()) != data.dim()) {
    throw DataError("csv: schema has " + std::to_string(schema.feature_columns.size()) +
                    " feature columns for dim " + std::to_string(data.dim()));
  }
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write '" + path + "'");
  for (const auto& name : schema.feature_columns) out << name << ',';
  out << schema.sensitive_column << ',' << schema.label_column << '\n';
  char buf[64];
  for (const auto& s : data.samples()) {
    for (Eigen::Index j = 0; j < s.x.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", s.x[j]);
      out << buf << ',';
    }
    out << s.z << ',' << s.y << '\n';
  }
  if (!out) throw DataError("csv: write to '" + path + "' failed");
}

NormalizeResult normalize(const Dataset& data) {
  double max_norm = 0.0;
  for (const auto& s : data.samples()) max_norm = std::max(max_norm, s.x.norm());
  if (max_norm == 0.0) throw DataError("normalize: all features are zero");
  const double factor = 1.0 / max_norm;
  std::vector<Sample> samples = data.samples();
  for (auto& s : samples) s.x *= factor;
  return NormalizeResult{Dataset(std::move(samples), data.dim(), data.num_groups()),
                         factor};
}

}  // namespace stablefair
