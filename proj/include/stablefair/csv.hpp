#pragma once

#include <string>
#include <vector>

#include "stablefair/core.hpp"

namespace stablefair {

// Column selection for a headered CSV file: which columns are features, which
// holds the sensitive attribute, which holds the label.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string sensitive_column = "group";
  std::string label_column = "label";
};

// Loads a headered CSV. Features must parse as finite numbers; labels must be
// 0/1 or -1/+1 and are mapped onto {-1,+1}; sensitive values (any token) are
// mapped to category indices in encounter order. Errors name the offending
// column or 1-based file line.
Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Writes a dataset back out in the same layout: features at full precision,
// the sensitive column as the category index, the label as -1/1. Reloading a
// written file reproduces the dataset whenever every declared group occurs
// and group indices first appear in increasing order (always true for
// datasets that came from load_csv).
void write_csv(const std::string& path, const Dataset& data, const CsvSchema& schema);

// Scales every feature vector by one global factor so the largest Euclidean
// norm becomes 1 up to round-off. Rejects all-zero features.
struct NormalizeResult {
  Dataset data;
  double factor = 1.0;  // multiplier applied to every feature vector
};
NormalizeResult normalize(const Dataset& data);

}  // namespace stablefair
