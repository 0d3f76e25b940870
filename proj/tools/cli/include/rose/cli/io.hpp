#pragma once

#include "rose/types.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rose::cli {

/// Malformed or unreadable input data (exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabeledDataset {
  Dataset data;
  /// Feature column names in file order (the response removed).
  std::vector<std::string> names;
};

/// Header row, then numeric rows; the column named `response` is y and every
/// other column is a feature. Blank lines are skipped.
LabeledDataset read_dataset_csv(std::istream& in, const std::string& response = "y");
LabeledDataset read_dataset_csv(const std::string& path, const std::string& response = "y");

/// Resolves a column name or 1-based index to a 0-based feature index.
int resolve_feature(const std::vector<std::string>& names, const std::string& token);

/// Shortest decimal text that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace rose::cli
