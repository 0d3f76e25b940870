#include "rose/cli/io.hpp"

#include "rose/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace rose::cli {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
    if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
    out.emplace_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

LabeledDataset read_dataset_csv(std::istream& in, const std::string& response) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!blank(line)) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("data file is empty (expected a header row)");

  const auto y_it = std::find(header.begin(), header.end(), response);
  if (y_it == header.end()) {
    throw DataError("response column '" + response + "' not found in the header");
  }
  const auto y_col = static_cast<std::size_t>(y_it - header.begin());
  if (header.size() < 2) throw DataError("data file has no feature columns");

  LabeledDataset out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != y_col) out.names.push_back(header[c]);
  }

  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ", column '" + header[c] +
                        "': not a finite number: '" + f + "'");
      }
      (c == y_col ? ys : xs).push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw DataError("data file has no data rows");

  const auto n = static_cast<Eigen::Index>(rows);
  const auto p = static_cast<Eigen::Index>(out.names.size());
  out.data.x.resize(n, p);
  out.data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.data.y(i) = ys[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) out.data.x(i, j) = xs[static_cast<std::size_t>(i * p + j)];
  }
  return out;
}

LabeledDataset read_dataset_csv(const std::string& path, const std::string& response) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return read_dataset_csv(in, response);
}

int resolve_feature(const std::vector<std::string>& names, const std::string& token) {
  const auto it = std::find(names.begin(), names.end(), token);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  if (!token.empty() && ec == std::errc() && ptr == token.data() + token.size()) {
    if (idx < 1 || idx > static_cast<int>(names.size())) {
      throw ConfigError("target index " + token + " outside [1, " + std::to_string(names.size()) + "]");
    }
    return idx - 1;
  }
  throw ConfigError("target '" + token + "' is neither a column name nor a 1-based index");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace rose::cli
