#include "smgan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "smgan/rng.hpp"

namespace smgan {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (std::isspace(static_cast<unsigned char>(s[a])) != 0)) ++a;
  while (b > a && (std::isspace(static_cast<unsigned char>(s[b - 1])) != 0)) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trim(raw);
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size() || !std::isfinite(v))
    throw std::runtime_error("cannot parse '" + cell + "' as a number at row " +
                             std::to_string(row + 1) + ", column " + std::to_string(col + 1));
  return v;
}

}  // namespace

std::size_t Dataset::count_label(int value) const {
  std::size_t n = 0;
  for (int l : labels) n += (l == value) ? 1u : 0u;
  return n;
}

Dataset load_csv(const CsvSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw std::runtime_error("cannot open dataset file '" + spec.path + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
  }
  std::vector<std::string> header;
  if (spec.has_header) {
    if (rows.empty()) throw std::runtime_error("'" + spec.path + "' contains only a header");
    header = rows.front();
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw std::runtime_error("'" + spec.path + "' contains no data rows");

  const std::size_t n_cols = rows.front().size();
  if (n_cols < 2) throw std::runtime_error("'" + spec.path + "' needs a label column and at least one feature");

  std::size_t label_col = 0;
  if (std::holds_alternative<std::size_t>(spec.label_column)) {
    label_col = std::get<std::size_t>(spec.label_column);
  } else {
    const std::string& name = std::get<std::string>(spec.label_column);
    if (!spec.has_header)
      throw std::runtime_error("label column '" + name + "' given by name, but file has no header");
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end())
      throw std::runtime_error("label column '" + name + "' not found in header of '" + spec.path + "'");
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  if (label_col >= n_cols)
    throw std::runtime_error("label column " + std::to_string(label_col) + " out of range (file has " +
                             std::to_string(n_cols) + " columns)");

  Dataset ds;
  ds.name = spec.name.empty() ? std::filesystem::path(spec.path).stem().string() : spec.name;
  ds.features = Matrix(rows.size(), n_cols - 1);
  ds.labels.resize(rows.size());

  std::set<std::string> distinct;
  std::size_t positives = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n_cols)
      throw std::runtime_error("row " + std::to_string(r + 1 + (spec.has_header ? 1 : 0)) + " of '" +
                               spec.path + "' has " + std::to_string(rows[r].size()) +
                               " columns, expected " + std::to_string(n_cols));
    std::size_t f = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c == label_col) continue;
      ds.features(r, f++) = parse_cell(rows[r][c], r, c);
    }
    const std::string raw_label = trim(rows[r][label_col]);
    distinct.insert(raw_label);
    const bool positive = raw_label == spec.positive_label;
    ds.labels[r] = positive ? 1 : 0;
    positives += positive ? 1u : 0u;
  }

  if (distinct.size() < 2)
    throw std::runtime_error("label column of '" + spec.path + "' has a single distinct value ('" +
                             *distinct.begin() + "')");
  if (positives == 0)
    throw std::runtime_error("positive label '" + spec.positive_label + "' never occurs in '" +
                             spec.path + "'");
  return ds;
}

Dataset load_csv(const std::string& path, std::size_t label_column,
                 const std::string& positive_label, bool has_header) {
  CsvSpec spec;
  spec.path = path;
  spec.label_column = label_column;
  spec.positive_label = positive_label;
  spec.has_header = has_header;
  return load_csv(spec);
}

std::vector<CsvSpec> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
  nlohmann::json j;
  in >> j;
  const nlohmann::json& list = j.is_array() ? j : j.at("datasets");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<CsvSpec> specs;
  for (const auto& e : list) {
    CsvSpec s;
    s.name = e.at("name").get<std::string>();
    s.path = (base / e.at("path").get<std::string>()).string();
    const auto& col = e.at("label_column");
    if (col.is_number_unsigned() || col.is_number_integer())
      s.label_column = col.get<std::size_t>();
    else
      s.label_column = col.get<std::string>();
    const auto& pos = e.at("positive_label");
    s.positive_label = pos.is_string() ? pos.get<std::string>() : pos.dump();
    s.has_header = e.value("header", false);
    specs.push_back(std::move(s));
  }
  if (specs.empty()) throw std::runtime_error("manifest '" + path + "' lists no datasets");
  return specs;
}

namespace {

void validate_split_spec(const SplitSpec& spec) {
  const double fr[3] = {spec.train_fraction, spec.val_fraction, spec.test_fraction};
  for (double f : fr)
    if (!(f > 0.0 && f < 1.0))
      throw std::invalid_argument("split fractions must lie in (0,1)");
  if (std::abs(fr[0] + fr[1] + fr[2] - 1.0) > 1e-9)
    throw std::invalid_argument("split fractions must sum to 1");
}

// Rounds the per-class counts, then repairs so every split keeps at least one
// member of the class.
void allocate_counts(std::size_t m, const SplitSpec& spec, std::size_t out[3]) {
  out[0] = static_cast<std::size_t>(std::max<long long>(1, std::llround(spec.train_fraction * static_cast<double>(m))));
  out[1] = static_cast<std::size_t>(std::max<long long>(1, std::llround(spec.val_fraction * static_cast<double>(m))));
  while (out[0] + out[1] >= m) {
    if (out[0] >= out[1] && out[0] > 1)
      --out[0];
    else if (out[1] > 1)
      --out[1];
    else
      throw std::invalid_argument("class too small to stratify");
  }
  out[2] = m - out[0] - out[1];
}

}  // namespace

Splits stratified_split(const Dataset& ds, const SplitSpec& spec) {
  validate_split_spec(spec);
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i] == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c)
    if (by_class[c].size() < 3)
      throw std::invalid_argument("class " + std::to_string(c) + " of '" + ds.name + "' has " +
                                  std::to_string(by_class[c].size()) +
                                  " members; need at least 3 to stratify");

  Rng rng(spec.seed);
  std::vector<std::size_t> split_idx[3];
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t>& members = by_class[c];
    rng.shuffle(members);
    std::size_t counts[3];
    allocate_counts(members.size(), spec, counts);
    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s)
      for (std::size_t k = 0; k < counts[s]; ++k) split_idx[s].push_back(members[pos++]);
  }
  Splits out;
  Dataset* targets[3] = {&out.train, &out.val, &out.test};
  for (int s = 0; s < 3; ++s) {
    std::sort(split_idx[s].begin(), split_idx[s].end());
    *targets[s] = take_rows(ds, split_idx[s]);
  }
  return out;
}

ScaleParams fit_scale(const Dataset& train) {
  if (train.size() == 0) throw std::invalid_argument("fit_scale: empty training set");
  ScaleParams p;
  p.minimum.assign(train.d(), 0.0);
  p.maximum.assign(train.d(), 0.0);
  for (std::size_t j = 0; j < train.d(); ++j) {
    double lo = train.features(0, j), hi = lo;
    for (std::size_t i = 1; i < train.size(); ++i) {
      lo = std::min(lo, train.features(i, j));
      hi = std::max(hi, train.features(i, j));
    }
    p.minimum[j] = lo;
    p.maximum[j] = hi;
  }
  return p;
}

Dataset apply_scale(const Dataset& ds, const ScaleParams& p) {
  if (ds.d() != p.minimum.size()) throw std::invalid_argument("apply_scale: dimension mismatch");
  Dataset out = ds;
  for (std::size_t j = 0; j < ds.d(); ++j) {
    const double range = p.maximum[j] - p.minimum[j];
    for (std::size_t i = 0; i < ds.size(); ++i) {
      double v = range > 0.0 ? (ds.features(i, j) - p.minimum[j]) / range : 0.0;
      v = std::clamp(v, -0.5, 1.5);
      out.features(i, j) = v;
    }
  }
  return out;
}

Matrix unscale(const Matrix& scaled, const ScaleParams& p) {
  if (scaled.cols != p.minimum.size()) throw std::invalid_argument("unscale: dimension mismatch");
  Matrix out = scaled;
  for (std::size_t j = 0; j < out.cols; ++j) {
    const double range = p.maximum[j] - p.minimum[j];
    for (std::size_t i = 0; i < out.rows; ++i)
      out(i, j) = p.minimum[j] + out(i, j) * range;
  }
  return out;
}

ClassPartition partition_by_class(const Dataset& ds) {
  std::vector<std::size_t> ones, zeros;
  for (std::size_t i = 0; i < ds.size(); ++i) (ds.labels[i] == 1 ? ones : zeros).push_back(i);
  if (ones.empty() || zeros.empty())
    throw std::invalid_argument("partition_by_class: '" + ds.name + "' has a single class");
  if (ones.size() > zeros.size())
    throw std::invalid_argument("partition_by_class: label-1 class of '" + ds.name +
                                "' is larger than label-0 (" + std::to_string(ones.size()) + " > " +
                                std::to_string(zeros.size()) + "); re-check positive_label");
  ClassPartition parts;
  parts.minority = take_rows(ds, ones);
  parts.majority = take_rows(ds, zeros);
  return parts;
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
  Dataset out;
  out.name = ds.name;
  out.features = take_rows(ds.features, idx);
  out.labels.reserve(idx.size());
  for (std::size_t i : idx) out.labels.push_back(ds.labels[i]);
  return out;
}

Dataset augment_with_minority(const Dataset& train, const Matrix& synthetic) {
  if (synthetic.rows > 0 && synthetic.cols != train.d())
    throw std::invalid_argument("augment_with_minority: dimension mismatch");
  Dataset out;
  out.name = train.name;
  out.features = vstack(train.features, synthetic);
  out.labels = train.labels;
  out.labels.insert(out.labels.end(), synthetic.rows, 1);
  return out;
}

}  // namespace smgan
