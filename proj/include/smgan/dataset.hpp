#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "smgan/matrix.hpp"

namespace smgan {

// Feature matrix plus binary labels; label 1 is the minority/positive class.
struct Dataset {
  std::string name;
  Matrix features;          // instances x d
  std::vector<int> labels;  // 0 or 1, one per row

  std::size_t size() const { return features.rows; }
  std::size_t d() const { return features.cols; }
  std::size_t count_label(int value) const;
};

// How to read one CSV file. The label column is a 0-based index or, when the
// file has a header row, a column name. Cells equal to positive_label map to
// label 1; every other value maps to 0.
struct CsvSpec {
  std::string path;
  std::variant<std::size_t, std::string> label_column = std::size_t{0};
  std::string positive_label;
  bool has_header = false;
  std::string name;  // defaults to the file stem
};

Dataset load_csv(const CsvSpec& spec);
Dataset load_csv(const std::string& path, std::size_t label_column,
                 const std::string& positive_label, bool has_header = false);

// Reads a JSON manifest: an array of {name, path, label_column,
// positive_label, header} entries. Paths are resolved relative to the
// manifest's directory.
std::vector<CsvSpec> load_manifest(const std::string& path);

struct SplitSpec {
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct Splits {
  Dataset train, val, test;
};

// Stratified split: class proportions carry over within one instance per
// split, every class lands at least once in each split, and the result is
// deterministic for a fixed seed. Requires at least 3 members per class.
Splits stratified_split(const Dataset& ds, const SplitSpec& spec);

// Per-feature min/max fitted on the training split only.
struct ScaleParams {
  std::vector<double> minimum;
  std::vector<double> maximum;
};

ScaleParams fit_scale(const Dataset& train);

// Maps each feature to (x - min) / (max - min); a constant feature maps to 0.
// Values outside the fitted range (validation/test) are clamped to
// [-0.5, 1.5].
Dataset apply_scale(const Dataset& ds, const ScaleParams& p);

// Inverse of apply_scale for synthetic samples generated in scaled space.
Matrix unscale(const Matrix& scaled, const ScaleParams& p);

struct ClassPartition {
  Dataset minority;  // label 1 rows
  Dataset majority;  // label 0 rows
};

ClassPartition partition_by_class(const Dataset& ds);

// Copies the selected rows into a new dataset, preserving order.
Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx);

// Appends synthetic rows labeled 1 after the original rows.
Dataset augment_with_minority(const Dataset& train, const Matrix& synthetic);

}  // namespace smgan
