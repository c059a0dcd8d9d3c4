/*
 * Copyright 2026 The MPDT Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MPDT_DATASET_HPP_
#define MPDT_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpdt {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ColumnKind { kContinuous, kOrdinal, kNominal, kBinary };

const char* to_string(ColumnKind kind);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNominal;
  // Numeric columns hold their values in numeric; others in text.
  bool is_numeric = false;
  std::vector<double> numeric;
  std::vector<std::string> text;

  std::size_t size() const { return is_numeric ? numeric.size() : text.size(); }
  // Canonical string form of one cell.
  std::string cell(std::size_t row) const;
};

struct RawDataset {
  std::vector<Column> columns;
  std::size_t label_column = 0;
  std::size_t n_rows = 0;

  std::size_t n_features() const { return columns.size() - 1; }
};

// Columns that are all-numeric with more than this many distinct values are
// treated as continuous.
inline constexpr std::size_t kMaxCategoricalValues = 8;

RawDataset parse_csv(std::istream& in, const std::string& label);
RawDataset load_csv(const std::filesystem::path& path, const std::string& label);

// Equal-width binning of every continuous feature column into n_bins ordinal
// bins over [min, max]; the maximum falls in the last bin.
RawDataset discretize(const RawDataset& ds, int n_bins = 8);

// Where a binary feature came from: bit position bit (0 = most significant)
// of an n_bits-wide code of original column.
struct FeatureSource {
  std::size_t column = 0;
  std::string column_name;
  int bit = 0;
  int n_bits = 1;
};

// Values of an original column in code order (code i <-> values[i]).
struct ColumnDomain {
  std::string name;
  std::vector<std::string> values;
};

struct BinDataset {
  std::size_t k = 0;
  std::size_t n_classes = 0;
  std::vector<std::uint8_t> bits;  // row-major, n_rows() x k
  std::vector<int> labels;
  std::vector<std::size_t> source_rows;  // row index in the loaded file
  std::vector<FeatureSource> provenance;
  std::vector<ColumnDomain> domains;  // feature columns, in file order
  std::vector<std::string> class_names;

  std::size_t n_rows() const { return labels.size(); }
  std::span<const std::uint8_t> row(std::size_t q) const {
    return {bits.data() + q * k, k};
  }
  std::uint8_t value(std::size_t q, std::size_t r) const { return bits[q * k + r]; }

  // Rows selected by indices, in the given order; metadata is shared.
  BinDataset subset(std::span<const std::size_t> indices) const;
  // Rows of both datasets (same feature space), this one first.
  BinDataset concat(const BinDataset& other) const;

  // Builds a dataset from explicit rows; labels must lie in [0, n_classes).
  static BinDataset from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                              const std::vector<int>& labels,
                              std::size_t n_classes = 0);
};

// One feature per binary column, ceil(log2 |D|) big-endian features for other
// columns. Ordinal values keep numeric order, nominal ones first appearance.
BinDataset binarize(const RawDataset& ds);

// Original-column values of binarized row q, one per feature column; codes
// outside a domain decode to "?".
std::vector<std::string> decode_row(const BinDataset& ds, std::size_t q);

// Maximal groups of rows sharing a bit-vector but not a label.
std::vector<std::vector<std::size_t>> check_separability(const BinDataset& ds);

// Drops, within each conflict group, rows not carrying the group's majority
// label (ties go to the smaller class id).
BinDataset resolve_conflicts_majority(const BinDataset& ds);

struct SplitSpec {
  double train_frac = 0.64;
  double selection_frac = 0.16;
  double test_frac = 0.20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TwoWaySplit {
  BinDataset keep;
  BinDataset holdout;
};

struct ThreeWaySplit {
  BinDataset train;
  BinDataset selection;
  BinDataset test;
};

// Stratified split holding out ceil(holdout_frac * n) rows, allocated to
// classes by largest remainder. Classes with fewer than min_class_members rows
// stay entirely on the keep side.
TwoWaySplit stratified_holdout(const BinDataset& ds, double holdout_frac,
                               std::uint64_t seed,
                               std::size_t min_class_members = 2);

// Test rows are held out first, then selection rows from the remainder.
ThreeWaySplit stratified_split(const BinDataset& ds, const SplitSpec& spec);

// "k n_rows n_classes" header, then per row k bits and the class id.
void write_binarized(const BinDataset& ds, std::ostream& out);
BinDataset read_binarized(std::istream& in);

}  // namespace mpdt

#endif  // MPDT_DATASET_HPP_
