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

#include "mpdt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "mpdt/random.hpp"

namespace mpdt {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

// Code order of a column's values and the code of every row.
struct Coding {
  std::vector<std::string> values;
  std::vector<std::size_t> codes;
};

Coding code_column(const Column& col) {
  Coding c;
  c.codes.resize(col.size());
  if (col.is_numeric) {
    std::vector<double> distinct(col.numeric);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (double d : distinct) c.values.push_back(format_double(d));
    for (std::size_t i = 0; i < col.size(); ++i) {
      c.codes[i] = static_cast<std::size_t>(
          std::lower_bound(distinct.begin(), distinct.end(), col.numeric[i]) -
          distinct.begin());
    }
  } else {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < col.size(); ++i) {
      auto [it, inserted] = index.emplace(col.text[i], c.values.size());
      if (inserted) c.values.push_back(col.text[i]);
      c.codes[i] = it->second;
    }
  }
  return c;
}

int bits_for(std::size_t domain_size) {
  int b = 0;
  while ((std::size_t{1} << b) < domain_size) ++b;
  return b;
}

}  // namespace

const char* to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kContinuous:
      return "continuous";
    case ColumnKind::kOrdinal:
      return "ordinal";
    case ColumnKind::kNominal:
      return "nominal";
    case ColumnKind::kBinary:
      return "binary";
  }
  return "?";
}

std::string Column::cell(std::size_t row) const {
  return is_numeric ? format_double(numeric[row]) : text[row];
}

RawDataset parse_csv(std::istream& in, const std::string& label) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw DataError("empty file");
  const auto label_it = std::find(header.begin(), header.end(), label);
  if (label_it == header.end()) {
    throw DataError("label column '" + label + "' not found in header");
  }

  std::vector<std::vector<std::string>> cells(header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c].empty() || fields[c] == "?") {
        throw DataError("line " + std::to_string(line_no) + ": missing value in column '" +
                        header[c] + "'");
      }
      cells[c].push_back(std::move(fields[c]));
    }
  }
  if (cells[0].empty()) throw DataError("empty dataset");

  RawDataset ds;
  ds.n_rows = cells[0].size();
  ds.label_column = static_cast<std::size_t>(label_it - header.begin());
  for (std::size_t c = 0; c < header.size(); ++c) {
    Column col;
    col.name = header[c];
    std::vector<double> nums(cells[c].size());
    bool numeric = true;
    for (std::size_t r = 0; r < cells[c].size() && numeric; ++r) {
      numeric = parse_double(cells[c][r], nums[r]);
    }
    std::size_t distinct;
    if (numeric) {
      col.is_numeric = true;
      col.numeric = std::move(nums);
      distinct = std::set<double>(col.numeric.begin(), col.numeric.end()).size();
    } else {
      col.text = std::move(cells[c]);
      distinct = std::set<std::string>(col.text.begin(), col.text.end()).size();
    }
    if (distinct == 2) {
      col.kind = ColumnKind::kBinary;
    } else if (numeric && distinct > kMaxCategoricalValues) {
      col.kind = ColumnKind::kContinuous;
    } else {
      col.kind = numeric ? ColumnKind::kOrdinal : ColumnKind::kNominal;
    }
    ds.columns.push_back(std::move(col));
  }
  return ds;
}

RawDataset load_csv(const std::filesystem::path& path, const std::string& label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, label);
}

RawDataset discretize(const RawDataset& ds, int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("discretize needs at least 2 bins");
  RawDataset out = ds;
  for (std::size_t c = 0; c < out.columns.size(); ++c) {
    auto& col = out.columns[c];
    if (c == ds.label_column || col.kind != ColumnKind::kContinuous) continue;
    const auto [lo_it, hi_it] = std::minmax_element(col.numeric.begin(), col.numeric.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> edges;
    for (int i = 1; i < n_bins; ++i) {
      edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins));
    }
    for (auto& x : col.numeric) {
      if (hi == lo) {
        x = 0;
      } else {
        x = static_cast<double>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
      }
    }
    col.kind = ColumnKind::kOrdinal;
  }
  return out;
}

BinDataset binarize(const RawDataset& ds) {
  for (std::size_t c = 0; c < ds.columns.size(); ++c) {
    if (c != ds.label_column && ds.columns[c].kind == ColumnKind::kContinuous) {
      throw std::invalid_argument("binarize: column '" + ds.columns[c].name +
                                  "' is continuous; discretize first");
    }
  }
  BinDataset out;
  std::vector<Coding> codings;
  std::vector<int> widths;
  for (std::size_t c = 0; c < ds.columns.size(); ++c) {
    if (c == ds.label_column) continue;
    const Column& col = ds.columns[c];
    Coding coding = code_column(col);
    const int width = col.kind == ColumnKind::kBinary ? 1 : bits_for(coding.values.size());
    for (int b = 0; b < width; ++b) out.provenance.push_back({c, col.name, b, width});
    out.domains.push_back({col.name, coding.values});
    codings.push_back(std::move(coding));
    widths.push_back(width);
  }
  out.k = out.provenance.size();
  const Coding label = code_column(ds.columns[ds.label_column]);
  out.class_names = label.values;
  out.n_classes = label.values.size();
  out.bits.reserve(ds.n_rows * out.k);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    for (std::size_t f = 0; f < codings.size(); ++f) {
      const std::size_t code = codings[f].codes[r];
      for (int b = widths[f] - 1; b >= 0; --b) {
        out.bits.push_back(static_cast<std::uint8_t>((code >> b) & 1));
      }
    }
    out.labels.push_back(static_cast<int>(label.codes[r]));
    out.source_rows.push_back(r);
  }
  return out;
}

std::vector<std::string> decode_row(const BinDataset& ds, std::size_t q) {
  std::vector<std::string> out;
  std::size_t r = 0;
  for (const auto& domain : ds.domains) {
    const int width = bits_for(domain.values.size());
    std::size_t code = 0;
    for (int b = 0; b < width; ++b) code = (code << 1) | ds.value(q, r + static_cast<std::size_t>(b));
    r += static_cast<std::size_t>(width);
    out.push_back(code < domain.values.size() ? domain.values[code] : "?");
  }
  return out;
}

BinDataset BinDataset::subset(std::span<const std::size_t> indices) const {
  BinDataset out;
  out.k = k;
  out.n_classes = n_classes;
  out.provenance = provenance;
  out.domains = domains;
  out.class_names = class_names;
  out.bits.reserve(indices.size() * k);
  for (std::size_t q : indices) {
    const auto r = row(q);
    out.bits.insert(out.bits.end(), r.begin(), r.end());
    out.labels.push_back(labels[q]);
    out.source_rows.push_back(source_rows.empty() ? q : source_rows[q]);
  }
  return out;
}

BinDataset BinDataset::concat(const BinDataset& other) const {
  if (other.k != k) throw std::invalid_argument("concat: feature counts differ");
  BinDataset out = *this;
  out.bits.insert(out.bits.end(), other.bits.begin(), other.bits.end());
  out.labels.insert(out.labels.end(), other.labels.begin(), other.labels.end());
  out.source_rows.insert(out.source_rows.end(), other.source_rows.begin(),
                         other.source_rows.end());
  out.n_classes = std::max(n_classes, other.n_classes);
  return out;
}

BinDataset BinDataset::from_rows(const std::vector<std::vector<std::uint8_t>>& rows,
                                 const std::vector<int>& labels,
                                 std::size_t n_classes) {
  if (rows.size() != labels.size()) throw std::invalid_argument("rows/labels size mismatch");
  BinDataset out;
  out.k = rows.empty() ? 0 : rows[0].size();
  int max_label = -1;
  for (std::size_t q = 0; q < rows.size(); ++q) {
    if (rows[q].size() != out.k) throw std::invalid_argument("ragged bit rows");
    for (auto b : rows[q]) {
      if (b > 1) throw std::invalid_argument("feature values must be 0 or 1");
      out.bits.push_back(b);
    }
    if (labels[q] < 0) throw std::invalid_argument("negative label");
    max_label = std::max(max_label, labels[q]);
    out.labels.push_back(labels[q]);
    out.source_rows.push_back(q);
  }
  out.n_classes = std::max(n_classes, static_cast<std::size_t>(max_label + 1));
  for (std::size_t r = 0; r < out.k; ++r) {
    out.provenance.push_back({r, "f" + std::to_string(r), 0, 1});
    out.domains.push_back({"f" + std::to_string(r), {"0", "1"}});
  }
  for (std::size_t c = 0; c < out.n_classes; ++c) out.class_names.push_back(std::to_string(c));
  return out;
}

std::vector<std::vector<std::size_t>> check_separability(const BinDataset& ds) {
  std::map<std::vector<std::uint8_t>, std::vector<std::size_t>> groups;
  std::vector<const std::vector<std::size_t>*> order;
  for (std::size_t q = 0; q < ds.n_rows(); ++q) {
    const auto r = ds.row(q);
    auto [it, inserted] = groups.try_emplace(std::vector<std::uint8_t>(r.begin(), r.end()));
    if (inserted) order.push_back(&it->second);
    it->second.push_back(q);
  }
  std::vector<std::vector<std::size_t>> conflicts;
  for (const auto* g : order) {
    const int first = ds.labels[g->front()];
    if (std::any_of(g->begin(), g->end(), [&](std::size_t q) { return ds.labels[q] != first; })) {
      conflicts.push_back(*g);
    }
  }
  return conflicts;
}

BinDataset resolve_conflicts_majority(const BinDataset& ds) {
  std::vector<bool> drop(ds.n_rows(), false);
  for (const auto& group : check_separability(ds)) {
    std::vector<std::size_t> votes(ds.n_classes, 0);
    for (std::size_t q : group) ++votes[static_cast<std::size_t>(ds.labels[q])];
    const auto winner = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    for (std::size_t q : group) drop[q] = ds.labels[q] != winner;
  }
  std::vector<std::size_t> keep;
  for (std::size_t q = 0; q < ds.n_rows(); ++q) {
    if (!drop[q]) keep.push_back(q);
  }
  return ds.subset(keep);
}

void SplitSpec::validate() const {
  if (train_frac <= 0 || selection_frac <= 0 || test_frac <= 0) {
    throw std::invalid_argument("split fractions must be positive");
  }
  if (std::abs(train_frac + selection_frac + test_frac - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

TwoWaySplit stratified_holdout(const BinDataset& ds, double holdout_frac,
                               std::uint64_t seed, std::size_t min_class_members) {
  if (holdout_frac < 0 || holdout_frac >= 1) {
    throw std::invalid_argument("holdout fraction must be in [0, 1)");
  }
  const std::size_t n = ds.n_rows();
  const auto total = std::min(
      n, static_cast<std::size_t>(std::ceil(holdout_frac * static_cast<double>(n) - 1e-9)));

  std::vector<std::vector<std::size_t>> members(ds.n_classes);
  for (std::size_t q = 0; q < n; ++q) members[static_cast<std::size_t>(ds.labels[q])].push_back(q);

  // Largest-remainder allocation; one row per class always stays behind.
  std::vector<std::size_t> take(ds.n_classes, 0);
  std::vector<std::size_t> cap(ds.n_classes, 0);
  std::vector<double> frac(ds.n_classes, 0);
  std::size_t allocated = 0;
  for (std::size_t c = 0; c < ds.n_classes; ++c) {
    if (members[c].size() < min_class_members) continue;
    cap[c] = members[c].size() - 1;
    const double target = static_cast<double>(members[c].size() * total) / static_cast<double>(n);
    take[c] = std::min(cap[c], static_cast<std::size_t>(std::floor(target + 1e-9)));
    frac[c] = target - static_cast<double>(take[c]);
    allocated += take[c];
  }
  std::vector<std::size_t> order(ds.n_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b] + 1e-12; });
  bool progress = true;
  while (allocated < total && progress) {
    progress = false;
    for (std::size_t c : order) {
      if (allocated == total) break;
      if (take[c] < cap[c]) {
        ++take[c];
        ++allocated;
        progress = true;
      }
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> keep;
  std::vector<std::size_t> hold;
  for (std::size_t c = 0; c < ds.n_classes; ++c) {
    auto rows = members[c];
    rng.shuffle(rows);
    hold.insert(hold.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take[c]));
    keep.insert(keep.end(), rows.begin() + static_cast<std::ptrdiff_t>(take[c]), rows.end());
  }
  std::sort(keep.begin(), keep.end());
  std::sort(hold.begin(), hold.end());
  return {ds.subset(keep), ds.subset(hold)};
}

ThreeWaySplit stratified_split(const BinDataset& ds, const SplitSpec& spec) {
  spec.validate();
  auto first = stratified_holdout(ds, spec.test_frac, derive_seed(spec.seed, "split/test"), 3);
  auto second = stratified_holdout(first.keep,
                                   spec.selection_frac / (spec.train_frac + spec.selection_frac),
                                   derive_seed(spec.seed, "split/selection"), 3);
  return {std::move(second.keep), std::move(second.holdout), std::move(first.holdout)};
}

void write_binarized(const BinDataset& ds, std::ostream& out) {
  out << ds.k << ' ' << ds.n_rows() << ' ' << ds.n_classes << '\n';
  for (std::size_t q = 0; q < ds.n_rows(); ++q) {
    for (auto b : ds.row(q)) out << static_cast<int>(b) << ' ';
    out << ds.labels[q] << '\n';
  }
}

BinDataset read_binarized(std::istream& in) {
  std::size_t k = 0, n = 0, classes = 0;
  if (!(in >> k >> n >> classes)) throw DataError("binarized dataset: bad header");
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(k));
  std::vector<int> labels(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t r = 0; r < k; ++r) {
      int b = -1;
      if (!(in >> b) || (b != 0 && b != 1)) {
        throw DataError("binarized dataset: row " + std::to_string(q) + " has a non-bit value");
      }
      rows[q][r] = static_cast<std::uint8_t>(b);
    }
    if (!(in >> labels[q]) || labels[q] < 0 ||
        static_cast<std::size_t>(labels[q]) >= classes) {
      throw DataError("binarized dataset: row " + std::to_string(q) + " has a bad class id");
    }
  }
  return BinDataset::from_rows(rows, labels, classes);
}

}  // namespace mpdt
