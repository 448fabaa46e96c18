// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vmh/simulator.hpp"

namespace vmh {

/// Outcome dump: header {"dump": {corpus_hash, corpus_name, methods}} then one record
/// {triplet_id, method_id, category, d_pos, d_neg, verdict} per outcome, or
/// {triplet_id, method_id, category, error_code, error} for a failed one.
std::string serialize_dump(const EvalReport& r);
/// Throws FormatError.
EvalReport parse_dump(std::string_view text);
EvalReport load_dump(const std::filesystem::path& path);
void save_dump(const std::filesystem::path& path, const EvalReport& r);

/// One per (method, category) plus a trailing "ALL" row per method.
struct TableRow {
  std::string method_id;
  std::string category;
  Tally tally;
  /// Averages after Max-Min normalization over all of the method's valid d_pos and d_neg.
  double norm_d_pos = 0.0;
  double norm_d_neg = 0.0;
};

std::vector<TableRow> table_rows(const EvalReport& r);

enum class TableKind { Accuracy, Distances, Summary };

std::string render_csv(const std::vector<TableRow>& rows, TableKind kind);
std::string render_text(const std::vector<TableRow>& rows, TableKind kind);
/// Long format: method,category,series,value.
std::string render_plot_data(const std::vector<TableRow>& rows);

std::string render_drop_csv(const std::vector<AccuracyDrop>& rows);
std::string render_drop_text(const std::vector<AccuracyDrop>& rows);

/// Writes <prefix>accuracy, <prefix>distances and <prefix>summary as .csv and .txt
/// (and <prefix>plot_data.csv when asked). Files are replaced atomically.
void write_tables(const EvalReport& r, const std::filesystem::path& dir, std::string_view prefix = {},
                  bool plot_data = false);
void write_drop_tables(const std::vector<AccuracyDrop>& rows, const std::filesystem::path& dir);

/// "%.6f", or "nan".
std::string format_number(double x);

}  // namespace vmh
