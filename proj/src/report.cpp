// Copyright 2026 The vmh Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmh/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "vmh/text.hpp"

namespace vmh {

using ojson = nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string serialize_dump(const EvalReport& r) {
  ojson methods = ojson::array();
  for (const auto& m : r.methods) methods.push_back({{"id", m.id}, {"kind", to_string(m.kind)}});
  ojson header;
  header["dump"] = {{"corpus_hash", r.corpus_hash}, {"corpus_name", r.corpus_name}, {"methods", methods}};
  std::string out = header.dump() + '\n';
  for (const auto& o : r.outcomes) {
    ojson j;
    j["triplet_id"] = o.triplet_id;
    j["method_id"] = o.method_id;
    j["category"] = to_string(o.category);
    if (o.ok()) {
      j["d_pos"] = o.d_pos;
      j["d_neg"] = o.d_neg;
      j["verdict"] = to_string(o.verdict);
    } else {
      j["error_code"] = to_string(*o.error_code);
      j["error"] = o.error;
    }
    out += j.dump() + '\n';
  }
  return out;
}

namespace {

ErrorCode parse_error_code(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::IncompatibleDumps); ++i)
    if (to_string(static_cast<ErrorCode>(i)) == s) return static_cast<ErrorCode>(i);
  throw Error(ErrorCode::FormatError, "unknown error code " + s);
}

}  // namespace

EvalReport parse_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  EvalReport r;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = ojson::parse(line);
      if (!have_header) {
        const auto& h = j.at("dump");
        r.corpus_hash = h.at("corpus_hash").get<std::string>();
        r.corpus_name = h.value("corpus_name", "");
        for (const auto& m : h.at("methods")) {
          const auto kind = m.at("kind").get<std::string>();
          if (kind != "distance" && kind != "score") throw Error(ErrorCode::FormatError, "unknown method kind " + kind);
          r.methods.push_back({m.at("id").get<std::string>(), kind == "distance" ? MethodKind::Distance : MethodKind::Score});
        }
        have_header = true;
        continue;
      }
      MatchOutcome o;
      o.triplet_id = j.at("triplet_id").get<std::string>();
      o.method_id = j.at("method_id").get<std::string>();
      const auto cat = parse_category(j.at("category").get<std::string>());
      if (!cat) throw Error(ErrorCode::FormatError, "unknown category");
      o.category = *cat;
      if (j.contains("error_code")) {
        o.error_code = parse_error_code(j.at("error_code").get<std::string>());
        o.error = j.value("error", "");
      } else {
        o.d_pos = j.at("d_pos").get<double>();
        o.d_neg = j.at("d_neg").get<double>();
        const auto v = parse_verdict(j.at("verdict").get<std::string>());
        if (!v) throw Error(ErrorCode::FormatError, "unknown verdict");
        o.verdict = *v;
      }
      if (std::none_of(r.methods.begin(), r.methods.end(), [&](const MethodInfo& m) { return m.id == o.method_id; }))
        throw Error(ErrorCode::FormatError, "method " + o.method_id + " is not declared in the header");
      r.outcomes.push_back(std::move(o));
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, "dump line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::FormatError, "dump line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(ErrorCode::FormatError, "dump has no header");
  return r;
}

EvalReport load_dump(const std::filesystem::path& path) { return parse_dump(read_file(path)); }

void save_dump(const std::filesystem::path& path, const EvalReport& r) { write_file_atomic(path, serialize_dump(r)); }

std::vector<TableRow> table_rows(const EvalReport& r) {
  std::vector<TableRow> rows;
  for (const auto& m : r.methods) {
    std::vector<double> pooled;
    for (const auto& o : r.outcomes)
      if (o.method_id == m.id && o.ok()) {
        pooled.push_back(o.d_pos);
        pooled.push_back(o.d_neg);
      }
    std::vector<double> norm = pooled.empty() ? std::vector<double>{} : minmax_normalize(pooled);

    TableRow all{m.id, "ALL", {}, 0.0, 0.0};
    std::array<TableRow, kCategoryCount> cats;
    std::array<bool, kCategoryCount> seen{};
    std::size_t k = 0;
    for (const auto& o : r.outcomes) {
      if (o.method_id != m.id) continue;
      const auto ci = static_cast<std::size_t>(o.category);
      seen[ci] = true;
      cats[ci].tally.add(o);
      all.tally.add(o);
      if (o.ok()) {
        cats[ci].norm_d_pos += norm[k];
        cats[ci].norm_d_neg += norm[k + 1];
        all.norm_d_pos += norm[k];
        all.norm_d_neg += norm[k + 1];
        k += 2;
      }
    }
    auto finish = [](TableRow& row) {
      const double n = static_cast<double>(row.tally.n);
      row.norm_d_pos = row.tally.n ? row.norm_d_pos / n : std::nan("");
      row.norm_d_neg = row.tally.n ? row.norm_d_neg / n : std::nan("");
    };
    for (std::size_t ci = 0; ci < kCategoryCount; ++ci) {
      if (!seen[ci]) continue;
      cats[ci].method_id = m.id;
      cats[ci].category = std::string(to_string(static_cast<MRCategory>(ci)));
      finish(cats[ci]);
      rows.push_back(cats[ci]);
    }
    finish(all);
    rows.push_back(all);
  }
  return rows;
}

namespace {

using Grid = std::vector<std::vector<std::string>>;

Grid grid(const std::vector<TableRow>& rows, TableKind kind) {
  Grid g;
  switch (kind) {
    case TableKind::Accuracy: g.push_back({"method", "category", "n", "correct", "ties", "errors", "acc"}); break;
    case TableKind::Distances:
      g.push_back({"method", "category", "n", "avg_d_pos", "avg_d_neg", "raw_avg_d_pos", "raw_avg_d_neg"});
      break;
    case TableKind::Summary:
      g.push_back({"method", "category", "acc", "avg_d_pos", "avg_d_neg", "n", "ties", "errors"});
      break;
  }
  for (const auto& r : rows) {
    const auto& t = r.tally;
    switch (kind) {
      case TableKind::Accuracy:
        g.push_back({r.method_id, r.category, std::to_string(t.n), std::to_string(t.correct), std::to_string(t.ties),
                     std::to_string(t.errors), format_number(t.accuracy())});
        break;
      case TableKind::Distances:
        g.push_back({r.method_id, r.category, std::to_string(t.n), format_number(r.norm_d_pos),
                     format_number(r.norm_d_neg), format_number(t.avg_d_pos()), format_number(t.avg_d_neg())});
        break;
      case TableKind::Summary:
        g.push_back({r.method_id, r.category, format_number(t.accuracy()), format_number(r.norm_d_pos),
                     format_number(r.norm_d_neg), std::to_string(t.n), std::to_string(t.ties),
                     std::to_string(t.errors)});
        break;
    }
  }
  return g;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const Grid& g) {
  std::string out;
  for (const auto& row : g) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += '\n';
  }
  return out;
}

// First two columns left-aligned, the rest right-aligned.
std::string to_text(const Grid& g, std::size_t text_columns) {
  std::vector<std::size_t> width(g.front().size(), 0);
  for (const auto& row : g)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (std::size_t r = 0; r < g.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < g[r].size(); ++i) {
      const auto& cell = g[r][i];
      const std::string pad(width[i] - cell.size(), ' ');
      if (i) line += "  ";
      line += i < text_columns ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  return out;
}

Grid drop_grid(const std::vector<AccuracyDrop>& rows) {
  Grid g{{"method", "acc_metamorphic", "acc_control", "drop"}};
  for (const auto& d : rows)
    g.push_back({d.method_id, format_number(d.metamorphic), format_number(d.control), format_number(d.drop)});
  return g;
}

}  // namespace

std::string render_csv(const std::vector<TableRow>& rows, TableKind kind) { return to_csv(grid(rows, kind)); }
std::string render_text(const std::vector<TableRow>& rows, TableKind kind) { return to_text(grid(rows, kind), 2); }

std::string render_plot_data(const std::vector<TableRow>& rows) {
  Grid g{{"method", "category", "series", "value"}};
  for (const auto& r : rows) {
    g.push_back({r.method_id, r.category, "acc", format_number(r.tally.accuracy())});
    g.push_back({r.method_id, r.category, "avg_d_pos", format_number(r.norm_d_pos)});
    g.push_back({r.method_id, r.category, "avg_d_neg", format_number(r.norm_d_neg)});
  }
  return to_csv(g);
}

std::string render_drop_csv(const std::vector<AccuracyDrop>& rows) { return to_csv(drop_grid(rows)); }
std::string render_drop_text(const std::vector<AccuracyDrop>& rows) { return to_text(drop_grid(rows), 1); }

void write_tables(const EvalReport& r, const std::filesystem::path& dir, std::string_view prefix, bool plot_data) {
  std::filesystem::create_directories(dir);
  const auto rows = table_rows(r);
  const std::string p(prefix);
  const std::pair<const char*, TableKind> kinds[] = {
      {"accuracy", TableKind::Accuracy}, {"distances", TableKind::Distances}, {"summary", TableKind::Summary}};
  for (const auto& [name, kind] : kinds) {
    write_file_atomic(dir / (p + name + ".csv"), render_csv(rows, kind));
    write_file_atomic(dir / (p + name + ".txt"), render_text(rows, kind));
  }
  if (plot_data) write_file_atomic(dir / (p + "plot_data.csv"), render_plot_data(rows));
}

void write_drop_tables(const std::vector<AccuracyDrop>& rows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "drop.csv", render_drop_csv(rows));
  write_file_atomic(dir / "drop.txt", render_drop_text(rows));
}

}  // namespace vmh
