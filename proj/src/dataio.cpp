// Copyright 2026 The clx authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clx/dataio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace clx {

CsvTable read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool at_record_start = true;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    at_record_start = true;
    ++line;
  };

  while (i < text.size()) {
    at_record_start = false;
    if (text[i] == '"' && field.empty()) {
      const std::size_t open_line = line;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field += text[i++];
      }
      if (!closed)
        throw DataError("malformed CSV: unterminated quoted field starting on line " +
                        std::to_string(open_line));
      if (i < text.size() && text[i] != ',' && text[i] != '\n' &&
          !(text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') &&
          !(text[i] == '\r' && i + 1 == text.size()))
        throw DataError("malformed CSV: text after closing quote on line " +
                        std::to_string(line));
      continue;
    }
    const char c = text[i];
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n') {
      end_record();
      ++i;
    } else if (c == '\r' && (i + 1 == text.size() || text[i + 1] == '\n')) {
      end_record();
      i += (i + 1 < text.size()) ? 2 : 1;
    } else {
      field += c;
      ++i;
    }
  }
  if (!at_record_start) end_record();

  if (records.empty()) throw DataError("malformed CSV: no header");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw DataError("malformed CSV: record " + std::to_string(r + 1) + " has " +
                      std::to_string(records[r].size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string write_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string write_csv(const CsvTable& table) {
  std::string out;
  auto write_record = [&](const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i) out += ',';
      out += write_csv_field(rec[i]);
    }
    out += '\n';
  };
  write_record(table.header);
  for (const auto& r : table.rows) write_record(r);
  return out;
}

std::vector<std::string> column_values(const CsvTable& table, std::string_view column) {
  const auto it = std::find(table.header.begin(), table.header.end(), column);
  if (it == table.header.end()) throw DataError("no column named '" + std::string(column) + "'");
  const auto idx = static_cast<std::size_t>(it - table.header.begin());
  std::vector<std::string> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.push_back(r[idx]);
  return out;
}

std::vector<std::string> read_lines(std::string_view text) {
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      rows.emplace_back(text.substr(start));
      break;
    }
    std::size_t end = nl;
    if (end > start && text[end - 1] == '\r') --end;
    rows.emplace_back(text.substr(start, end - start));
    start = nl + 1;
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Transformed:
      return "Transformed";
    case RowStatus::Unmatched:
      return "Unmatched";
    case RowStatus::AlreadyConforming:
      return "AlreadyConforming";
  }
  return "";
}

AppliedRow apply_row(const UniFiProgram& program, std::string_view value) {
  if (program.target && matches(*program.target, value))
    return AppliedRow{std::string(value), RowStatus::AlreadyConforming, std::nullopt};
  auto r = eval_program(program, value);
  return AppliedRow{std::move(r.output),
                    r.status == EvalStatus::Transformed ? RowStatus::Transformed
                                                        : RowStatus::Unmatched,
                    r.branch};
}

std::vector<AppliedRow> apply_program(const UniFiProgram& program,
                                      std::span<const std::string> values) {
  std::vector<AppliedRow> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(apply_row(program, v));
  return out;
}

std::string transformed_csv(std::string_view column, std::span<const AppliedRow> rows) {
  std::string out = write_csv_field(column) + ",status\n";
  for (const auto& r : rows) {
    out += write_csv_field(r.output);
    out += ',';
    out += to_string(r.status);
    out += '\n';
  }
  return out;
}

}  // namespace clx
