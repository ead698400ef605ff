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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clx/unifi.hpp"

namespace clx {

inline constexpr std::string_view kDefaultColumn = "column1";

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 with LF or CRLF line ends. The first record is the header.
CsvTable read_csv(std::string_view text);
std::string write_csv_field(std::string_view field);
std::string write_csv(const CsvTable& table);

std::vector<std::string> column_values(const CsvTable& table, std::string_view column);

// One row per line, kept verbatim apart from the line terminator (LF or
// CRLF). A trailing terminator does not start another row.
std::vector<std::string> read_lines(std::string_view text);

std::string read_file(const std::string& path);

enum class RowStatus { Transformed, Unmatched, AlreadyConforming };

std::string_view to_string(RowStatus s);

struct AppliedRow {
  std::string output;
  RowStatus status = RowStatus::Unmatched;
  std::optional<std::size_t> branch;
};

// Rows matching the program's target are left alone; the rest go through
// eval_program.
AppliedRow apply_row(const UniFiProgram& program, std::string_view value);
std::vector<AppliedRow> apply_program(const UniFiProgram& program,
                                      std::span<const std::string> values);

// "<column>,status" followed by one record per row.
std::string transformed_csv(std::string_view column, std::span<const AppliedRow> rows);

}  // namespace clx
