// Copyright 2026 The tpulse Authors
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

// CSV dialect shared by every artifact: comma separated, '.' decimal point,
// scientific notation for magnitudes below 1e-3, '#'-prefixed metadata lines
// ahead of a mandatory header row.

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tpulse {

std::string format_number(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_metadata(const std::string& key, const std::string& value);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);

  std::size_t rows() const { return rows_.size(); }
  void write(std::ostream& os) const;
  std::string str() const;
  /// Writes to `path`, throwing Error(io_error) on failure.
  void save(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace tpulse
