// Copyright 2026 The dpbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dataset_io.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.h"
#include "numerics.h"

namespace dpbayes {

Dataset ParseCsvDataset(std::string_view text) {
  std::vector<double> scalars;
  std::vector<Categorical> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      if (line.find(',') != std::string_view::npos) {
        rows.push_back(ParseIntList(line, ','));
      } else {
        scalars.push_back(ParseDouble(line));
      }
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!scalars.empty() && !rows.empty()) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": mixes scalar and categorical observations");
    }
    if (end == text.size()) break;
  }
  if (!rows.empty()) return Dataset::Rows(std::move(rows));
  return Dataset::Scalars(std::move(scalars));
}

Dataset ParseJsonDataset(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("dataset JSON must be an array");
  std::vector<double> scalars;
  std::vector<Categorical> rows;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    if (item.is_number()) {
      scalars.push_back(item.get<double>());
    } else if (item.is_array()) {
      Categorical row;
      for (const auto& symbol : item) {
        if (!symbol.is_number_integer()) {
          throw ParseError("element " + std::to_string(i) +
                           ": symbols must be integers");
        }
        row.push_back(symbol.get<int>());
      }
      rows.push_back(std::move(row));
    } else {
      throw ParseError("element " + std::to_string(i) +
                       ": expected a number or an array of symbols");
    }
    if (!scalars.empty() && !rows.empty()) {
      throw ParseError("element " + std::to_string(i) +
                       ": mixes scalar and categorical observations");
    }
  }
  if (!rows.empty()) return Dataset::Rows(std::move(rows));
  return Dataset::Scalars(std::move(scalars));
}

Dataset LoadDataset(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::string fmt = format;
  if (fmt == "auto" || fmt.empty()) {
    fmt = path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? "json"
                                                                      : "csv";
  }
  if (fmt == "csv") return ParseCsvDataset(text);
  if (fmt == "json") return ParseJsonDataset(text);
  throw InvalidArgument("unknown dataset format '" + format + "'");
}

}  // namespace dpbayes
