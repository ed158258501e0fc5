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

#ifndef DPBAYES_DATASET_IO_H_
#define DPBAYES_DATASET_IO_H_

#include <string>
#include <string_view>

#include "dataset.h"

namespace dpbayes {

// CSV: one observation per line. A bare number is a scalar; comma-separated
// integers are a categorical record. Blank lines are skipped.
Dataset ParseCsvDataset(std::string_view text);

// JSON: an array of numbers (scalars) or an array of integer arrays
// (categorical records).
Dataset ParseJsonDataset(std::string_view text);

// format is "csv", "json", or "auto" (by file extension, CSV otherwise).
// Throws IoError for unreadable files and ParseError for malformed content.
Dataset LoadDataset(const std::string& path, const std::string& format);

}  // namespace dpbayes

#endif  // DPBAYES_DATASET_IO_H_
