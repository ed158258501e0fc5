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

#ifndef DPBAYES_SERIALIZATION_H_
#define DPBAYES_SERIALIZATION_H_

#include <string>

#include <json.hpp>

#include "calculus.h"
#include "families.h"
#include "mechanism.h"
#include "verify.h"

namespace dpbayes {

using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips; "inf", "-inf" and "nan" otherwise.
std::string FormatDouble(double value);

// A JSON number, or a string for non-finite values.
Json Number(double value);

Json ToJson(const Theta& theta);
Json ToJson(const Query& query);
Json ToJson(const Answer& answer);
Json ToJson(const Posterior& posterior);
Json ToJson(const SmoothnessCertificate& cert);
Json ToJson(const PrivacyGuarantee& guarantee);
Json ToJson(const CheckReport& report);

// {"type": "identity"}
// {"type": "conditional_expectation", "targets": [..], "given": [..],
//  "given_values": [..]}
// {"type": "functional", "name": "mean" | "variance" | "tail",
//  "threshold": t}
Query QueryFromJson(const Json& json);

}  // namespace dpbayes

#endif  // DPBAYES_SERIALIZATION_H_
