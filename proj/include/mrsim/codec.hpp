// Copyright 2026 The mrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON mappings for the value types exchanged on the bus, written to report
// files and served by the control API. Field names follow the type
// definitions one to one.

#include <json.hpp>

#include "mrsim/bus.hpp"
#include "mrsim/domain.hpp"

namespace mrsim {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const TaskSpec& t);
void from_json(const Json& j, TaskSpec& t);
void to_json(Json& j, const PlanBlueprint& bp);
void from_json(const Json& j, PlanBlueprint& bp);
void to_json(Json& j, const Assignment& a);
void from_json(const Json& j, Assignment& a);
void to_json(Json& j, const VerifiedPlan& p);
void from_json(const Json& j, VerifiedPlan& p);
void to_json(Json& j, const FailureReason& r);
void from_json(const Json& j, FailureReason& r);
void to_json(Json& j, const Request& r);
void to_json(Json& j, const RobotTimeLedger& l);

void to_json(Json& j, const Envelope& env);
void from_json(const Json& j, Envelope& env);

/// Compact single-line rendering used in the event trace.
std::string dump_compact(const Json& j);

}  // namespace mrsim
