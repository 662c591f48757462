/*
 * Copyright 2026 The e2ecov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef E2ECOV_MATCH_HPP_
#define E2ECOV_MATCH_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "e2ecov/errors.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

enum class MatchOutcome { kMatched, kGateway, kUnmatched };

enum class UnmatchedReason { kNone, kUnknownService, kNoCandidate, kMalformedUrl };

enum class MatchRule { kNone, kExactLiteral, kTypedParam, kOpaqueParam, kTieBreak };

std::string_view to_string(MatchOutcome o);
std::string_view to_string(UnmatchedReason r);
std::string_view to_string(MatchRule r);

struct MatchResult {
  EndpointCall call;
  MatchOutcome outcome = MatchOutcome::kUnmatched;
  std::optional<std::string> endpoint_key;  // set iff matched
  UnmatchedReason reason = UnmatchedReason::kNone;
  std::size_t candidates_considered = 0;  // same method and segment count
  std::size_t survivors = 0;
  MatchRule rule_applied = MatchRule::kNone;
};

/// True iff `segment` is a decimal integer: optional '-' then digits.
bool is_integer_segment(std::string_view segment);
/// True iff `segment` is a decimal number: optional '-', digits with an
/// optional fraction (or a bare ".digits"), optional exponent.
bool is_number_segment(std::string_view segment);

/// Does a single template segment accept a concrete URL segment?
bool segment_matches(const Segment& templ, std::string_view value);

/// Resolves one call against the inventory.
///
/// Gateway destinations short-circuit. Otherwise candidates are endpoints of
/// the destination service with the same method and segment count; the
/// surviving candidates are ranked by (1) more literal segments, (2) longer
/// leading run of literals, (3) more specific parameter types compared left
/// to right, (4) smaller identity key.
MatchResult match_call(const EndpointCall& call, const EndpointInventory& inv);

/// Matches every call of every test window. Per test, matched endpoints
/// collapse into a set; gateway and unmatched calls are kept for reporting.
/// The optional audit receives one MatchResult per call, in test order.
std::vector<TestTrace> match_test_traces(const std::map<std::string, std::vector<EndpointCall>>& windows,
                                         const EndpointInventory& inv, Diagnostics& diag,
                                         std::vector<std::pair<std::string, MatchResult>>* audit = nullptr);

}  // namespace e2ecov

#endif  // E2ECOV_MATCH_HPP_
