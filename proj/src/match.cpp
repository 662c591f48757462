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

#include "e2ecov/match.hpp"

#include <algorithm>

#include "e2ecov/path.hpp"

namespace e2ecov {

std::string_view to_string(MatchOutcome o) {
  switch (o) {
    case MatchOutcome::kMatched: return "matched";
    case MatchOutcome::kGateway: return "gateway";
    case MatchOutcome::kUnmatched: return "unmatched";
  }
  return "unmatched";
}

std::string_view to_string(UnmatchedReason r) {
  switch (r) {
    case UnmatchedReason::kNone: return "none";
    case UnmatchedReason::kUnknownService: return "unknown-service";
    case UnmatchedReason::kNoCandidate: return "no-candidate";
    case UnmatchedReason::kMalformedUrl: return "malformed-url";
  }
  return "none";
}

std::string_view to_string(MatchRule r) {
  switch (r) {
    case MatchRule::kNone: return "none";
    case MatchRule::kExactLiteral: return "exact-literal";
    case MatchRule::kTypedParam: return "typed-param";
    case MatchRule::kOpaqueParam: return "opaque-param";
    case MatchRule::kTieBreak: return "tie-break";
  }
  return "none";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t skip_digits(std::string_view s, std::size_t i) {
  while (i < s.size() && is_digit(s[i])) ++i;
  return i;
}

}  // namespace

bool is_integer_segment(std::string_view s) {
  std::size_t i = !s.empty() && s[0] == '-' ? 1 : 0;
  std::size_t end = skip_digits(s, i);
  return end > i && end == s.size();
}

bool is_number_segment(std::string_view s) {
  std::size_t i = !s.empty() && s[0] == '-' ? 1 : 0;
  std::size_t int_end = skip_digits(s, i);
  std::size_t int_digits = int_end - i;
  std::size_t pos = int_end;
  std::size_t frac_digits = 0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t frac_end = skip_digits(s, pos + 1);
    frac_digits = frac_end - pos - 1;
    pos = frac_end;
  }
  if (int_digits == 0 && frac_digits == 0) return false;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::size_t e = pos + 1;
    if (e < s.size() && (s[e] == '+' || s[e] == '-')) ++e;
    std::size_t exp_end = skip_digits(s, e);
    if (exp_end == e) return false;
    pos = exp_end;
  }
  return pos == s.size();
}

bool segment_matches(const Segment& templ, std::string_view value) {
  if (const auto* lit = std::get_if<Literal>(&templ)) return lit->text == value;
  switch (std::get<Param>(templ).type) {
    case ParamType::kInteger: return is_integer_segment(value);
    case ParamType::kNumber: return is_number_segment(value);
    case ParamType::kBoolean: return value == "true" || value == "false";
    case ParamType::kString:
    case ParamType::kOpaque: return true;
  }
  return false;
}

namespace {

struct Ranked {
  const Endpoint* endpoint;
  std::string key;
  std::size_t literals = 0;
  std::size_t leading_literals = 0;
  std::vector<int> param_ranks;  // lower is more specific
};

Ranked rank(const Endpoint& e) {
  Ranked r{&e, identity_key(e), 0, 0, {}};
  bool leading = true;
  for (const auto& seg : e.path) {
    if (std::holds_alternative<Literal>(seg)) {
      ++r.literals;
      if (leading) ++r.leading_literals;
    } else {
      leading = false;
      r.param_ranks.push_back(static_cast<int>(std::get<Param>(seg).type));
    }
  }
  return r;
}

// True when `a` beats `b`.
bool better(const Ranked& a, const Ranked& b) {
  if (a.literals != b.literals) return a.literals > b.literals;
  if (a.leading_literals != b.leading_literals) return a.leading_literals > b.leading_literals;
  if (a.param_ranks != b.param_ranks) return a.param_ranks < b.param_ranks;
  return a.key < b.key;
}

MatchRule rule_for(const Endpoint& e) {
  bool typed = false;
  bool any_param = false;
  for (const auto& seg : e.path) {
    if (const auto* p = std::get_if<Param>(&seg)) {
      any_param = true;
      if (p->type == ParamType::kInteger || p->type == ParamType::kNumber || p->type == ParamType::kBoolean)
        typed = true;
    }
  }
  if (!any_param) return MatchRule::kExactLiteral;
  return typed ? MatchRule::kTypedParam : MatchRule::kOpaqueParam;
}

}  // namespace

MatchResult match_call(const EndpointCall& call, const EndpointInventory& inv) {
  MatchResult result;
  result.call = call;
  const auto& dest = call.destination;
  if (inv.is_gateway(dest.service_id)) {
    result.outcome = MatchOutcome::kGateway;
    return result;
  }
  auto svc = inv.services().find(dest.service_id);
  if (svc == inv.services().end()) {
    result.reason = UnmatchedReason::kUnknownService;
    return result;
  }
  std::vector<std::string> segments;
  try {
    segments = split_url(dest.url);
  } catch (const RecordError&) {
    result.reason = UnmatchedReason::kMalformedUrl;
    return result;
  }

  std::optional<Ranked> best;
  for (const auto& e : svc->second.endpoints) {
    if (e.method != dest.method || e.path.size() != segments.size()) continue;
    ++result.candidates_considered;
    bool ok = true;
    for (std::size_t i = 0; ok && i < segments.size(); ++i) ok = segment_matches(e.path[i], segments[i]);
    if (!ok) continue;
    ++result.survivors;
    Ranked r = rank(e);
    if (!best || better(r, *best)) best = std::move(r);
  }
  if (!best) {
    result.reason = UnmatchedReason::kNoCandidate;
    return result;
  }
  result.outcome = MatchOutcome::kMatched;
  result.endpoint_key = best->key;
  result.rule_applied = result.survivors > 1 ? MatchRule::kTieBreak : rule_for(*best->endpoint);
  return result;
}

std::vector<TestTrace> match_test_traces(const std::map<std::string, std::vector<EndpointCall>>& windows,
                                         const EndpointInventory& inv, Diagnostics& diag,
                                         std::vector<std::pair<std::string, MatchResult>>* audit) {
  std::vector<TestTrace> traces;
  for (const auto& [test_id, calls] : windows) {
    TestTrace t;
    t.test_id = test_id;
    t.calls = calls;
    std::sort(t.calls.begin(), t.calls.end(), chronological_less);
    for (const auto& call : t.calls) {
      MatchResult r = match_call(call, inv);
      switch (r.outcome) {
        case MatchOutcome::kMatched:
          t.matched_endpoints.insert(*r.endpoint_key);
          t.matched_calls.push_back(MatchedCall{call, *r.endpoint_key, r.survivors});
          if (r.survivors > 1)
            diag.warn("test '" + test_id + "': " + std::string(to_string(call.destination.method)) + " " +
                      call.destination.service_id + call.destination.url + " matched " +
                      std::to_string(r.survivors) + " endpoints; chose " + *r.endpoint_key);
          break;
        case MatchOutcome::kGateway:
          t.gateway_calls.push_back(call);
          break;
        case MatchOutcome::kUnmatched:
          t.unmatched_calls.push_back(call);
          break;
      }
      if (audit) audit->emplace_back(test_id, std::move(r));
    }
    traces.push_back(std::move(t));
  }
  return traces;
}

}  // namespace e2ecov
