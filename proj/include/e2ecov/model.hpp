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

#ifndef E2ECOV_MODEL_HPP_
#define E2ECOV_MODEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "e2ecov/time.hpp"

namespace e2ecov {

enum class HttpMethod { kGet, kPost, kPut, kDelete, kPatch, kHead, kOptions };

std::string_view to_string(HttpMethod m);
// Case-insensitive. Returns nullopt for anything outside the enum.
std::optional<HttpMethod> parse_method(std::string_view text);

// Ordered from most to least specific; the matcher's tie-break relies on it.
enum class ParamType { kInteger, kNumber, kBoolean, kString, kOpaque };

std::string_view to_string(ParamType t);
// Unknown names collapse to kOpaque.
ParamType parse_param_type(std::string_view text);

struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Param {
  std::string name;
  ParamType type = ParamType::kString;
  friend bool operator==(const Param&, const Param&) = default;
};

using Segment = std::variant<Literal, Param>;
using PathTemplate = std::vector<Segment>;

/// One REST route signature owned by a microservice.
///
/// Identity is (service_id, method, template shape): parameter names are
/// ignored, parameter types are not. Use identity_key() to compare.
struct Endpoint {
  std::string service_id;
  HttpMethod method = HttpMethod::kGet;
  PathTemplate path;
  std::optional<std::string> source_location;
  // Provenance only; never used by the metrics.
  std::optional<std::string> return_type;
};

/// Canonical key "service|METHOD|seg/seg/{type}". Literal characters that
/// would make the key ambiguous ('/', '{', '}', '|', '%') are
/// percent-escaped.
std::string identity_key(const Endpoint& e);

/// The template rendered back as a path string, e.g. "/orders/{id}".
/// Literals are re-encoded so normalize_path() reproduces the same segments.
std::string render_path(const PathTemplate& path);

/// Display form, e.g. "GET /orders/{id}".
std::string display_name(const Endpoint& e);

struct ServiceEntry {
  std::vector<Endpoint> endpoints;  // sorted by identity key, unique
  // Unset means the fragment that produced this entry did not say.
  std::optional<bool> gateway;
};

/// E_ms(i) for every microservice plus the gateway flags.
class EndpointInventory {
 public:
  // Returns false (and leaves the inventory untouched) when an endpoint with
  // the same identity already exists in that service.
  bool add(Endpoint e);
  // Creates the service if missing; an existing gateway flag is overwritten
  // only when `gateway` has a value.
  ServiceEntry& ensure_service(const std::string& service_id,
                               std::optional<bool> gateway = std::nullopt);

  const std::map<std::string, ServiceEntry>& services() const noexcept { return services_; }
  std::map<std::string, ServiceEntry>& services() noexcept { return services_; }

  bool has_service(const std::string& service_id) const;
  bool is_gateway(const std::string& service_id) const;
  std::set<std::string> gateway_services() const;
  void set_gateway(const std::string& service_id, bool gateway);

  // Endpoints of non-gateway services only.
  std::size_t universe_size() const;
  // Number of non-gateway services (m_total).
  std::size_t service_count() const;
  std::size_t endpoint_count() const;

  const Endpoint* find(const std::string& key) const;

  // Equality on the canonical form: services, endpoint identities and
  // provenance, and resolved gateway flags.
  friend bool operator==(const EndpointInventory& a, const EndpointInventory& b);

 private:
  std::map<std::string, ServiceEntry> services_;
};

/// A concrete invocation target: service, invoked URL, method.
struct EndpointRef {
  std::string service_id;
  HttpMethod method = HttpMethod::kGet;
  std::string url;
  friend bool operator==(const EndpointRef&, const EndpointRef&) = default;
  friend auto operator<=>(const EndpointRef&, const EndpointRef&) = default;
};

struct EndpointCall {
  Instant timestamp{};
  // nullopt marks the UI/entry side of a call.
  std::optional<EndpointRef> source;
  EndpointRef destination;
  std::string raw;
  friend bool operator==(const EndpointCall&, const EndpointCall&) = default;
};

// Total order used wherever calls must be listed deterministically:
// timestamp, destination, source, raw.
bool chronological_less(const EndpointCall& a, const EndpointCall& b);

struct TestWindow {
  std::string test_id;
  Instant start{};
  Instant end{};
  friend bool operator==(const TestWindow&, const TestWindow&) = default;
};

struct MatchedCall {
  EndpointCall call;
  std::string endpoint_key;
  std::size_t survivors = 1;  // >1 means a tie-break decided the match
};

struct TestTrace {
  std::string test_id;
  std::vector<EndpointCall> calls;  // chronological, all outcomes
  std::set<std::string> matched_endpoints;  // E_test(i)^tested, identity keys
  std::vector<MatchedCall> matched_calls;
  std::vector<EndpointCall> gateway_calls;
  std::vector<EndpointCall> unmatched_calls;
};

struct ServiceCoverage {
  std::size_t tested_count = 0;
  std::size_t total_count = 0;
  double ratio = 0.0;
  friend bool operator==(const ServiceCoverage&, const ServiceCoverage&) = default;
};

struct TestCoverage {
  std::size_t tested_count = 0;
  std::size_t universe_count = 0;
  double ratio = 0.0;
  friend bool operator==(const TestCoverage&, const TestCoverage&) = default;
};

// Percentages rounded to two decimals.
struct Summary {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
  double mode = 0.0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct DependencyEdge {
  std::string source;
  std::string destination;
  bool covered = false;
  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
  friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

struct CallSummary {
  std::size_t total = 0;
  std::size_t matched = 0;
  std::size_t gateway = 0;
  std::size_t unmatched = 0;
  std::size_t distinct_matched = 0;
  std::size_t distinct_gateway = 0;  // distinct (service, method, url)
  std::size_t orphans = 0;
  friend bool operator==(const CallSummary&, const CallSummary&) = default;
};

struct RiskyMatch {
  std::string test_id;
  EndpointRef call;
  std::string chosen;
  std::size_t survivors = 0;
  friend bool operator==(const RiskyMatch&, const RiskyMatch&) = default;
  friend auto operator<=>(const RiskyMatch&, const RiskyMatch&) = default;
};

struct CoverageReport {
  double suite_coverage = 0.0;
  std::size_t suite_tested = 0;
  std::size_t universe = 0;
  std::map<std::string, ServiceCoverage> per_service;
  std::map<std::string, TestCoverage> per_test;
  std::optional<Summary> service_stats;
  std::optional<Summary> test_stats;
  std::size_t m_total = 0;
  std::size_t t_total = 0;
  std::set<DependencyEdge> dependency_edges;
  std::set<std::string> covered_endpoints;
  CallSummary calls;
  std::set<RiskyMatch> risky_matches;
  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

}  // namespace e2ecov

#endif  // E2ECOV_MODEL_HPP_
