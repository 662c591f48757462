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

// Reference implementations used only by tests. They trade speed for
// obviousness: regexes instead of hand-written grammars, full enumeration
// instead of a running best, plain set arithmetic instead of the metrics
// module.

#ifndef E2ECOV_TESTS_ORACLE_HPP_
#define E2ECOV_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "e2ecov/model.hpp"
#include "e2ecov/path.hpp"

namespace e2ecov::oracle {

inline std::string segment_regex(const Segment& seg) {
  if (const auto* lit = std::get_if<Literal>(&seg)) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(lit->text, special, R"(\$&)");
  }
  switch (std::get<Param>(seg).type) {
    case ParamType::kInteger: return R"(-?[0-9]+)";
    case ParamType::kNumber: return R"(-?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?)";
    case ParamType::kBoolean: return "true|false";
    case ParamType::kString:
    case ParamType::kOpaque: return "[\\s\\S]+";
  }
  return "";
}

inline bool template_accepts(const PathTemplate& t, const std::vector<std::string>& segments) {
  if (t.size() != segments.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!std::regex_match(segments[i], std::regex("(?:" + segment_regex(t[i]) + ")"))) return false;
  return true;
}

// Specificity as a sortable tuple: smaller is better.
inline auto specificity(const Endpoint& e) {
  long literals = 0;
  long leading = 0;
  bool still_leading = true;
  std::vector<int> ranks;
  for (const auto& seg : e.path) {
    if (std::holds_alternative<Literal>(seg)) {
      ++literals;
      if (still_leading) ++leading;
    } else {
      still_leading = false;
      ranks.push_back(static_cast<int>(std::get<Param>(seg).type));
    }
  }
  return std::make_tuple(-literals, -leading, ranks, identity_key(e));
}

struct OracleMatch {
  std::optional<std::string> key;
  bool gateway = false;
  std::size_t survivors = 0;
};

inline OracleMatch match(const EndpointRef& dest, const EndpointInventory& inv) {
  OracleMatch out;
  if (inv.is_gateway(dest.service_id)) {
    out.gateway = true;
    return out;
  }
  if (!inv.has_service(dest.service_id)) return out;
  std::vector<std::string> segments;
  try {
    segments = split_url(dest.url);
  } catch (const std::exception&) {
    return out;
  }
  std::vector<const Endpoint*> survivors;
  for (const auto& e : inv.services().at(dest.service_id).endpoints)
    if (e.method == dest.method && template_accepts(e.path, segments)) survivors.push_back(&e);
  out.survivors = survivors.size();
  if (survivors.empty()) return out;
  std::vector<decltype(specificity(*survivors[0]))> ranked;
  for (const auto* e : survivors) ranked.push_back(specificity(*e));
  std::sort(ranked.begin(), ranked.end());
  out.key = std::get<3>(ranked.front());
  return out;
}

// Metrics by set arithmetic over identity keys.
struct OracleReport {
  std::map<std::string, double> c_ms;
  std::map<std::string, double> c_test;
  double c_suite = 0.0;
  std::set<std::string> covered;
  std::size_t universe = 0;
};

inline OracleReport metrics(const EndpointInventory& inv,
                            const std::map<std::string, std::vector<EndpointCall>>& windows) {
  OracleReport r;
  std::map<std::string, std::set<std::string>> owned;
  std::set<std::string> universe;
  for (const auto& [svc, entry] : inv.services()) {
    if (entry.gateway.value_or(false)) continue;
    for (const auto& e : entry.endpoints) {
      owned[svc].insert(identity_key(e));
      universe.insert(identity_key(e));
    }
    owned[svc];
  }
  r.universe = universe.size();
  std::set<std::string> all;
  for (const auto& [test, calls] : windows) {
    std::set<std::string> hit;
    for (const auto& c : calls)
      if (auto m = match(c.destination, inv); m.key) hit.insert(*m.key);
    std::set<std::string> known;
    std::set_intersection(hit.begin(), hit.end(), universe.begin(), universe.end(),
                          std::inserter(known, known.end()));
    r.c_test[test] = static_cast<double>(known.size()) / static_cast<double>(universe.size());
    all.insert(known.begin(), known.end());
  }
  r.covered = all;
  r.c_suite = static_cast<double>(all.size()) / static_cast<double>(universe.size());
  for (const auto& [svc, keys] : owned) {
    std::set<std::string> tested;
    std::set_intersection(keys.begin(), keys.end(), all.begin(), all.end(), std::inserter(tested, tested.end()));
    r.c_ms[svc] = keys.empty() ? 0.0 : static_cast<double>(tested.size()) / static_cast<double>(keys.size());
  }
  return r;
}

// min/avg/max rounded to 2 decimals; mode over rounded values, larger wins ties.
inline Summary summary(const std::vector<double>& pct) {
  auto r2 = [](double v) { return std::round(v * 100.0) / 100.0; };
  Summary s;
  s.min = r2(*std::min_element(pct.begin(), pct.end()));
  s.max = r2(*std::max_element(pct.begin(), pct.end()));
  s.avg = r2(std::accumulate(pct.begin(), pct.end(), 0.0) / static_cast<double>(pct.size()));
  std::vector<double> rounded;
  for (double p : pct) rounded.push_back(r2(p));
  std::size_t best = 0;
  for (double v : rounded) {
    auto n = static_cast<std::size_t>(std::count(rounded.begin(), rounded.end(), v));
    if (n > best || (n == best && v > s.mode)) {
      best = n;
      s.mode = v;
    }
  }
  return s;
}

// Random small systems: at most 8 services with 5 endpoints each, at most 6
// tests, a gateway, an unknown service and plenty of colliding templates.
struct Instance {
  EndpointInventory inv;
  std::map<std::string, std::vector<EndpointCall>> windows;
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint32_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937& rng() { return rng_; }

  Segment random_segment() {
    static const std::vector<std::string> literals{"a", "b", "items", "7", "true"};
    if (coin(0.5)) return Literal{literals[pick(0, static_cast<int>(literals.size()) - 1)]};
    return Param{"p" + std::to_string(pick(0, 3)), static_cast<ParamType>(pick(0, 4))};
  }

  std::string concrete(const Segment& seg) {
    if (const auto* lit = std::get_if<Literal>(&seg)) return lit->text;
    static const std::vector<std::string> ints{"7", "42", "-3"};
    static const std::vector<std::string> nums{"2.5", "1e3", "7", ".5"};
    static const std::vector<std::string> words{"a", "items", "x9", "true", "7"};
    switch (std::get<Param>(seg).type) {
      case ParamType::kInteger: return ints[pick(0, 2)];
      case ParamType::kNumber: return nums[pick(0, 3)];
      case ParamType::kBoolean: return coin() ? "true" : "false";
      default: return words[pick(0, 4)];
    }
  }

  EndpointRef random_target(const EndpointInventory& inv, const std::vector<std::string>& services) {
    static const std::vector<HttpMethod> methods{HttpMethod::kGet, HttpMethod::kPost, HttpMethod::kPut,
                                                 HttpMethod::kDelete};
    EndpointRef ref;
    int r = pick(0, 9);
    if (r == 0) {
      ref.service_id = "gw";
    } else if (r == 1) {
      ref.service_id = "unknown";
    } else {
      ref.service_id = services[pick(0, static_cast<int>(services.size()) - 1)];
    }
    const auto& svc = inv.services();
    auto it = svc.find(ref.service_id);
    if (it != svc.end() && !it->second.endpoints.empty() && coin(0.75)) {
      const auto& e = it->second.endpoints[pick(0, static_cast<int>(it->second.endpoints.size()) - 1)];
      ref.method = e.method;
      for (const auto& seg : e.path) ref.url += "/" + concrete(seg);
    } else {
      ref.method = methods[pick(0, 3)];
      int n = pick(1, 3);
      for (int i = 0; i < n; ++i) ref.url += "/" + concrete(random_segment());
    }
    return ref;
  }

  Instance next(int max_services = 8, int max_endpoints = 5, int max_tests = 6) {
    static const std::vector<HttpMethod> methods{HttpMethod::kGet, HttpMethod::kPost, HttpMethod::kPut,
                                                 HttpMethod::kDelete};
    Instance inst;
    inst.inv.ensure_service("gw", true);
    std::vector<std::string> services;
    int n_services = pick(1, max_services);
    for (int s = 0; s < n_services; ++s) {
      std::string id = "s" + std::to_string(s);
      services.push_back(id);
      inst.inv.ensure_service(id, false);
      int n_endpoints = pick(s == 0 ? 1 : 0, max_endpoints);
      for (int k = 0; k < n_endpoints; ++k) {
        Endpoint e;
        e.service_id = id;
        e.method = methods[pick(0, 3)];
        int len = pick(1, 3);
        for (int i = 0; i < len; ++i) e.path.push_back(random_segment());
        inst.inv.add(std::move(e));
      }
    }
    int n_tests = pick(1, max_tests);
    Instant t0 = from_epoch_millis(1'685'613'600'000);
    for (int t = 0; t < n_tests; ++t) {
      auto& calls = inst.windows["t" + std::to_string(t)];
      int n_calls = pick(0, 10);
      for (int c = 0; c < n_calls; ++c) {
        EndpointCall call;
        call.timestamp = t0 + std::chrono::milliseconds(pick(0, 100'000));
        call.destination = random_target(inst.inv, services);
        if (coin(0.6)) call.source = random_target(inst.inv, services);
        calls.push_back(std::move(call));
      }
      std::sort(calls.begin(), calls.end(), chronological_less);
    }
    return inst;
  }

 private:
  std::mt19937 rng_;
};

}  // namespace e2ecov::oracle

#endif  // E2ECOV_TESTS_ORACLE_HPP_
