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

#include "e2ecov/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <set>

#include "e2ecov/errors.hpp"

namespace e2ecov {

using nlohmann::json;

ColorScale::ColorScale()
    : buckets_{{0.0, "red"}, {50.0, "orange"}, {99.99, "yellow"}, {100.0, "green"}} {}

ColorScale::ColorScale(std::vector<ColorBucket> buckets) : buckets_(std::move(buckets)) {
  if (buckets_.empty()) throw InputError("color scale needs at least one bucket");
  for (std::size_t i = 1; i < buckets_.size(); ++i) {
    if (!(buckets_[i].upper_bound_percent > buckets_[i - 1].upper_bound_percent))
      throw InputError("color scale bounds must strictly increase");
  }
  if (buckets_.back().upper_bound_percent != 100.0) throw InputError("color scale must end at 100");
}

ColorScale ColorScale::parse(std::string_view spec) {
  std::vector<ColorBucket> buckets;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    auto colon = item.find(':');
    if (colon == std::string_view::npos) throw InputError("color bucket '" + std::string(item) + "' lacks ':'");
    double bound = 0.0;
    auto num = item.substr(0, colon);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), bound);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw InputError("color bucket bound '" + std::string(num) + "' is not a number");
    auto color = item.substr(colon + 1);
    if (color.empty()) throw InputError("color bucket '" + std::string(item) + "' has no color");
    buckets.push_back({bound, std::string(color)});
  }
  return ColorScale(std::move(buckets));
}

const std::string& ColorScale::color_for(double percent) const {
  for (const auto& b : buckets_)
    if (percent <= b.upper_bound_percent) return b.color;
  return buckets_.back().color;
}

namespace {

std::string pct(double ratio) { return fmt::format("{:.2f}", ratio * 100.0); }

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string dot_quote(std::string_view text) { return "\"" + dot_escape(text) + "\""; }

}  // namespace

std::string render_text(const CoverageReport& report) {
  std::string out;
  auto line = [&out](std::string_view s) {
    out += s;
    out += '\n';
  };
  line("E2E endpoint coverage report");
  line("");
  line(fmt::format("Suite coverage (C_suite): {}/{} = {}%", report.suite_tested, report.universe,
                   pct(report.suite_coverage)));
  line(fmt::format("Services (m_total): {}   Tests (t_total): {}", report.m_total, report.t_total));
  line("");

  std::size_t width = std::string_view("SERVICE").size();
  for (const auto& [id, c] : report.per_service) width = std::max(width, id.size());
  line("Microservice endpoint coverage (C_ms)");
  line(fmt::format("{:<{}}  {:>12}  {:>9}", "SERVICE", width, "TESTED/TOTAL", "COVERAGE%"));
  for (const auto& [id, c] : report.per_service)
    line(fmt::format("{:<{}}  {:>12}  {:>9}", id, width, fmt::format("{}/{}", c.tested_count, c.total_count),
                     pct(c.ratio)));
  line("");

  width = std::string_view("TEST").size();
  for (const auto& [id, c] : report.per_test) width = std::max(width, id.size());
  line("Test case endpoint coverage (C_test)");
  line(fmt::format("{:<{}}  {:>12}  {:>9}", "TEST", width, "TESTED/TOTAL", "COVERAGE%"));
  for (const auto& [id, c] : report.per_test)
    line(fmt::format("{:<{}}  {:>12}  {:>9}", id, width, fmt::format("{}/{}", c.tested_count, c.universe_count),
                     pct(c.ratio)));
  line("");

  line("Summary statistics (%)");
  line(fmt::format("{:<8}  {:>8}  {:>8}  {:>8}  {:>8}", "METRIC", "MINIMUM", "AVERAGE", "MAXIMUM", "MODE"));
  line(fmt::format("{:<8}  {:>8.2f}", "C_suite", report.suite_coverage * 100.0));
  auto stats_row = [&](std::string_view name, const std::optional<Summary>& s) {
    if (s) {
      line(fmt::format("{:<8}  {:>8.2f}  {:>8.2f}  {:>8.2f}  {:>8.2f}", name, s->min, s->avg, s->max, s->mode));
    } else {
      line(fmt::format("{:<8}  {:>8}  {:>8}  {:>8}  {:>8}", name, "-", "-", "-", "-"));
    }
  };
  stats_row("C_ms", report.service_stats);
  stats_row("C_test", report.test_stats);
  line("");

  const auto& c = report.calls;
  line("Calls");
  line(fmt::format("total {}  matched {}  gateway {}  unmatched {}  orphans {}", c.total, c.matched, c.gateway,
                   c.unmatched, c.orphans));
  line(fmt::format("distinct matched endpoints {}  distinct gateway calls {}", c.distinct_matched,
                   c.distinct_gateway));

  if (!report.risky_matches.empty()) {
    line("");
    line("Risky matches (more than one candidate survived)");
    for (const auto& r : report.risky_matches)
      line(fmt::format("{}  {} {}{}  -> {}  ({} candidates)", r.test_id, to_string(r.call.method),
                       r.call.service_id, r.call.url, r.chosen, r.survivors));
  }
  return out;
}

std::string render_endpoint_list_html(const CoverageReport& report, const EndpointInventory& inv) {
  std::string out;
  out += "<!DOCTYPE html>\n";
  out += "<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n<title>Endpoint coverage</title>\n";
  out +=
      "<style>\n"
      "body { font-family: sans-serif; margin: 2em; }\n"
      "summary { cursor: pointer; font-weight: bold; padding: 0.2em 0; }\n"
      "ul { list-style: none; margin: 0.2em 0 0.8em 0; padding-left: 1.2em; }\n"
      "li { font-family: monospace; padding: 0.1em 0.4em; margin: 0.1em 0; }\n"
      "li.covered { background: #d4f7d4; color: #0a5d0a; border-left: 4px solid green; }\n"
      "li.missed { background: #fbdada; color: #8a1010; border-left: 4px solid red; }\n"
      "footer { margin-top: 2em; color: #555; }\n"
      "</style>\n</head>\n<body>\n";
  out += "<h1>Endpoint coverage</h1>\n";
  out += fmt::format("<p class=\"suite\">Suite coverage: {}% ({}/{} endpoints)</p>\n", pct(report.suite_coverage),
                     report.suite_tested, report.universe);
  for (const auto& [service, entry] : inv.services()) {
    if (entry.gateway.value_or(false)) continue;
    auto cov = report.per_service.find(service);
    double ratio = cov == report.per_service.end() ? 0.0 : cov->second.ratio;
    std::size_t tested = cov == report.per_service.end() ? 0 : cov->second.tested_count;
    out += fmt::format("<details class=\"service\" data-service=\"{}\">\n", html_escape(service));
    out += fmt::format("<summary>{} - {}% ({}/{})</summary>\n", html_escape(service), pct(ratio), tested,
                       entry.endpoints.size());
    out += "<ul>\n";
    for (const auto& e : entry.endpoints) {
      std::string key = identity_key(e);
      bool covered = report.covered_endpoints.contains(key);
      out += fmt::format("<li class=\"{}\" data-key=\"{}\">{}</li>\n", covered ? "covered" : "missed",
                         html_escape(key), html_escape(display_name(e)));
    }
    out += "</ul>\n</details>\n";
  }
  const auto& c = report.calls;
  out += "<footer>\n";
  out += fmt::format(
      "<p>Calls: {} total, {} matched, {} gateway ({} distinct), {} unmatched, {} outside every test window.</p>\n",
      c.total, c.matched, c.gateway, c.distinct_gateway, c.unmatched, c.orphans);
  auto gateways = inv.gateway_services();
  if (!gateways.empty()) {
    std::string names;
    for (const auto& g : gateways) names += (names.empty() ? "" : ", ") + html_escape(g);
    out += fmt::format("<p>Gateway services (excluded): {}</p>\n", names);
  }
  out += "</footer>\n</body>\n</html>\n";
  return out;
}

std::string render_dot(const CoverageReport& report, const ColorScale& scale) {
  std::string out = "digraph coverage {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];\n";
  for (const auto& [id, c] : report.per_service) {
    out += fmt::format("  {} [label={}, fillcolor={}];\n", dot_quote(id),
                       fmt::format("\"{}\\n{}/{} ({}%)\"", dot_escape(id), c.tested_count, c.total_count, pct(c.ratio)),
                       dot_quote(scale.color_for(c.ratio * 100.0)));
  }
  std::set<std::string> extra;
  for (const auto& e : report.dependency_edges) {
    if (!report.per_service.contains(e.source)) extra.insert(e.source);
    if (!report.per_service.contains(e.destination)) extra.insert(e.destination);
  }
  for (const auto& id : extra)
    out += fmt::format("  {} [label={}, fillcolor=\"lightgray\"];\n", dot_quote(id), dot_quote(id));
  for (const auto& e : report.dependency_edges) {
    out += fmt::format("  {} -> {}{};\n", dot_quote(e.source), dot_quote(e.destination),
                       e.covered ? "" : " [style=dashed, color=\"gray50\"]");
  }
  out += "}\n";
  return out;
}

json report_to_json(const CoverageReport& r) {
  json per_service = json::object();
  for (const auto& [id, c] : r.per_service)
    per_service[id] = {{"tested_count", c.tested_count}, {"total_count", c.total_count}, {"ratio", c.ratio}};
  json per_test = json::object();
  for (const auto& [id, c] : r.per_test)
    per_test[id] = {{"tested_count", c.tested_count}, {"universe_count", c.universe_count}, {"ratio", c.ratio}};
  auto stats = [](const std::optional<Summary>& s) -> json {
    if (!s) return nullptr;
    return {{"min", s->min}, {"avg", s->avg}, {"max", s->max}, {"mode", s->mode}};
  };
  json edges = json::array();
  for (const auto& e : r.dependency_edges)
    edges.push_back({{"source", e.source}, {"destination", e.destination}, {"covered", e.covered}});
  json risky = json::array();
  for (const auto& m : r.risky_matches)
    risky.push_back({{"test", m.test_id},
                     {"service", m.call.service_id},
                     {"method", to_string(m.call.method)},
                     {"url", m.call.url},
                     {"chosen", m.chosen},
                     {"survivors", m.survivors}});
  return {
      {"suite_coverage", r.suite_coverage},
      {"suite_tested", r.suite_tested},
      {"universe", r.universe},
      {"per_service", std::move(per_service)},
      {"per_test", std::move(per_test)},
      {"stats", {{"service", stats(r.service_stats)}, {"test", stats(r.test_stats)}}},
      {"m_total", r.m_total},
      {"t_total", r.t_total},
      {"dependency_edges", std::move(edges)},
      {"covered_endpoints", r.covered_endpoints},
      {"calls",
       {{"total", r.calls.total},
        {"matched", r.calls.matched},
        {"gateway", r.calls.gateway},
        {"unmatched", r.calls.unmatched},
        {"distinct_matched", r.calls.distinct_matched},
        {"distinct_gateway", r.calls.distinct_gateway},
        {"orphans", r.calls.orphans}}},
      {"risky_matches", std::move(risky)},
  };
}

CoverageReport report_from_json(const json& doc) {
  try {
    CoverageReport r;
    r.suite_coverage = doc.at("suite_coverage").get<double>();
    r.suite_tested = doc.at("suite_tested").get<std::size_t>();
    r.universe = doc.at("universe").get<std::size_t>();
    for (const auto& [id, c] : doc.at("per_service").items())
      r.per_service[id] = {c.at("tested_count").get<std::size_t>(), c.at("total_count").get<std::size_t>(),
                           c.at("ratio").get<double>()};
    for (const auto& [id, c] : doc.at("per_test").items())
      r.per_test[id] = {c.at("tested_count").get<std::size_t>(), c.at("universe_count").get<std::size_t>(),
                        c.at("ratio").get<double>()};
    auto stats = [](const json& s) -> std::optional<Summary> {
      if (s.is_null()) return std::nullopt;
      return Summary{s.at("min").get<double>(), s.at("avg").get<double>(), s.at("max").get<double>(),
                     s.at("mode").get<double>()};
    };
    r.service_stats = stats(doc.at("stats").at("service"));
    r.test_stats = stats(doc.at("stats").at("test"));
    r.m_total = doc.at("m_total").get<std::size_t>();
    r.t_total = doc.at("t_total").get<std::size_t>();
    for (const auto& e : doc.at("dependency_edges"))
      r.dependency_edges.insert(
          {e.at("source").get<std::string>(), e.at("destination").get<std::string>(), e.at("covered").get<bool>()});
    r.covered_endpoints = doc.at("covered_endpoints").get<std::set<std::string>>();
    const auto& c = doc.at("calls");
    r.calls = {c.at("total").get<std::size_t>(),          c.at("matched").get<std::size_t>(),
               c.at("gateway").get<std::size_t>(),        c.at("unmatched").get<std::size_t>(),
               c.at("distinct_matched").get<std::size_t>(), c.at("distinct_gateway").get<std::size_t>(),
               c.at("orphans").get<std::size_t>()};
    for (const auto& m : doc.at("risky_matches")) {
      auto method = parse_method(m.at("method").get<std::string>());
      if (!method) throw InputError("unknown method in risky match");
      r.risky_matches.insert(RiskyMatch{m.at("test").get<std::string>(),
                                        EndpointRef{m.at("service").get<std::string>(), *method,
                                                    m.at("url").get<std::string>()},
                                        m.at("chosen").get<std::string>(), m.at("survivors").get<std::size_t>()});
    }
    return r;
  } catch (const json::exception& err) {
    throw InputError(std::string("coverage report JSON does not match the schema: ") + err.what());
  }
}

std::string render_json(const CoverageReport& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace e2ecov
