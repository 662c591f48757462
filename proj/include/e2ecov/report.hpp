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

#ifndef E2ECOV_REPORT_HPP_
#define E2ECOV_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "e2ecov/model.hpp"

namespace e2ecov {

struct ColorBucket {
  double upper_bound_percent;
  std::string color;
};

/// Maps a coverage percentage to a color: the first bucket whose upper bound
/// is >= the value wins.
class ColorScale {
 public:
  // 0 -> red, (0, 50] -> orange, (50, 99.99] -> yellow, above -> green.
  ColorScale();
  // Throws InputError unless bounds strictly increase and end at 100.
  explicit ColorScale(std::vector<ColorBucket> buckets);

  // "0:red,50:orange,99.99:yellow,100:green"
  static ColorScale parse(std::string_view spec);

  const std::string& color_for(double percent) const;
  const std::vector<ColorBucket>& buckets() const noexcept { return buckets_; }

 private:
  std::vector<ColorBucket> buckets_;
};

/// Fixed-width text tables: suite line, per-service, per-test, summary stats.
std::string render_text(const CoverageReport& report);

/// Self-contained HTML page listing every inventory endpoint per service,
/// covered ones green and missed ones red.
std::string render_endpoint_list_html(const CoverageReport& report, const EndpointInventory& inv);

/// Graphviz digraph of services colored by coverage. Gateway services from
/// the edges are drawn as grey nodes.
std::string render_dot(const CoverageReport& report, const ColorScale& scale = ColorScale());

nlohmann::json report_to_json(const CoverageReport& report);
CoverageReport report_from_json(const nlohmann::json& doc);

/// Canonical JSON: sorted keys, two-space indent, UTF-8, trailing LF.
std::string render_json(const CoverageReport& report);

}  // namespace e2ecov

#endif  // E2ECOV_REPORT_HPP_
