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

#ifndef E2ECOV_METRICS_HPP_
#define E2ECOV_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "e2ecov/errors.hpp"
#include "e2ecov/model.hpp"

namespace e2ecov {

/// C_ms(i) = |E_ms(i)^tested| / |E_ms(i)| for every non-gateway service,
/// where E_ms(i)^tested is the union over all tests. A service without
/// endpoints gets ratio 0 and a warning.
std::map<std::string, ServiceCoverage> service_coverage(const EndpointInventory& inv,
                                                        const std::vector<TestTrace>& traces, Diagnostics& diag);

/// C_test(i) = |E_test(i)^tested| / |union of all E_ms(j)|. Throws
/// InputError when the inventory has no endpoints.
std::map<std::string, TestCoverage> test_coverage(const EndpointInventory& inv, const std::vector<TestTrace>& traces);

/// C_suite = |union of all E_test(i)^tested| / |union of all E_ms(j)|.
/// Throws InputError when the inventory has no endpoints.
double suite_coverage(const EndpointInventory& inv, const std::vector<TestTrace>& traces);

/// Summary statistics over a population of percentages. min/avg/max are
/// computed exactly and then rounded to two decimals; the mode is the most
/// frequent value after rounding, and the larger value wins a frequency
/// tie. Throws InputError on an empty population.
Summary summarize(std::span<const double> percentages);

/// Half-away-from-zero rounding to two decimals.
double round2(double value);

/// Assembles every metric, both summaries, the dependency edges and the call
/// accounting. Throws InputError when the inventory has no endpoints.
CoverageReport build_report(const EndpointInventory& inv, const std::vector<TestTrace>& traces, Diagnostics& diag);

}  // namespace e2ecov

#endif  // E2ECOV_METRICS_HPP_
