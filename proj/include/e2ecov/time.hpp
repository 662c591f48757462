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

#ifndef E2ECOV_TIME_HPP_
#define E2ECOV_TIME_HPP_

#include <chrono>
#include <string>
#include <string_view>

namespace e2ecov {

// UTC instant at microsecond resolution.
using Instant = std::chrono::sys_time<std::chrono::microseconds>;
using Duration = std::chrono::microseconds;

// Accepts "YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm|-hh:mm)". Fractions beyond six
// digits are truncated. Throws InputError on malformed input.
Instant parse_rfc3339(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SS.ffffffZ".
std::string format_rfc3339(Instant t);

// Epoch milliseconds are padded to microseconds.
Instant from_epoch_millis(long long millis);
Instant from_epoch_micros(long long micros);

// SkyWalking time buckets: yyyyMMdd, yyyyMMddHH, yyyyMMddHHmm or
// yyyyMMddHHmmss.
Instant parse_time_bucket(std::string_view digits);

// "[+-]<integer><unit>" with unit in {us, ms, s, m, h}; a bare integer is
// seconds.
Duration parse_duration(std::string_view text);

}  // namespace e2ecov

#endif  // E2ECOV_TIME_HPP_
