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

#include "e2ecov/path.hpp"

#include <algorithm>

#include "e2ecov/errors.hpp"

namespace e2ecov {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Path component only: scheme and authority, query and fragment removed.
std::string_view path_part(std::string_view raw) {
  std::string_view s = raw;
  if (auto cut = s.find_first_of("?#"); cut != std::string_view::npos) s = s.substr(0, cut);
  if (auto scheme = s.find("://"); scheme != std::string_view::npos) {
    s.remove_prefix(scheme + 3);
    auto slash = s.find('/');
    s = slash == std::string_view::npos ? std::string_view{} : s.substr(slash);
  }
  return s;
}

template <typename Fn>
void for_each_segment(std::string_view path, Fn&& fn) {
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) fn(path.substr(pos, next - pos));
    pos = next + 1;
  }
}

bool valid_name_char(char c) {
  return c == '_' || c == '-' || c == '.' || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

}  // namespace

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    int hi = i + 1 < text.size() ? hex_value(text[i + 1]) : -1;
    int lo = i + 2 < text.size() ? hex_value(text[i + 2]) : -1;
    if (hi < 0 || lo < 0)
      throw RecordError("malformed percent-encoding", std::string(text));
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

PathTemplate normalize_path(std::string_view raw) {
  PathTemplate segments;
  try {
    for_each_segment(path_part(raw), [&](std::string_view seg) {
      if (seg.size() >= 2 && seg.front() == '{' && seg.back() == '}') {
        std::string_view name = seg.substr(1, seg.size() - 2);
        if (auto colon = name.find(':'); colon != std::string_view::npos) name = name.substr(0, colon);
        segments.emplace_back(Param{std::string(name), ParamType::kString});
      } else if (seg.size() >= 2 && seg.front() == ':' &&
                 std::all_of(seg.begin() + 1, seg.end(), valid_name_char)) {
        segments.emplace_back(Param{std::string(seg.substr(1)), ParamType::kString});
      } else if (seg.find('{') != std::string_view::npos &&
                 seg.find('}', seg.find('{')) != std::string_view::npos) {
        segments.emplace_back(Param{std::string(seg), ParamType::kOpaque});
      } else {
        segments.emplace_back(Literal{percent_decode(seg)});
      }
    });
  } catch (const RecordError&) {
    throw RecordError("malformed percent-encoding in path", std::string(raw));
  }
  if (segments.empty()) throw RecordError("empty path template", std::string(raw));
  return segments;
}

std::vector<std::string> split_url(std::string_view raw) {
  std::vector<std::string> segments;
  try {
    for_each_segment(path_part(raw), [&](std::string_view seg) {
      segments.push_back(percent_decode(seg));
    });
  } catch (const RecordError&) {
    throw RecordError("malformed percent-encoding in URL", std::string(raw));
  }
  return segments;
}

}  // namespace e2ecov
