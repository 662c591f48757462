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

// Shallow-syntactic scanner for Spring-style REST controllers. It tokenizes
// the source (skipping comments and keeping string literals intact), tracks
// class bodies by brace depth and recognises the mapping annotations that
// precede class and method declarations.

#include <fnmatch.h>

#include <algorithm>
#include <array>
#include <set>

#include "e2ecov/extract_static.hpp"
#include "e2ecov/path.hpp"
#include "e2ecov/serialize.hpp"

namespace e2ecov {

namespace {

enum class Tok { kIdent, kString, kNumber, kPunct };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

bool ident_start(char c) {
  return c == '_' || c == '$' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i = std::min(n, i + 2);
    } else if (c == '"' && src.substr(i, 3) == "\"\"\"") {
      int start_line = line;
      i += 3;
      std::string text;
      while (i < n && src.substr(i, 3) != "\"\"\"") {
        if (src[i] == '\n') ++line;
        text.push_back(src[i++]);
      }
      i = std::min(n, i + 3);
      out.push_back({Tok::kString, std::move(text), start_line});
    } else if (c == '"' || c == '\'') {
      char quote = c;
      std::string text;
      ++i;
      while (i < n && src[i] != quote && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < n) {
          char e = src[i + 1];
          text.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
          i += 2;
        } else {
          text.push_back(src[i++]);
        }
      }
      ++i;
      // Character literals never matter for mappings; keep them as numbers so
      // they cannot be mistaken for paths.
      out.push_back({quote == '"' ? Tok::kString : Tok::kNumber, std::move(text), line});
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(src[i])) ++i;
      out.push_back({Tok::kIdent, std::string(src.substr(start, i - start)), line});
    } else if (c >= '0' && c <= '9') {
      std::size_t start = i;
      while (i < n && (ident_char(src[i]) || src[i] == '.')) ++i;
      out.push_back({Tok::kNumber, std::string(src.substr(start, i - start)), line});
    } else {
      out.push_back({Tok::kPunct, std::string(1, c), line});
      ++i;
    }
  }
  return out;
}

bool is_punct(const Token& t, char c) { return t.kind == Tok::kPunct && t.text.size() == 1 && t.text[0] == c; }

// Index one past the token that closes the bracket opened at `open`.
std::size_t skip_balanced(const std::vector<Token>& toks, std::size_t open, char o, char c) {
  int depth = 0;
  for (std::size_t i = open; i < toks.size(); ++i) {
    if (is_punct(toks[i], o)) ++depth;
    if (is_punct(toks[i], c) && --depth == 0) return i + 1;
  }
  return toks.size();
}

struct Annotation {
  std::string name;  // last component of the qualified name
  std::vector<Token> args;
  int line = 1;
};

// Parses "@Name" or "@a.b.Name(...)" starting at the '@'. Returns the index
// after the annotation.
std::size_t read_annotation(const std::vector<Token>& toks, std::size_t at, Annotation& out) {
  std::size_t i = at + 1;
  out.line = toks[at].line;
  while (i < toks.size() && toks[i].kind == Tok::kIdent) {
    out.name = toks[i].text;
    if (i + 2 < toks.size() && is_punct(toks[i + 1], '.') && toks[i + 2].kind == Tok::kIdent) {
      i += 2;
    } else {
      ++i;
      break;
    }
  }
  if (i < toks.size() && is_punct(toks[i], '(')) {
    std::size_t end = skip_balanced(toks, i, '(', ')');
    out.args.assign(toks.begin() + static_cast<std::ptrdiff_t>(i + 1),
                    toks.begin() + static_cast<std::ptrdiff_t>(end > i + 1 ? end - 1 : i + 1));
    i = end;
  }
  return i;
}

// A value inside annotation arguments: a (possibly concatenated) string or an
// unresolved reference such as RequestMethod.GET or a constant.
struct ArgValue {
  bool is_string = false;
  std::string text;
};

std::vector<std::vector<Token>> split_top_level(const std::vector<Token>& toks) {
  std::vector<std::vector<Token>> parts(1);
  int depth = 0;
  for (const auto& t : toks) {
    if (is_punct(t, '(') || is_punct(t, '{') || is_punct(t, '[') || is_punct(t, '<')) ++depth;
    if (is_punct(t, ')') || is_punct(t, '}') || is_punct(t, ']') || is_punct(t, '>')) --depth;
    if (depth == 0 && is_punct(t, ',')) {
      parts.emplace_back();
    } else {
      parts.back().push_back(t);
    }
  }
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

ArgValue read_value(const std::vector<Token>& toks) {
  ArgValue v;
  bool all_strings = !toks.empty();
  for (const auto& t : toks) {
    if (t.kind == Tok::kString) {
      v.text += t.text;
    } else if (is_punct(t, '+')) {
      continue;
    } else {
      all_strings = false;
    }
  }
  v.is_string = all_strings;
  if (!all_strings) {
    v.text.clear();
    for (const auto& t : toks) v.text += t.text;
  }
  return v;
}

std::vector<ArgValue> read_values(const std::vector<Token>& toks) {
  if (!toks.empty() && is_punct(toks.front(), '{') && is_punct(toks.back(), '}')) {
    std::vector<Token> inner(toks.begin() + 1, toks.end() - 1);
    std::vector<ArgValue> out;
    for (const auto& part : split_top_level(inner)) out.push_back(read_value(part));
    return out;
  }
  return {read_value(toks)};
}

std::map<std::string, std::vector<ArgValue>> parse_args(const std::vector<Token>& args) {
  std::map<std::string, std::vector<ArgValue>> out;
  for (const auto& part : split_top_level(args)) {
    if (part.size() >= 2 && part[0].kind == Tok::kIdent && is_punct(part[1], '=')) {
      out[part[0].text] = read_values(std::vector<Token>(part.begin() + 2, part.end()));
    } else {
      out["value"] = read_values(part);
    }
  }
  return out;
}

constexpr std::array<std::pair<std::string_view, HttpMethod>, 5> kShortcuts{{
    {"GetMapping", HttpMethod::kGet},
    {"PostMapping", HttpMethod::kPost},
    {"PutMapping", HttpMethod::kPut},
    {"DeleteMapping", HttpMethod::kDelete},
    {"PatchMapping", HttpMethod::kPatch},
}};

bool is_mapping(const Annotation& a) {
  if (a.name == "RequestMapping") return true;
  return std::any_of(kShortcuts.begin(), kShortcuts.end(), [&](const auto& s) { return s.first == a.name; });
}

// Paths declared by a mapping annotation; a mapping without one maps "".
std::vector<std::string> mapping_paths(const Annotation& a, const std::string& file, Diagnostics& diag) {
  auto args = parse_args(a.args);
  std::vector<ArgValue> values;
  if (auto it = args.find("value"); it != args.end()) values = it->second;
  if (auto it = args.find("path"); it != args.end()) values = it->second;
  if (values.empty()) return {""};
  std::vector<std::string> out;
  for (const auto& v : values) {
    if (v.is_string) {
      out.push_back(v.text);
    } else {
      diag.warn(file + ":" + std::to_string(a.line) + ": unresolved mapping path '" + v.text +
                "' skipped");
    }
  }
  return out;
}

std::string join_paths(const std::string& prefix, const std::string& path) {
  std::string_view p(prefix);
  std::string_view s(path);
  while (!p.empty() && p.back() == '/') p.remove_suffix(1);
  while (!s.empty() && s.front() == '/') s.remove_prefix(1);
  if (p.empty()) return "/" + std::string(s);
  if (s.empty()) return std::string(p);
  return std::string(p) + "/" + std::string(s);
}

struct ClassContext {
  int body_depth = 0;
  bool controller = false;
  std::vector<std::string> prefixes{""};
  std::size_t mapping_count = 0;
  std::string name;
  int line = 1;
};

const std::set<std::string, std::less<>> kModifiers{
    "public", "private", "protected", "static", "final", "synchronized", "abstract", "default", "native",
};

std::vector<ParamDecl> parse_params(const std::vector<Token>& toks) {
  std::vector<ParamDecl> out;
  for (const auto& part : split_top_level(toks)) {
    std::string bound;
    std::vector<Token> rest;
    for (std::size_t i = 0; i < part.size();) {
      if (is_punct(part[i], '@') && i + 1 < part.size() && part[i + 1].kind == Tok::kIdent) {
        Annotation a;
        std::vector<Token> slice(part.begin() + static_cast<std::ptrdiff_t>(i), part.end());
        std::size_t used = read_annotation(slice, 0, a);
        if (a.name == "PathVariable") {
          auto args = parse_args(a.args);
          for (const char* key : {"value", "name"}) {
            if (auto it = args.find(key); it != args.end() && !it->second.empty() && it->second[0].is_string)
              bound = it->second[0].text;
          }
        }
        i += used;
      } else {
        if (!(part[i].kind == Tok::kIdent && part[i].text == "final")) rest.push_back(part[i]);
        ++i;
      }
    }
    if (rest.empty() || rest.back().kind != Tok::kIdent) continue;
    std::string name = rest.back().text;
    rest.pop_back();
    std::string type_text;
    for (const auto& t : rest) type_text += t.text;
    out.push_back(ParamDecl{bound.empty() ? name : bound, type_text});
  }
  return out;
}

}  // namespace

ParamType map_declared_type(std::string_view type_text) {
  std::string t(type_text);
  if (t.find('<') != std::string::npos || t.find('[') != std::string::npos || t.find("...") != std::string::npos)
    return ParamType::kOpaque;
  if (auto dot = t.rfind('.'); dot != std::string::npos) t = t.substr(dot + 1);
  static const std::set<std::string, std::less<>> kInteger{"int", "long", "short", "byte", "Integer", "Long",
                                                           "Short", "Byte", "BigInteger"};
  static const std::set<std::string, std::less<>> kNumber{"float", "double", "Float", "Double", "BigDecimal"};
  static const std::set<std::string, std::less<>> kBoolean{"boolean", "Boolean"};
  static const std::set<std::string, std::less<>> kText{"String", "CharSequence", "char", "Character", "UUID"};
  if (kInteger.contains(t)) return ParamType::kInteger;
  if (kNumber.contains(t)) return ParamType::kNumber;
  if (kBoolean.contains(t)) return ParamType::kBoolean;
  if (kText.contains(t)) return ParamType::kString;
  return ParamType::kOpaque;
}

std::vector<AnnotationMatch> scan_source(std::string_view text, const std::string& file, Diagnostics& diag) {
  const auto toks = tokenize(text);
  std::vector<AnnotationMatch> out;
  std::vector<ClassContext> classes;
  std::vector<Annotation> pending;
  std::size_t decl_start = 0;  // first token after the pending annotations
  int depth = 0;

  auto close_class = [&](const ClassContext& ctx) {
    if (ctx.controller && ctx.mapping_count == 0)
      diag.warn(file + ":" + std::to_string(ctx.line) + ": controller '" + ctx.name +
                "' declares no request mappings");
  };

  for (std::size_t i = 0; i < toks.size();) {
    const Token& t = toks[i];
    if (is_punct(t, '@') && i + 1 < toks.size() && toks[i + 1].kind == Tok::kIdent &&
        toks[i + 1].text != "interface") {
      Annotation a;
      i = read_annotation(toks, i, a);
      pending.push_back(std::move(a));
      decl_start = i;
      continue;
    }
    bool type_keyword = t.kind == Tok::kIdent &&
                        (t.text == "class" || t.text == "interface" || t.text == "enum" || t.text == "record") &&
                        !(i > 0 && is_punct(toks[i - 1], '.'));
    if (type_keyword) {
      ClassContext ctx;
      ctx.line = t.line;
      if (i + 1 < toks.size()) ctx.name = toks[i + 1].text;
      for (const auto& a : pending) {
        if (a.name == "RestController" || a.name == "Controller") ctx.controller = true;
      }
      for (const auto& a : pending) {
        if (a.name != "RequestMapping") continue;
        ctx.prefixes = mapping_paths(a, file, diag);
        for (const auto& prefix : ctx.prefixes) {
          AnnotationMatch m;
          m.file = file;
          m.line = a.line;
          m.kind = MappingKind::kClassMapping;
          m.path_value = prefix;
          if (ctx.controller) out.push_back(std::move(m));
        }
      }
      pending.clear();
      std::size_t j = i + 1;
      while (j < toks.size() && !is_punct(toks[j], '{') && !is_punct(toks[j], ';')) ++j;
      if (j < toks.size() && is_punct(toks[j], '{')) {
        ctx.body_depth = depth + 1;
        classes.push_back(std::move(ctx));
      }
      i = j;
      continue;
    }
    if (is_punct(t, '{')) {
      ++depth;
      pending.clear();
    } else if (is_punct(t, '}')) {
      --depth;
      pending.clear();
      while (!classes.empty() && depth < classes.back().body_depth) {
        close_class(classes.back());
        classes.pop_back();
      }
    } else if (is_punct(t, ';')) {
      pending.clear();
    } else if (is_punct(t, '(') && !classes.empty() && depth == classes.back().body_depth) {
      std::size_t close = skip_balanced(toks, i, '(', ')');
      auto& ctx = classes.back();
      std::vector<const Annotation*> mappings;
      for (const auto& a : pending)
        if (is_mapping(a)) mappings.push_back(&a);
      if (ctx.controller && !mappings.empty()) {
        std::vector<Token> param_toks(toks.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                      toks.begin() + static_cast<std::ptrdiff_t>(close - 1));
        auto params = parse_params(param_toks);
        std::string return_type;
        for (std::size_t k = decl_start; k + 1 < i; ++k) {
          if (toks[k].kind == Tok::kIdent && kModifiers.contains(toks[k].text)) continue;
          return_type += toks[k].text;
        }
        for (const Annotation* a : mappings) {
          std::vector<HttpMethod> methods;
          if (a->name == "RequestMapping") {
            auto args = parse_args(a->args);
            if (auto it = args.find("method"); it != args.end()) {
              for (const auto& v : it->second) {
                std::string name = v.text.substr(v.text.rfind('.') == std::string::npos ? 0 : v.text.rfind('.') + 1);
                if (auto m = parse_method(name)) {
                  methods.push_back(*m);
                } else {
                  diag.warn(file + ":" + std::to_string(a->line) + ": unknown request method '" + v.text + "'");
                }
              }
            }
            if (methods.empty()) {
              diag.warn(file + ":" + std::to_string(a->line) +
                        ": RequestMapping without a method attribute defaults to GET");
              methods.push_back(HttpMethod::kGet);
            }
          } else {
            for (const auto& [name, method] : kShortcuts)
              if (name == a->name) methods.push_back(method);
          }
          for (const auto& prefix : ctx.prefixes) {
            for (const auto& path : mapping_paths(*a, file, diag)) {
              for (HttpMethod method : methods) {
                AnnotationMatch m;
                m.file = file;
                m.line = a->line;
                m.kind = MappingKind::kMethodMapping;
                m.http_method = method;
                m.path_value = join_paths(prefix, path);
                m.param_decls = params;
                m.return_type = return_type;
                out.push_back(std::move(m));
                ++ctx.mapping_count;
              }
            }
          }
        }
      }
      pending.clear();
      i = close;
      continue;
    }
    ++i;
  }
  while (!classes.empty()) {
    close_class(classes.back());
    classes.pop_back();
  }
  return out;
}

EndpointInventory endpoints_from_matches(const std::vector<AnnotationMatch>& matches,
                                         const std::string& service_id, Diagnostics& diag) {
  EndpointInventory inv;
  for (const auto& m : matches) {
    if (m.kind != MappingKind::kMethodMapping) continue;
    std::string where = m.file + ":" + std::to_string(m.line);
    Endpoint e;
    e.service_id = service_id;
    e.method = m.http_method.value_or(HttpMethod::kGet);
    try {
      e.path = normalize_path(m.path_value);
    } catch (const RecordError& err) {
      diag.warn(where + ": mapping '" + m.path_value + "' skipped: " + err.what());
      continue;
    }
    for (auto& seg : e.path) {
      auto* p = std::get_if<Param>(&seg);
      if (!p || p->type == ParamType::kOpaque) continue;
      auto decl = std::find_if(m.param_decls.begin(), m.param_decls.end(),
                               [&](const ParamDecl& d) { return d.name == p->name; });
      if (decl == m.param_decls.end()) {
        diag.warn(where + ": path variable '" + p->name + "' has no matching parameter; typed opaque");
        p->type = ParamType::kOpaque;
      } else {
        p->type = map_declared_type(decl->type_text);
      }
    }
    e.source_location = where;
    if (!m.return_type.empty()) e.return_type = m.return_type;
    std::string display = display_name(e);
    if (!inv.add(std::move(e))) diag.warn(where + ": duplicate mapping '" + display + "' ignored");
  }
  return inv;
}

std::map<std::string, ServiceDecl> load_services_manifest(const std::filesystem::path& file) {
  auto doc = read_json_file(file);
  if (!doc.contains("services") || !doc.at("services").is_object())
    throw InputError("services manifest '" + file.string() + "': expected an object 'services'");
  std::map<std::string, ServiceDecl> out;
  for (const auto& [name, decl] : doc.at("services").items()) {
    ServiceDecl d;
    d.dir = decl.is_object() ? decl.value("dir", name) : name;
    d.gateway = decl.is_object() ? decl.value("gateway", false) : false;
    out.emplace(name, std::move(d));
  }
  return out;
}

namespace {

bool glob_any(const std::vector<std::string>& globs, const std::string& rel) {
  return std::any_of(globs.begin(), globs.end(),
                     [&](const std::string& g) { return fnmatch(g.c_str(), rel.c_str(), 0) == 0; });
}

std::vector<std::filesystem::path> service_files(const std::filesystem::path& dir, const SourceTree& tree,
                                                 Diagnostics& diag) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    diag.warn("cannot list '" + dir.string() + "': " + ec.message());
    return files;
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      diag.warn("error while listing '" + dir.string() + "': " + ec.message());
      break;
    }
    if (!it->is_regular_file(ec)) continue;
    std::string rel = fs::relative(it->path(), dir).generic_string();
    if (glob_any(tree.include_globs, rel) && !glob_any(tree.exclude_globs, rel)) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

EndpointInventory scan_annotations(const SourceTree& tree, Diagnostics& diag) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(tree.root_dir))
    throw InputError("source root '" + tree.root_dir.string() + "' is not a readable directory");

  std::map<std::string, ServiceDecl> services = tree.services;
  if (services.empty()) {
    if (tree.layout == ServiceLayout::kSingleService) {
      std::string id = tree.single_service_id;
      if (id.empty()) id = fs::absolute(tree.root_dir).lexically_normal().filename().string();
      if (id.empty()) id = fs::absolute(tree.root_dir).lexically_normal().parent_path().filename().string();
      services.emplace(id, ServiceDecl{".", false});
    } else {
      for (const auto& entry : fs::directory_iterator(tree.root_dir)) {
        std::string name = entry.path().filename().string();
        if (entry.is_directory() && !name.empty() && name.front() != '.') services.emplace(name, ServiceDecl{name, false});
      }
    }
  }

  std::vector<EndpointInventory> fragments;
  for (const auto& [service, decl] : services) {
    EndpointInventory base;
    // Only an explicit manifest declares the flag.
    base.ensure_service(service, tree.services.empty() ? std::nullopt : std::optional<bool>(decl.gateway));
    fragments.push_back(std::move(base));
    fs::path dir = tree.root_dir / decl.dir;
    if (!fs::is_directory(dir)) {
      diag.warn("service '" + service + "': directory '" + dir.string() + "' not found");
      continue;
    }
    std::size_t before = fragments.size();
    for (const auto& file : service_files(dir, tree, diag)) {
      std::string text;
      try {
        text = read_file(file);
      } catch (const InputError& err) {
        diag.warn(std::string(err.what()) + "; file skipped");
        continue;
      }
      std::string rel = fs::relative(file, tree.root_dir).generic_string();
      auto matches = scan_source(text, rel, diag);
      if (!matches.empty()) fragments.push_back(endpoints_from_matches(matches, service, diag));
    }
    std::size_t found = 0;
    for (std::size_t k = before; k < fragments.size(); ++k) found += fragments[k].endpoint_count();
    if (found == 0) diag.warn("service '" + service + "': no endpoints found");
  }
  return merge_inventories(fragments, diag);
}

}  // namespace e2ecov
