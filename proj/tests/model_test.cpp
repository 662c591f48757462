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

#include <gtest/gtest.h>

#include <random>

#include "e2ecov/model.hpp"
#include "e2ecov/path.hpp"

namespace e2ecov {
namespace {

Endpoint make(std::string svc, HttpMethod m, PathTemplate path) {
  Endpoint e;
  e.service_id = std::move(svc);
  e.method = m;
  e.path = std::move(path);
  return e;
}

TEST(Model, MethodNamesRoundTrip) {
  for (auto m : {HttpMethod::kGet, HttpMethod::kPost, HttpMethod::kPut, HttpMethod::kDelete, HttpMethod::kPatch,
                 HttpMethod::kHead, HttpMethod::kOptions}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("get"), HttpMethod::kGet);
  EXPECT_EQ(parse_method("Delete"), HttpMethod::kDelete);
  EXPECT_FALSE(parse_method("TRACE").has_value());
  EXPECT_FALSE(parse_method("").has_value());
}

TEST(Model, ParamTypeNames) {
  EXPECT_EQ(parse_param_type("integer"), ParamType::kInteger);
  EXPECT_EQ(parse_param_type("number"), ParamType::kNumber);
  EXPECT_EQ(parse_param_type("boolean"), ParamType::kBoolean);
  EXPECT_EQ(parse_param_type("string"), ParamType::kString);
  EXPECT_EQ(parse_param_type("uuid"), ParamType::kOpaque);
  EXPECT_EQ(to_string(ParamType::kOpaque), "opaque");
}

TEST(Model, IdentityIgnoresParamNames) {
  auto a = make("orders", HttpMethod::kGet, {Literal{"orders"}, Param{"id", ParamType::kInteger}});
  auto b = make("orders", HttpMethod::kGet, {Literal{"orders"}, Param{"orderId", ParamType::kInteger}});
  EXPECT_EQ(identity_key(a), identity_key(b));
  EXPECT_EQ(identity_key(a), "orders|GET|orders/{integer}");
}

TEST(Model, IdentityDistinguishesTypesMethodsAndServices) {
  auto base = make("orders", HttpMethod::kGet, {Literal{"orders"}, Param{"id", ParamType::kInteger}});
  auto typed = make("orders", HttpMethod::kGet, {Literal{"orders"}, Param{"id", ParamType::kString}});
  auto method = make("orders", HttpMethod::kPost, {Literal{"orders"}, Param{"id", ParamType::kInteger}});
  auto service = make("billing", HttpMethod::kGet, {Literal{"orders"}, Param{"id", ParamType::kInteger}});
  EXPECT_NE(identity_key(base), identity_key(typed));
  EXPECT_NE(identity_key(base), identity_key(method));
  EXPECT_NE(identity_key(base), identity_key(service));
}

TEST(Model, IdentityEscapesAmbiguousLiterals) {
  // A literal "a/b" must not collide with two literals "a", "b"; nor a
  // literal "{string}" with a string parameter.
  auto joined = make("s", HttpMethod::kGet, {Literal{"a/b"}});
  auto split = make("s", HttpMethod::kGet, {Literal{"a"}, Literal{"b"}});
  auto braces = make("s", HttpMethod::kGet, {Literal{"{string}"}});
  auto param = make("s", HttpMethod::kGet, {Param{"x", ParamType::kString}});
  auto pipe = make("s|GET", HttpMethod::kGet, {Literal{"x"}});
  auto plain = make("s", HttpMethod::kGet, {Literal{"GET|x"}});
  EXPECT_NE(identity_key(joined), identity_key(split));
  EXPECT_NE(identity_key(braces), identity_key(param));
  EXPECT_NE(identity_key(pipe), identity_key(plain));
}

TEST(Model, RenderPathAndDisplayName) {
  auto e = make("s", HttpMethod::kPut, {Literal{"orders"}, Param{"id", ParamType::kInteger}, Literal{"a b"}});
  EXPECT_EQ(render_path(e.path), "/orders/{id}/a b");
  EXPECT_EQ(display_name(e), "PUT /orders/{id}/a b");
  EXPECT_EQ(render_path({}), "/");
  EXPECT_EQ(render_path({Literal{"x/y"}, Literal{":colon"}}), "/x%2Fy/%3Acolon");
}

TEST(Model, InventoryRejectsDuplicateIdentity) {
  EndpointInventory inv;
  EXPECT_TRUE(inv.add(make("s", HttpMethod::kGet, {Literal{"a"}, Param{"x", ParamType::kInteger}})));
  EXPECT_FALSE(inv.add(make("s", HttpMethod::kGet, {Literal{"a"}, Param{"y", ParamType::kInteger}})));
  EXPECT_TRUE(inv.add(make("s", HttpMethod::kGet, {Literal{"a"}, Param{"y", ParamType::kNumber}})));
  EXPECT_EQ(inv.endpoint_count(), 2u);
}

TEST(Model, InventoryGatewayAccounting) {
  EndpointInventory inv;
  inv.add(make("a", HttpMethod::kGet, {Literal{"x"}}));
  inv.add(make("a", HttpMethod::kPost, {Literal{"x"}}));
  inv.add(make("gw", HttpMethod::kGet, {Literal{"route"}}));
  inv.set_gateway("gw", true);
  inv.ensure_service("empty");
  EXPECT_TRUE(inv.is_gateway("gw"));
  EXPECT_FALSE(inv.is_gateway("a"));
  EXPECT_FALSE(inv.is_gateway("missing"));
  EXPECT_EQ(inv.universe_size(), 2u);
  EXPECT_EQ(inv.service_count(), 2u);
  EXPECT_EQ(inv.endpoint_count(), 3u);
  EXPECT_EQ(inv.gateway_services(), std::set<std::string>{"gw"});
  ASSERT_NE(inv.find("a|POST|x"), nullptr);
  EXPECT_EQ(inv.find("a|PUT|x"), nullptr);
}

TEST(Model, EnsureServiceKeepsFlagUnlessGiven) {
  EndpointInventory inv;
  inv.ensure_service("gw", true);
  inv.ensure_service("gw");
  EXPECT_TRUE(inv.is_gateway("gw"));
  inv.ensure_service("gw", false);
  EXPECT_FALSE(inv.is_gateway("gw"));
}

TEST(Model, ChronologicalOrderIsTotal) {
  EndpointCall a;
  a.timestamp = from_epoch_millis(1000);
  a.destination = {"s", HttpMethod::kGet, "/a"};
  EndpointCall b = a;
  b.destination.url = "/b";
  EndpointCall c = a;
  c.timestamp = from_epoch_millis(999);
  EXPECT_TRUE(chronological_less(a, b));
  EXPECT_FALSE(chronological_less(b, a));
  EXPECT_TRUE(chronological_less(c, a));
  EXPECT_FALSE(chronological_less(a, a));
}

// Property: two endpoints share an identity key exactly when service,
// method, segment count, literal texts and parameter types all agree.
TEST(ModelProperty, IdentityKeyIsACongruence) {
  std::mt19937 rng(7);
  const std::vector<std::string> literals{"a", "b", "a/b", "{x}", "|", "%", "ab"};
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto random_endpoint = [&] {
    Endpoint e;
    e.service_id = pick(2) ? "s" : "s|t";
    e.method = pick(2) ? HttpMethod::kGet : HttpMethod::kPost;
    int len = pick(3);
    for (int i = 0; i < len; ++i) {
      if (pick(2)) {
        e.path.push_back(Literal{literals[pick(static_cast<int>(literals.size()))]});
      } else {
        e.path.push_back(Param{"n" + std::to_string(pick(3)), static_cast<ParamType>(pick(5))});
      }
    }
    return e;
  };
  auto shape_equal = [](const Endpoint& x, const Endpoint& y) {
    if (x.service_id != y.service_id || x.method != y.method || x.path.size() != y.path.size()) return false;
    for (std::size_t i = 0; i < x.path.size(); ++i) {
      const auto* lx = std::get_if<Literal>(&x.path[i]);
      const auto* ly = std::get_if<Literal>(&y.path[i]);
      if ((lx == nullptr) != (ly == nullptr)) return false;
      if (lx && lx->text != ly->text) return false;
      if (!lx && std::get<Param>(x.path[i]).type != std::get<Param>(y.path[i]).type) return false;
    }
    return true;
  };
  int equal_pairs = 0;
  for (int i = 0; i < 20000; ++i) {
    auto x = random_endpoint();
    auto y = random_endpoint();
    bool same = shape_equal(x, y);
    equal_pairs += same;
    ASSERT_EQ(identity_key(x) == identity_key(y), same) << identity_key(x) << " vs " << identity_key(y);
  }
  EXPECT_GT(equal_pairs, 100);
}

// Property: rendering a template and normalizing it again is the identity on
// literal and string-parameter templates.
TEST(ModelProperty, RenderThenNormalizeRoundTrips) {
  std::mt19937 rng(11);
  const std::vector<std::string> literals{"a", "b c", "x/y", ":lead", "100%", "q?", "h#", "caf\xC3\xA9", "{b}"};
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int i = 0; i < 2000; ++i) {
    PathTemplate t;
    int len = 1 + pick(4);
    for (int k = 0; k < len; ++k) {
      if (pick(3)) {
        t.push_back(Literal{literals[pick(static_cast<int>(literals.size()))]});
      } else {
        t.push_back(Param{"v" + std::to_string(k), ParamType::kString});
      }
    }
    ASSERT_EQ(normalize_path(render_path(t)), t) << render_path(t);
  }
}

}  // namespace
}  // namespace e2ecov
