#!/usr/bin/env python3
# Copyright 2026 The e2ecov Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the TrainTicket-shaped case-study fixture.

Writes inventory.json, traces.es.jsonl (SkyWalking-style Elasticsearch
export), manifest.json and expected.json into the output directory. The
expected.json ground truth is computed here with plain set arithmetic,
independently of the C++ pipeline.

Usage: gen_case_study.py <out_dir>
"""

import base64
import json
import random
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

GATEWAY = "ts-gateway-service"
SEED = 20230601

# (service, endpoint count, tested count)
SERVICES = [
    ("ts-admin-basic-info-service", 8, 7),
    ("ts-admin-order-service", 5, 1),
    ("ts-admin-route-service", 6, 3),
    ("ts-admin-travel-service", 6, 1),
    ("ts-admin-user-service", 7, 6),
    ("ts-assurance-service", 6, 5),
    ("ts-auth-service", 5, 1),
    ("ts-basic-service", 6, 2),
    ("ts-cancel-service", 9, 5),
    ("ts-config-service", 6, 5),
    ("ts-consign-price-service", 7, 3),
    ("ts-consign-service", 6, 4),
    ("ts-contacts-service", 9, 3),
    ("ts-delivery-service", 7, 4),
    ("ts-execute-service", 8, 7),
    ("ts-food-delivery-service", 6, 0),
    ("ts-food-service", 7, 4),
    ("ts-inside-payment-service", 5, 1),
    ("ts-notification-service", 4, 0),
    ("ts-order-other-service", 12, 3),
    ("ts-order-service", 5, 3),
    ("ts-payment-service", 4, 1),
    ("ts-preserve-other-service", 2, 0),
    ("ts-preserve-service", 5, 2),
    ("ts-price-service", 4, 2),
    ("ts-rebook-service", 7, 6),
    ("ts-route-plan-service", 4, 1),
    ("ts-route-service", 8, 3),
    ("ts-seat-service", 8, 3),
    ("ts-security-service", 6, 1),
    ("ts-station-food-service", 5, 2),
    ("ts-station-service", 8, 5),
    ("ts-train-food-service", 7, 3),
    ("ts-train-service", 7, 5),
    ("ts-travel-plan-service", 8, 5),
    ("ts-travel-service", 10, 4),
    ("ts-travel2-service", 12, 3),
    ("ts-user-service", 9, 3),
    ("ts-verification-code-service", 2, 2),
    ("ts-wait-order-service", 6, 0),
]

# (test id, distinct endpoints, total service calls)
TESTS = [
    ("Login", 3, 4),
    ("Booking", 40, 53),
    ("AdminConfigList", 19, 22),
    ("ContactList", 19, 21),
    ("PriceList", 19, 23),
    ("AdminStationList", 19, 20),
    ("AdminTrainList", 19, 24),
    ("AdminRouteList", 16, 18),
    ("AdminUserList", 17, 19),
    ("OrderList", 18, 22),
    ("TravelSearch", 21, 25),
]

GATEWAY_FRONTED = 52
TOTAL_RECORDS = 953
RELATION_INDEX = "sw_endpoint_relation_server_side-20230601"
NOISE_INDICES = [
    "sw_log-20230601",
    "sw_segment-20230601",
    "sw_service_relation_server_side-20230601",
    "sw_service_instance_relation_server_side-20230601",
    "sw_endpoint_cpm-20230601",
]

# (method, path suffix, [(param name, type)])
PATTERNS = [
    ("GET", "/welcome", []),
    ("GET", "/{noun}s", []),
    ("POST", "/{noun}s", []),
    ("PUT", "/{noun}s", []),
    ("GET", "/{noun}s/{{id}}", [("id", "string")]),
    ("DELETE", "/{noun}s/{{id}}", [("id", "string")]),
    ("GET", "/{noun}s/{{id}}/detail", [("id", "string")]),
    ("GET", "/{noun}s/by-date/{{date}}/{{page}}", [("date", "string"), ("page", "integer")]),
    ("POST", "/{noun}s/query", []),
    ("GET", "/{noun}s/query/{{flag}}", [("flag", "boolean")]),
    ("GET", "/admin/{noun}s", []),
    ("PATCH", "/{noun}s/{{id}}/status/{{count}}", [("id", "string"), ("count", "integer")]),
]


def short_name(service):
    return service.removeprefix("ts-").replace("-", "")


def noun(service):
    return service.removeprefix("ts-").removesuffix("-service").split("-")[-1]


def concrete_value(ptype, rng):
    if ptype == "integer":
        return str(rng.randint(1, 999))
    if ptype == "boolean":
        return rng.choice(["true", "false"])
    return "id" + "".join(rng.choice("abcdef0123456789") for _ in range(8))


def build_inventory(rng):
    endpoints = []  # (service, method, template, params, concrete_url)
    for service, count, _ in SERVICES:
        prefix = f"/api/v1/{short_name(service)}"
        for method, suffix, params in PATTERNS[:count]:
            template = prefix + suffix.format(noun=noun(service))
            url = template
            for name, ptype in params:
                url = url.replace("{" + name + "}", concrete_value(ptype, rng), 1)
            endpoints.append((service, method, template, params, url))
    return endpoints


def b64(text):
    return base64.b64encode(text.encode()).decode()


def descriptor(service, method, url, rng):
    # Mix the plain descriptor form with SkyWalking's entity-id form.
    if rng.random() < 0.5:
        return b64(f"{service}/{method}:{url}")
    return b64(service) + ".1_" + b64(f"{{{method}}}{url}")


def main(out_dir):
    rng = random.Random(SEED)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    endpoints = build_inventory(rng)
    assert len(endpoints) == 262

    by_service = {}
    for ep in endpoints:
        by_service.setdefault(ep[0], []).append(ep)

    tested = []
    for service, _, tested_count in SERVICES:
        pool = by_service[service][:]
        rng.shuffle(pool)
        tested.extend(pool[:tested_count])
    assert len(tested) == 119

    fronted = set(range(GATEWAY_FRONTED))  # indices into `tested`
    order = list(range(len(tested)))
    rng.shuffle(order)

    # Each tested endpoint lands in at least one test; remaining capacity is
    # filled with random repeats. Every test gets at least one gateway-fronted
    # entry endpoint.
    assignment = {tid: set() for tid, _, _ in TESTS}
    capacity = {tid: size for tid, size, _ in TESTS}
    gateway_pool = [i for i in order if i in fronted]
    for tid, _, _ in TESTS:
        idx = gateway_pool.pop()
        assignment[tid].add(idx)
    leftovers = [i for i in order if i not in set().union(*assignment.values())]
    for idx in leftovers:
        open_tests = [t for t, _, _ in TESTS if len(assignment[t]) < capacity[t]]
        open_tests.sort(key=lambda t: (len(assignment[t]) / capacity[t], t))
        assignment[open_tests[0]].add(idx)
    for tid, size, _ in TESTS:
        while len(assignment[tid]) < size:
            assignment[tid].add(rng.randrange(len(tested)))
    assert set().union(*assignment.values()) == set(range(len(tested)))

    start0 = datetime(2023, 6, 1, 10, 0, 0, tzinfo=timezone.utc)
    manifest = []
    relation = []  # (timestamp, record)
    gateway_descriptors = set()
    for n, (tid, size, total_calls) in enumerate(TESTS):
        start = start0 + timedelta(minutes=3 * n)
        end = start + timedelta(seconds=120)
        manifest.append({"id": tid,
                         "start": start.strftime("%Y-%m-%dT%H:%M:%SZ"),
                         "end": end.strftime("%Y-%m-%dT%H:%M:%SZ")})
        members = sorted(assignment[tid])
        calls = members + [rng.choice(members) for _ in range(total_calls - size)]
        rng.shuffle(calls)
        entry = [i for i in calls if i in fronted] or [members[0]]
        offset_ms = 500
        for idx in calls:
            service, method, _, _, url = tested[idx]
            ts = start + timedelta(milliseconds=offset_ms)
            offset_ms += rng.randint(200, 2000)
            if idx in fronted:
                gateway_descriptors.add((method, url))
                relation.append((ts, {"source_endpoint": b64("User"),
                                      "dest_endpoint": descriptor(GATEWAY, method, url, rng)}))
                ts = ts + timedelta(microseconds=1500)
                source = descriptor(GATEWAY, method, url, rng)
            else:
                caller = tested[rng.choice(entry)]
                source = descriptor(caller[0], caller[1], caller[4], rng)
            relation.append((ts, {"source_endpoint": source,
                                  "dest_endpoint": descriptor(service, method, url, rng)}))
        assert offset_ms < 120_000
    assert len(gateway_descriptors) == GATEWAY_FRONTED

    records = []
    for ts, payload in relation:
        millis = int(ts.timestamp() * 1000)
        source = dict(payload)
        source["timestamp"] = millis
        source["time_bucket"] = int(ts.strftime("%Y%m%d%H%M"))
        records.append((millis, {"_index": RELATION_INDEX, "_source": source}))
    window_end = start0 + timedelta(minutes=3 * len(TESTS))
    while len(records) < TOTAL_RECORDS:
        ts = start0 + timedelta(milliseconds=rng.randrange(int((window_end - start0).total_seconds() * 1000)))
        millis = int(ts.timestamp() * 1000)
        index = rng.choice(NOISE_INDICES)
        records.append((millis, {"_index": index, "_source": {
            "timestamp": millis,
            "time_bucket": int(ts.strftime("%Y%m%d%H%M")),
            "entity_id": b64(rng.choice(SERVICES)[0]) + ".1",
            "value": rng.randint(0, 500)}}))
    records.sort(key=lambda r: (r[0], json.dumps(r[1], sort_keys=True)))

    with open(out / "traces.es.jsonl", "w") as f:
        for _, rec in records:
            f.write(json.dumps(rec, sort_keys=True) + "\n")

    services = [{"name": GATEWAY, "gateway": True, "endpoints": []}]
    for service, _, _ in SERVICES:
        eps = []
        for _, method, template, params, _ in by_service[service]:
            eps.append({"method": method, "path": template,
                        "params": [{"name": n, "type": t} for n, t in params]})
        services.append({"name": service, "gateway": False, "endpoints": eps})
    with open(out / "inventory.json", "w") as f:
        json.dump({"services": services}, f, indent=2, sort_keys=True)
        f.write("\n")
    with open(out / "manifest.json", "w") as f:
        json.dump({"tests": manifest}, f, indent=2)
        f.write("\n")

    expected = {
        "total_records": len(records),
        "relation_records": len(relation),
        "universe": len(endpoints),
        "distinct_matched": len(tested),
        "distinct_gateway": len(gateway_descriptors),
        "per_test": {tid: len(assignment[tid]) for tid, _, _ in TESTS},
        "per_service": {s: {"tested": t, "total": c} for s, c, t in SERVICES},
    }
    with open(out / "expected.json", "w") as f:
        json.dump(expected, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
