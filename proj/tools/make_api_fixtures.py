#!/usr/bin/env python3
"""Writes tests/fixtures/api_requests.json: search requests against the
default seed-42 scenario. Usage: make_api_fixtures.py LEDGER.json OUT.json"""

import json
import random
import sys


def key(c):
    return {"code": c["code"], "vocabulary": c["vocabulary"]}


def main():
    ledger = json.load(open(sys.argv[1]))
    rng = random.Random(42)
    concepts = ledger["concepts"]
    by_id = {c["id"]: c for c in concepts}
    searchable = [c for c in concepts if c["role"] in ("annotating", "planted", "parent")]
    chars = ["completeness", "accuracy", "reliability", "timeliness", "consistency"]
    out = []

    def add(name, endpoint, body):
        out.append({"name": name, "endpoint": endpoint, "body": body})

    for q in ledger["planted_queries"]:
        for expansion in (True, False):
            add(f"{q['name']} expansion={expansion}", "/api/v1/search/concepts",
                {"seeds": q["seeds"], "operator": q["operator"], "expansion": expansion})
    add("bmi default operator", "/api/v1/search/concepts", {"seeds": [{"code": "39156-5", "vocabulary": "LOINC"}]})
    add("empty seed list", "/api/v1/search/concepts", {"seeds": []})
    for i in range(10):
        seeds = [key(c) for c in rng.sample(searchable, rng.randint(1, 3))]
        add(f"random concepts {i}", "/api/v1/search/concepts",
            {"seeds": seeds, "operator": rng.choice(["AND", "OR"]), "expansion": rng.random() < 0.5})

    triples = sorted({(by_id[e["source"]]["vocabulary"], e["relationship"], e["target"])
                      for e in ledger["edges"] if e["relationship"] not in ("Is a", "Maps to")})
    for v, r, p in rng.sample(triples, 8):
        add(f"relationship {v} {r} {by_id[p]['code']}", "/api/v1/search/relationship",
            {"vocabulary": v, "relationship": r, "attributing": key(by_id[p])})
    add("relationship unknown attributing", "/api/v1/search/relationship",
        {"vocabulary": "LOINC", "relationship": "Has scale", "attributing": {"code": "LP-None", "vocabulary": "LOINC"}})
    add("relationship reserved label", "/api/v1/search/relationship",
        {"vocabulary": "SNOMED", "relationship": "Is a", "attributing": {"code": "SCT-10090", "vocabulary": "SNOMED"}})

    for lo, hi in [(0.5, 1.0), (0.0, 0.3), (0.3, 0.3), (0.0, 1.0), (0.75, 0.9)]:
        add(f"collection completeness [{lo},{hi}]", "/api/v1/search/quality/collection",
            {"characteristic": "completeness", "min": lo, "max": hi})
    add("collection accuracy absent", "/api/v1/search/quality/collection", {"characteristic": "accuracy"})
    add("collection inverted range", "/api/v1/search/quality/collection",
        {"characteristic": "completeness", "min": 0.9, "max": 0.1})

    bmi = {"code": "39156-5", "vocabulary": "LOINC"}
    add("bmi completeness [0.5,1]", "/api/v1/search/quality/attribute",
        {"concept": bmi, "characteristic": "completeness", "min": 0.5, "max": 1.0})
    add("bmi completeness [0,0.5]", "/api/v1/search/quality/attribute",
        {"concept": bmi, "characteristic": "completeness", "min": 0.0, "max": 0.5})
    add("bmi timeliness", "/api/v1/search/quality/attribute",
        {"concept": bmi, "characteristic": "timeliness"})
    for i in range(7):
        c = rng.choice(searchable)
        lo = round(rng.random() * 0.6, 2)
        add(f"random attribute quality {i}", "/api/v1/search/quality/attribute",
            {"concept": key(c), "characteristic": rng.choice(chars[:1] * 3 + chars), "min": lo,
             "max": round(lo + 0.4, 2), "expansion": rng.random() < 0.5})
    add("attribute quality out of range", "/api/v1/search/quality/attribute",
        {"concept": bmi, "characteristic": "completeness", "min": -0.5, "max": 1.0})

    assert len(out) == 50, len(out)
    json.dump({"scenario": ledger["spec"], "requests": out}, open(sys.argv[2], "w"), indent=1)
    open(sys.argv[2], "a").write("\n")


if __name__ == "__main__":
    main()
