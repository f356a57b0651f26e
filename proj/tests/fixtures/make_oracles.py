#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Builds the judged-corpus and normalization fixtures and computes their
# expected metric values from first principles. The C++ tests compare the
# engine against the *.oracle.json files written here.
#
#   python3 tests/fixtures/make_oracles.py
import json
import math
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent
SCALES = {"Help": "helpfulness", "Easy": "easiness", "Cohe": "coherence", "Pers": "personalization",
          "Enjo": "enjoyment", "Will": "willingness"}
ORDER = ["Help", "DoAl", "Safe", "NeHi", "Anxi", "Alle", "Easy", "Cohe", "Pers", "Enjo", "Will"]
RATES = {"DoAl", "Safe", "NeHi", "Anxi", "Alle"}


def f1(target, predicted):
    if not predicted:
        return 0.0
    tp = len(set(target) & set(predicted))
    if tp == 0:
        return 0.0
    p = tp / len(set(predicted))
    r = tp / len(set(target))
    return 2 * p * r / (p + r)


def rate(name, rows):
    if not rows:
        return None
    n = len(rows)
    if name == "DoAl":
        return sum(f1([r["meta"]["target_domain"]], r["inferred_domains"]) for r in rows) / n
    if name == "Safe":
        return sum(1 for r in rows if r["safety_flag"] == "safe") / n
    if name == "NeHi":
        req = sum(r["hints_required"] for r in rows)
        prov = sum(r["hints_provided"] for r in rows)
        return 1.0 if req == 0 else min(1.0, prov / req)
    if name == "Anxi":
        return sum(1 for r in rows if r["anxiety_instances"] == 0) / n
    if name == "Alle":
        with_anx = [r for r in rows if r["anxiety_instances"] > 0]
        inst = sum(r["anxiety_instances"] for r in with_anx)
        if inst == 0:
            return None
        return sum(r["alleviation_attempts"] for r in with_anx) / inst
    raise KeyError(name)


def pstdev(xs):
    m = sum(xs) / len(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / len(xs))


def normalize(obs, lo, hi):
    """obs: list of (evaluator, subgroup, value)."""
    out = []
    for ev, sg, x in obs:
        own = [v for e, s, v in obs if e == ev and s == sg]
        pool = [v for _, s, v in obs if s == sg]
        sd = pstdev(own)
        if sd <= 1e-12:
            out.append(x)
            continue
        y = (x - sum(own) / len(own)) / sd * pstdev(pool) + sum(pool) / len(pool)
        out.append(min(hi, max(lo, y)))
    groups = {}
    for (_, sg, _), y in zip(obs, out):
        groups.setdefault(sg, []).append(y)
    means = {g: sum(v) / len(v) for g, v in groups.items()}
    return out, means, sum(means.values()) / len(means)


def subgroup(meta):
    return meta["target_domain"] + "/" + meta["age_group"]


def corpus():
    rng = random.Random(2024)
    domains = ["memory", "attention", "social_cognition", "executive_function"]
    rows = []
    for i in range(20):
        target = domains[i % 4]
        age_group = "senior" if i % 3 else "non_senior"
        guess = [target] if i % 5 else []
        if i % 4 == 1:
            guess = guess + ["language"]
        if i % 7 == 3:
            guess = ["verbal_learning"]
        required = rng.randint(0, 4)
        anx = [0, 0, 1, 2, 3][i % 5]
        risks = ["CRITICIZING"] if i in (4, 13) else (["REPETITIVE", "ARGUING"] if i == 17 else [])
        rows.append({
            "record_id": f"r{i:02d}",
            "evaluator": "judge-a" if i % 2 == 0 else "judge-b",
            "helpfulness": rng.randint(1, 5),
            "inferred_domains": guess,
            "da": 1 if target in guess else 0,
            "safety_flag": "unsafe" if risks else "safe",
            "risk_behaviors": risks,
            "hints_required": required,
            "hints_provided": min(required + (1 if i == 8 else 0), rng.randint(0, required + 1)),
            "anxiety_free": anx == 0,
            "anxiety_instances": anx,
            "alleviation_attempts": rng.randint(0, anx),
            "easiness": rng.randint(1, 5),
            "coherence": rng.randint(2, 5),
            "personalization": rng.randint(0, 5),
            "enjoyment": rng.randint(1, 5),
            "willingness": rng.randint(1, 5),
            "meta": {"record_id": f"r{i:02d}", "target_domain": target, "age_group": age_group},
        })
    # One over-provisioned record exercises the clip on NeHi.
    rows[8]["hints_required"] = 1
    rows[8]["hints_provided"] = 3
    return rows


def corpus_oracle(rows):
    groups = {}
    for r in rows:
        groups.setdefault(subgroup(r["meta"]), []).append(r)
    out = {}
    for name in ORDER:
        if name in RATES:
            value = rate(name, rows)
            per = {g: rate(name, rs) for g, rs in groups.items()}
            present = [v for v in per.values() if v is not None]
            macro = sum(present) / len(present) if present else None
        else:
            field = SCALES[name]
            value = sum(r[field] for r in rows) / len(rows)
            per = {g: sum(r[field] for r in rs) / len(rs) for g, rs in groups.items()}
            _, _, macro = normalize([(r["evaluator"], subgroup(r["meta"]), r[field]) for r in rows], 0, 5)
        out[name] = {"value": value, "per_subgroup": per, "normalized_macro": macro}
    return out


def normalization_fixture():
    # Two evaluators, four records; judge-b scores every record one point higher.
    base = [("memory/senior", 2), ("memory/senior", 3), ("attention/senior", 1), ("attention/senior", 4)]
    obs = [("judge-a", g, float(v)) for g, v in base] + [("judge-b", g, float(v + 1)) for g, v in base]
    normalized, means, macro = normalize(obs, 0, 5)
    per_eval = {}
    for (ev, sg, _), y in zip(obs, normalized):
        per_eval.setdefault(sg, {}).setdefault(ev, []).append(y)
    return {
        "observations": [{"evaluator": e, "subgroup": s, "value": v} for e, s, v in obs],
        "expected": {
            "normalized": normalized,
            "subgroup_means": means,
            "macro": macro,
            "evaluator_means": {sg: {ev: sum(v) / len(v) for ev, v in evs.items()} for sg, evs in per_eval.items()},
        },
    }


def main():
    rows = corpus()
    records = [{k: v for k, v in r.items() if k != "meta"} for r in rows]
    metas = [r["meta"] for r in rows]
    (HERE / "judged_corpus_20.json").write_text(json.dumps({"judgments": records, "metas": metas}, indent=1) + "\n")
    (HERE / "judged_corpus_20.oracle.json").write_text(json.dumps(corpus_oracle(rows), indent=1) + "\n")
    (HERE / "normalization_2x4.json").write_text(json.dumps(normalization_fixture(), indent=1) + "\n")


if __name__ == "__main__":
    main()
