#!/usr/bin/env python3
"""Independent metric computation for an ASCII evaluation corpus.

Re-implements the lexical classifier (bag of words, 1 + ln tf, cosine
against "label description"), the per-class maximum score, coverage at
tau, Pearson r, count agreement and section accuracy, then prints the
metrics JSON the evaluate command is expected to produce.

    corpus_metrics.py CORPUS.jsonl [--tau 0.5]
"""

import argparse
import json
import math
import re
import statistics
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
TEMPLATE = json.loads((ROOT / "data" / "default_template.json").read_text())["entries"]
TOKEN = re.compile(r"[a-z0-9]+")


def vector(text):
    return {t: 1 + math.log(c) for t, c in Counter(TOKEN.findall(text.lower())).items()}


def cosine(a, b):
    if not a or not b:
        return 0.0
    dot = sum(v * b.get(t, 0.0) for t, v in a.items())
    return dot / math.sqrt(sum(v * v for v in a.values()) * sum(v * v for v in b.values()))


REFERENCES = [vector(e["label"] + " " + " ".join(e["description"].split())) for e in TEMPLATE]


def classify(text):
    q = vector(text)
    return [cosine(q, r) for r in REFERENCES]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("corpus")
    parser.add_argument("--tau", type=float, default=0.5)
    args = parser.parse_args()

    records = [json.loads(l) for l in Path(args.corpus).read_text().splitlines() if l.strip()]
    records.sort(key=lambda r: r["repo_id"])
    scores, golds, counts, hits, total = [], [], [], 0, 0
    for r in records:
        maxima = [0.0] * len(TEMPLATE)
        for s in r["sections"]:
            text = " ".join(p for p in (s.get("parent") or "", s["header"], s.get("content", "")) if p)
            vec = classify(text)
            best = max(range(len(vec)), key=lambda i: (vec[i], -i))
            if "gold_label" in s:
                total += 1
                hits += TEMPLATE[best]["label"] == s["gold_label"]
            maxima = [max(m, v) for m, v in zip(maxima, vec)]
        scores.append(sum(maxima) / len(TEMPLATE))
        golds.append(r["gold_count"])
        counts.append(sum(m >= args.tau for m in maxima))

    print(json.dumps({
        "correlation": statistics.correlation(scores, golds),
        "agreement": sum(p == g for p, g in zip(counts, golds)) / len(records),
        "accuracy": hits / total if total else None,
        "n": len(records),
        "flags": [],
    }))


if __name__ == "__main__":
    main()
