"""Regenerates the synthetic mini-study: three datasets of generated snippets
with simulated comprehension measurements. Output is deterministic."""

import csv
import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).parent
rng = random.Random(20241016)

LOOP_VAR = {"java": "int", "c": "int", "cpp": "int", "csharp": "int", "javascript": "let"}


def gen_block(depth, budget):
    """Random statement list; returns (lines as (indent, text), cognitive)."""
    stmts, cc = [], 0
    for _ in range(rng.randint(1, 2)):
        if budget <= 0 or depth > 3 or rng.random() < 0.25:
            stmts.append((depth, "x = x + {};".format(rng.randint(1, 9))))
            continue
        kind = rng.choice(["if", "if", "for", "while", "ifelse"])
        cond = "x > {}".format(rng.randint(0, 9))
        if rng.random() < 0.4:
            cond += " && n < {}".format(rng.randint(10, 99))
            cc += 1
        inner, icc = gen_block(depth + 1, budget - 1)
        cc += 1 + (depth - 1) + icc
        if kind in ("if", "ifelse"):
            stmts.append((depth, "if ({}) {{".format(cond)))
            stmts += inner
            if kind == "ifelse":
                other, occ = gen_block(depth + 1, budget - 2)
                cc += 1 + occ
                stmts.append((depth, "} else {"))
                stmts += other
        elif kind == "for":
            stmts.append((depth, "for (LOOPVAR i = 0; i < n; i++) {"))
            stmts += inner
        else:
            stmts.append((depth, "while ({}) {{".format(cond)))
            stmts += inner
            stmts.append((depth + 1, "x = x - 1;"))
        stmts.append((depth, "}"))
        budget -= 1
    return stmts, cc


def render(lang, name, body):
    text = "\n".join("    " * d + s.replace("LOOPVAR", LOOP_VAR[lang]) for d, s in body)
    if lang == "javascript":
        head, tail = "function {}(n, x) {{".format(name), "}"
        inner = text
    elif lang == "java":
        return "class {0} {{\n    int run(int n, int x) {{\n{1}\n        return x;\n    }}\n}}\n".format(
            name, "\n".join("    " + l for l in text.split("\n")))
    elif lang == "csharp":
        return "public class {0}\n{{\n    public int Run(int n, int x)\n    {{\n{1}\n        return x;\n    }}\n}}\n".format(
            name, "\n".join("    " + l for l in text.split("\n")))
    else:
        head, tail = "int {}(int n, int x) {{".format(name), "}"
        inner = text
    return "{}\n{}\n    return x;\n{}\n".format(head, inner, tail)


EXT = {"java": "java", "c": "c", "cpp": "cpp", "csharp": "cs", "javascript": "js"}

DATASETS = [
    # id, language, snippets, participants, variables
    ("ds-alpha", "java", 12, 8, ["time", "correctness", "rating"]),
    ("ds-beta", "c", 10, 6, ["time", "correctness", "physiological"]),
    ("ds-gamma", "javascript", 14, 7, ["time", "correctness", "rating", "physiological"]),
]


def simulate(variable, cc, participant_skill, offset):
    if variable == "time":
        return round(max(5.0, 40 + 6 * cc * participant_skill + 25 * offset + rng.gauss(0, 25)), 1)
    if variable == "correctness":
        p = 1 / (1 + math.exp(-(1.8 - 0.05 * cc + 0.8 * offset + rng.gauss(0, 0.6))))
        return round(p, 3)
    if variable == "rating":
        return max(1, min(5, round(4.0 - 0.08 * cc + 0.8 * offset + rng.gauss(0, 0.9))))
    return round(rng.gauss(0.5, 0.2) + 0.1 * offset, 3)


config = {"datasets": [], "output_dir": "out"}
for ds, lang, count, participants, variables in DATASETS:
    d = ROOT / ds
    (d / "snippets").mkdir(parents=True, exist_ok=True)
    entries, ccs = [], {}
    for i in range(count):
        sid = "s{:02d}".format(i + 1)
        name = "Snippet{:02d}".format(i + 1) if lang in ("java", "csharp") else "snippet{:02d}".format(i + 1)
        body, cc = gen_block(1, rng.randint(1, 5))
        rel = "snippets/{}.{}".format(sid, EXT[lang])
        (d / rel).write_text(render(lang, name, body))
        entries.append({"snippet_id": sid, "path": rel})
        ccs[sid] = cc
    manifest = {"dataset_id": ds, "entries": entries, "correctness_range": [0, 1]}
    if "rating" in variables:
        manifest["invert_rating"] = True
        manifest["rating_scale"] = [1, 5]
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    # snippet difficulty not captured by the metric
    offsets = {sid: {v: rng.gauss(0, 1) for v in variables} for sid in ccs}
    with open(d / "measurements.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["dataset_id", "snippet_id", "participant_id", "variable", "value"])
        for p in range(participants):
            skill = rng.uniform(0.7, 1.3)
            pid = "p{:02d}".format(p + 1)
            for sid, cc in ccs.items():
                for v in variables:
                    w.writerow([ds, sid, pid, v, simulate(v, cc, skill, offsets[sid][v])])
    config["datasets"].append({"manifest": ds + "/manifest.json", "measurements": ds + "/measurements.csv"})

(ROOT / "config.json").write_text(json.dumps(config, indent=2) + "\n")
