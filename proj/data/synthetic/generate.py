#!/usr/bin/env python3
"""Regenerates the bundled synthetic corpora.

tec_synthetic.jsonl   2041 single-label instances whose emotion x component
                      counts equal the published TEC co-occurrence table.
reman_synthetic.jsonl 1000 multi-label instances whose emotion x component
                      counts and per-component totals equal the published
                      REMAN table.
expected_stats.tsv    the target counts, for tests.

Texts are built from emotion cue words, component cue words and filler so
that the classifiers have something to learn. Output is deterministic.
"""
import json
import random
from pathlib import Path

COMPONENTS = ["cognitive_appraisal", "neurophysiological_symptoms", "action_tendencies",
              "motor_expressions", "subjective_feelings"]

TEC = {  # emotion: (counts per component, total)
    "anger": ([127, 8, 30, 20, 49], 169),
    "disgust": ([65, 11, 6, 17, 19], 78),
    "joy": ([606, 59, 176, 95, 233], 848),
    "sadness": ([323, 13, 58, 53, 142], 373),
    "fear": ([196, 9, 37, 27, 130], 266),
    "surprise": ([219, 2, 55, 55, 83], 307),
}
REMAN = {
    "anger": ([66, 7, 40, 61, 25], 98),
    "anticipation": ([69, 6, 50, 63, 19], 117),
    "disgust": ([81, 5, 21, 33, 16], 94),
    "fear": ([96, 33, 35, 70, 34], 143),
    "joy": ([121, 11, 28, 117, 66], 213),
    "neutral": ([39, 0, 13, 22, 3], 116),
    "other": ([64, 11, 21, 53, 21], 113),
    "sadness": ([94, 19, 22, 66, 42], 136),
    "surprise": ([103, 11, 21, 83, 22], 139),
    "trust": ([94, 2, 17, 34, 27], 115),
}
REMAN_TOTALS = [610, 76, 190, 440, 174]
REMAN_SIZE = 1000

EMOTION_CUES = {
    "anger": ["furious", "rage", "mad", "livid"],
    "anticipation": ["soon", "await", "tomorrow", "eager"],
    "disgust": ["gross", "vile", "yuck", "nasty"],
    "fear": ["terrified", "dread", "panic", "scary"],
    "joy": ["wonderful", "great", "delight", "yay"],
    "neutral": ["table", "street", "paper", "window"],
    "other": ["strange", "odd", "peculiar", "whatever"],
    "sadness": ["gloomy", "tearful", "heartbroken", "grief"],
    "surprise": ["wow", "unexpected", "suddenly", "whoa"],
    "trust": ["rely", "faithful", "loyal", "depend"],
}
COMPONENT_CUES = [
    ["think", "because", "deserve", "realize", "unfair"],
    ["heart", "sweat", "tremble", "breath", "dizzy"],
    ["run", "escape", "fight", "hug", "grab"],
    ["smile", "frown", "laugh", "sigh", "shout"],
    ["feel", "lonely", "nervous", "proud", "upset"],
]
FILLER = ["the", "a", "and", "today", "my", "it", "was", "so", "with", "this", "that",
          "we", "they", "at", "on", "in", "night", "day", "home", "friend"]


def text_for(rng, emotions, cpm):
    words = [rng.choice(FILLER) for _ in range(rng.randint(2, 5))]
    for e in emotions:
        words.append(rng.choice(EMOTION_CUES[e]))
    for c, flag in enumerate(cpm):
        if flag:
            words.append(rng.choice(COMPONENT_CUES[c]))
    rng.shuffle(words)
    return " ".join(words)


def make_tec(rng):
    records = []
    for emotion, (counts, total) in TEC.items():
        columns = []
        for k in counts:
            col = [1] * k + [0] * (total - k)
            rng.shuffle(col)
            columns.append(col)
        for i in range(total):
            records.append((emotion, [columns[c][i] for c in range(5)]))
    rng.shuffle(records)
    out = []
    for n, (emotion, cpm) in enumerate(records):
        out.append({"id": f"tec-{n:04d}", "text": text_for(rng, [emotion], cpm),
                    "emotions": [emotion], "cpm": cpm, "domain": "tec"})
    return out


def reman_labels(rng):
    labels = [["neutral"] for _ in range(REMAN["neutral"][1])]
    pool = [e for e, (_, t) in REMAN.items() if e != "neutral" for _ in range(t)]
    rng.shuffle(pool)
    rest = REMAN_SIZE - len(labels)
    sets = [[pool[i]] for i in range(rest)]
    for e in pool[rest:]:
        while True:
            s = sets[rng.randrange(rest)]
            if e not in s:
                s.append(e)
                break
    return labels + sets


def reman_flags(rng, labels):
    """Per-component 0/1 feasibility program: every emotion row and the
    per-instance total must hit their targets exactly."""
    import numpy as np
    from scipy.optimize import LinearConstraint, milp

    emotions = list(REMAN)
    n = len(labels)
    a = np.zeros((len(emotions) + 1, n))
    for i, ls in enumerate(labels):
        for e in ls:
            a[emotions.index(e), i] = 1
    a[-1, :] = 1
    flags = [[0] * 5 for _ in labels]
    for c in range(5):
        b = np.array([REMAN[e][0][c] for e in emotions] + [REMAN_TOTALS[c]], dtype=float)
        # A random objective picks an arbitrary feasible point reproducibly.
        cost = np.array([rng.random() for _ in range(n)])
        res = milp(cost, constraints=LinearConstraint(a, b, b), integrality=np.ones(n),
                   bounds=(0, 1))
        if res.x is None:
            raise RuntimeError(f"no solution for component {c}")
        for i, v in enumerate(res.x):
            flags[i][c] = int(round(v))
    return flags


def make_reman(rng):
    labels = reman_labels(rng)
    flags = reman_flags(rng, labels)
    order = list(range(REMAN_SIZE))
    rng.shuffle(order)
    out = []
    for n, i in enumerate(order):
        emotions = sorted(labels[i])
        stored = [] if emotions == ["neutral"] else emotions
        out.append({"id": f"reman-{n:04d}", "text": text_for(rng, emotions, flags[i]),
                    "emotions": stored, "cpm": flags[i], "domain": "reman"})
    return out


def main():
    here = Path(__file__).resolve().parent
    rng = random.Random(20190722)
    for name, records in (("tec_synthetic.jsonl", make_tec(rng)),
                          ("reman_synthetic.jsonl", make_reman(rng))):
        with open(here / name, "w") as f:
            for r in records:
                f.write(json.dumps(r, separators=(",", ":")) + "\n")
    with open(here / "expected_stats.tsv", "w") as f:
        f.write("corpus\temotion\t" + "\t".join(COMPONENTS) + "\ttotal\n")
        for corpus, table in (("tec", TEC), ("reman", REMAN)):
            for e, (counts, total) in sorted(table.items()):
                f.write(f"{corpus}\t{e}\t" + "\t".join(map(str, counts)) + f"\t{total}\n")
        f.write("tec\ttotal\t1536\t102\t362\t267\t656\t2041\n")
        f.write("reman\ttotal\t" + "\t".join(map(str, REMAN_TOTALS)) + f"\t{REMAN_SIZE}\n")


if __name__ == "__main__":
    main()
