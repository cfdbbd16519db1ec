#!/usr/bin/env python3
"""Generates data/labeled_pairs.jsonl: (query, phrase, label) rows.

Each challenge concept has paraphrases that state the same function; the
first five double as queries. Pairs of paraphrases are relevant; reversals of it (irrelevant) and near misses that share a
verb or an object but not the function (irrelevant). Other concepts' phrases
are sampled as unrelated negatives. Output is deterministic for a seed.
"""

import argparse
import json
import random

CONCEPTS = [
    ("reduce water loss",
     ["reduce water loss", "decrease water loss", "limit water loss", "minimize water loss",
      "prevent dehydration", "retain water", "conserve water", "lower evaporation",
      "reduce evaporation", "trap moisture", "stay moist", "reduce loss of moisture"],
     ["increase water loss", "promote evaporation", "lose water"],
     ["measure water loss", "reduce weight", "absorb water"]),
    ("collect water from humid air",
     ["collect water from air", "collect fog", "catch fog droplets", "harvest water from fog",
      "capture moisture from air", "condense water from air", "gather water droplets",
      "collect water", "collect dew"],
     ["release water into air", "repel water droplets"],
     ["collect pollen", "filter air", "collect food"]),
    ("prevent sinking",
     ["avoid sinking", "prevent sinking", "stay afloat", "keep buoyant", "increase buoyancy",
      "float on water", "reduce density", "maintain buoyancy", "resist sinking"],
     ["promote sinking", "increase density", "decrease buoyancy"],
     ["prevent drowning in mud", "sink prey", "measure density"]),
    ("reduce drag",
     ["reduce drag", "decrease drag", "minimize drag", "reduce turbulence",
      "streamline the body", "lower hydrodynamic resistance", "reduce friction in water",
      "decrease turbulence"],
     ["increase drag", "create turbulence", "increase friction"],
     ["reduce weight", "drag prey", "measure turbulence"]),
    ("increase adhesion",
     ["increase adhesion", "enhance adhesion", "improve grip", "stick to surfaces",
      "adhere to walls", "strengthen attachment", "fortify adhesion", "cling to surfaces"],
     ["reduce adhesion", "release grip", "repel particles"],
     ["increase speed", "clean surfaces", "measure adhesion"]),
    ("regulate temperature",
     ["regulate temperature", "control body temperature", "maintain temperature",
      "cool the body", "dissipate heat", "keep cool", "stabilize temperature",
      "regulate heat"],
     ["raise temperature uncontrollably", "trap excess heat"],
     ["measure temperature", "regulate growth", "store heat energy"]),
    ("detect electric fields",
     ["detect electric fields", "sense electric fields", "detect electricity",
      "perceive electric signals", "sense electricity", "detect bioelectric signals",
      "feel electric currents"],
     ["emit electricity", "block electric signals"],
     ["detect odors", "generate magnetic fields", "conduct electricity"]),
    ("sense light",
     ["sense light", "detect light", "perceive light", "see in dim light",
      "capture photons", "detect brightness", "respond to light"],
     ["block light", "emit light"],
     ["sense smell", "reflect sound", "absorb heat"]),
    ("protect against predators",
     ["protect against predators", "defend against predators", "deter predators",
      "avoid predation", "repel attackers", "escape predators", "hide from predators",
      "provide protection"],
     ["attract predators", "expose to predators"],
     ["hunt prey", "protect eggs from cold", "attract mates"]),
    ("absorb impact",
     ["absorb impact", "cushion the impact", "dampen shock", "absorb shock",
      "reduce impact force", "dissipate impact energy", "withstand collisions"],
     ["amplify impact", "transmit shock"],
     ["absorb nutrients", "absorb water", "measure force"]),
    ("reduce noise",
     ["reduce noise", "dampen sound", "fly silently", "muffle sound", "suppress noise",
      "minimize noise", "decrease noise", "absorb sound"],
     ["increase noise", "amplify sound"],
     ["reduce weight", "produce song", "detect sound"]),
    ("improve airflow",
     ["improve airflow", "enhance ventilation", "circulate air", "guide airflow",
      "enhance the circulation of air", "ventilate the nest", "increase air circulation"],
     ["block airflow", "reduce ventilation"],
     ["improve digestion", "filter water", "trap air bubbles"]),
    ("store energy",
     ["store energy", "conserve energy", "save energy", "accumulate energy reserves",
      "store fat", "store elastic energy", "reduce energy expenditure"],
     ["waste energy", "release stored energy"],
     ["store seeds", "measure energy", "generate heat"]),
    ("clean surfaces",
     ["clean surfaces", "remove dirt", "self-clean", "shed dirt particles",
      "keep surfaces clean", "repel dirt", "wash away dust"],
     ["accumulate dirt", "attract dust"],
     ["clean water", "paint surfaces", "measure dirt"]),
    ("move through sand",
     ["move through sand", "burrow in sand", "swim through sand", "dig through sand",
      "travel across sand", "tunnel in soil"],
     ["sink in sand", "get stuck in sand"],
     ["move through water", "store sand", "filter sand"]),
    ("resist compression",
     ["resist compression", "withstand pressure", "resist crushing", "bear heavy loads",
      "provide structural support", "withstand deep water pressure"],
     ["collapse under pressure", "compress easily"],
     ["resist infection", "release pressure", "measure pressure"]),
    ("provide flexibility",
     ["provide flexibility", "allow bending", "increase flexibility", "bend without breaking",
      "give flexibility", "permit movement of plates"],
     ["reduce flexibility", "stiffen the body"],
     ["provide food", "provide shade", "bend light"]),
    ("reduce pressure change",
     ["reduce pressure change", "reduce the change in air pressure", "equalize pressure",
      "buffer pressure changes", "stabilize pressure", "reduce pressure"],
     ["increase pressure", "amplify pressure changes"],
     ["reduce weight", "measure air pressure", "change color"]),
    ("attract pollinators",
     ["attract pollinators", "lure insects", "attract bees", "draw pollinators",
      "signal to pollinators", "attract insects"],
     ["repel pollinators", "deter insects"],
     ["attract predators", "feed pollinators", "trap insects"]),
    ("camouflage in environment",
     ["camouflage in environment", "blend into surroundings", "hide from view",
      "change color to match background", "avoid detection", "mimic leaves"],
     ["stand out from background", "display bright colors"],
     ["change shape", "detect colors", "hide food"]),
]

ALL_RELEVANT = [p for c in CONCEPTS for p in c[1]]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20230815)
    ap.add_argument("--n", type=int, default=1005)
    ap.add_argument("--relevant-fraction", type=float, default=0.63)
    ap.add_argument("--out", default="data/labeled_pairs.jsonl")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    n_rel = round(args.n * args.relevant_fraction)
    n_irr = args.n - n_rel
    relevant, irrelevant = [], []
    for _, para, reverse, near in CONCEPTS:
        others = [p for p in ALL_RELEVANT if p not in para]
        for q in para[:5]:
            relevant += [(q, p) for p in para if p != q]
            irrelevant += [(q, p) for p in reverse + near]
            irrelevant += [(q, p) for p in rng.sample(others, 6)]
    if n_rel > len(relevant) or n_irr > len(irrelevant):
        raise SystemExit("not enough distinct pairs for the requested size")

    rows = [{"query": q, "phrase": p, "label": 1} for q, p in rng.sample(relevant, n_rel)]
    rows += [{"query": q, "phrase": p, "label": 0} for q, p in rng.sample(irrelevant, n_irr)]
    rng.shuffle(rows)
    with open(args.out, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
    print(f"{len(rows)} pairs, {sum(r['label'] for r in rows)} relevant -> {args.out}")


if __name__ == "__main__":
    main()
