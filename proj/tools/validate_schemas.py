#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Run representative apfree commands and validate their JSON against schemas/."""

import csv
import io
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

BASE = "https://apfree.local/schemas/"


def load_registry(schema_dir):
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(doc)
        schemas[path.name] = doc
    registry = Registry().with_resources(
        (BASE + name, Resource.from_contents(doc)) for name, doc in schemas.items())
    return schemas, registry


# (schema file, argv); outputs land in the temp dir
CASES = [
    ("constants.schema.json", ["constants", "--q", "3,4,5,7,9"]),
    ("bounds.schema.json", ["bounds", "eg", "--q", "3", "--n", "10"]),
    ("bounds.schema.json", ["bounds", "r3", "--N", "1000000", "--c", "1"]),
    ("bounds.schema.json", ["bounds", "container", "--q", "5", "--n", "20", "--s", "0.01", "--beta", "0.1",
                            "--t", "2"]),
    ("bounds.schema.json", ["bounds", "probability", "--q", "5", "--n", "20", "--t", "0.01", "--beta", "0.1",
                            "--p-exp", "-0.4"]),
    ("bounds.schema.json", ["bounds", "varnavides", "--N", "1000", "--eta", "0.5"]),
    ("bounds.schema.json", ["bounds", "hcheck"]),
    ("bounds.schema.json", ["bounds", "exponents", "--q", "5", "--t", "2", "--beta", "0.1", "--eps", "0.1"]),
    ("construct.schema.json", ["construct", "--out", "thm11.gs", "thm11", "--q", "5", "--n", "9", "--seed", "1"]),
    ("construct.schema.json", ["construct", "--out", "low.gs", "lowenergy", "--q", "3", "--n", "6", "--eps", "0.5",
                               "--seed", "1"]),
    ("construct.schema.json", ["construct", "--out", "ann.gs", "annulus", "--in", "interval:10000", "--seed", "1"]),
    ("construct.schema.json", ["construct", "--out", "d6.gs", "digits6", "--N", "1000"]),
    ("construct.schema.json", ["construct", "--out", "rnd.gs", "random", "--in", "interval:200", "--p", "0.3",
                               "--seed", "2"]),
    ("construct.schema.json", ["construct", "--out", "rm.gs", "remove", "--in", "rnd.gs", "--k", "4"]),
    ("analyze.schema.json", ["analyze", "--in", "thm11.gs", "counts"]),
    ("analyze.schema.json", ["analyze", "--in", "interval:40", "hypergraph", "--tau", "0.25", "0.5", "0.75"]),
    ("analyze.schema.json", ["analyze", "--in", "ann.gs", "energy"]),
    ("analyze.schema.json", ["analyze", "--in", "interval:50", "supersat"]),
    ("analyze.schema.json", ["analyze", "--in", "f3^3:full", "supersat"]),
    ("extremal.schema.json", ["extremal", "--in", "interval:12", "--k", "3", "--mode", "exact",
                              "--witness", "w.gs"]),
    ("extremal.schema.json", ["extremal", "--in", "interval:12", "--k", "4", "--mode", "oracle"]),
    ("extremal.schema.json", ["extremal", "--in", "interval:30", "--k", "3", "--mode", "heuristic", "--seed", "3"]),
    ("supersat.schema.json", ["supersat", "--seed", "1", "--trials", "3", "fqn", "--q", "3", "--n", "5",
                              "--s", "0.01"]),
    ("supersat.schema.json", ["supersat", "--seed", "1", "--trials", "2", "varnavides", "--N", "4000",
                              "--eta", "0.5"]),
]

# frozen CSV headers
CSV_CASES = [
    ("q,y_star,g_star,c_q,C_q,thm11_exponent", ["constants", "--q", "3,5"]),
    ("q,n,s,trial,trial_seed,set_size,measured_count,predicted_lower_bound,ratio,pass",
     ["supersat", "--seed", "1", "--trials", "2", "fqn", "--q", "3", "--n", "4", "--s", "0"]),
    ("N,eta,trial,trial_seed,set_size,measured_count,predicted_lower_bound,ratio,pass",
     ["supersat", "--seed", "1", "--trials", "2", "varnavides", "--N", "4000", "--eta", "0.5"]),
]


# documents each schema must reject
NEGATIVE = [
    ("constants.schema.json", {"command": "constants", "rows": [{"q": 3}]}),
    ("construct.schema.json", {"command": "construct x", "name": "x"}),
    ("extremal.schema.json", {"command": "extremal", "ambient": {"kind": "interval", "N": 3}, "k": 5, "mode": "exact",
                              "input_size": 3, "size": 2, "optimal": True, "budget_exhausted": False,
                              "nodes_explored": 1, "witness": [1, 2]}),
    ("analyze.schema.json", {"command": "analyze counts", "ambient": {"kind": "interval", "N": 3}, "size": 3,
                             "counts": [], "extra": 1}),
    ("bounds.schema.json", {"command": "bounds r3", "lower": {}}),
    ("manifest.schema.json", {"schema": "apfree-manifest/2"}),
]


def run(binary, argv, cwd):
    proc = subprocess.run([binary, *argv], cwd=cwd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(argv)}: exit {proc.returncode}: {proc.stderr.strip()}")
    return proc.stdout


def main():
    if len(sys.argv) != 3:
        print("usage: validate_schemas.py <apfree binary> <schema dir>", file=sys.stderr)
        return 2
    binary = str(pathlib.Path(sys.argv[1]).resolve())
    schemas, registry = load_registry(pathlib.Path(sys.argv[2]))

    def validate(name, doc):
        validator = jsonschema.Draft202012Validator(schemas[name], registry=registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        return [f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors]

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, (name, argv) in enumerate(CASES):
            manifest = f"m{i}.json"
            try:
                out = run(binary, ["--manifest", manifest, *argv], tmp)
                problems = validate(name, json.loads(out))
                problems += [f"manifest: {p}" for p in
                             validate("manifest.schema.json", json.loads((pathlib.Path(tmp) / manifest).read_text()))]
                if argv[0] in ("construct", "supersat"):
                    replay = json.loads(run(binary, ["replay", "--from", manifest], tmp))
                    problems += [f"replay: {p}" for p in validate("replay.schema.json", replay)]
                    if not replay["match"]:
                        problems.append("replay digests differ")
            except (RuntimeError, json.JSONDecodeError) as exc:
                problems = [str(exc)]
            status = "ok  " if not problems else "FAIL"
            print(f"{status} {name:24} {' '.join(argv)}")
            for p in problems:
                print(f"     {p}")
            failures += bool(problems)

        for header, argv in CSV_CASES:
            try:
                out = run(binary, ["--format", "csv", *argv], tmp)
                rows = list(csv.reader(io.StringIO(out)))
                got = ",".join(rows[0])
                problems = [] if got == header else [f"header {got!r} != {header!r}"]
                width = len(header.split(","))
                problems += [f"row {j} has {len(r)} fields" for j, r in enumerate(rows[1:], 1) if len(r) != width]
            except (RuntimeError, IndexError) as exc:
                problems = [str(exc)]
            print(f"{'ok  ' if not problems else 'FAIL'} csv                      {' '.join(argv)}")
            for p in problems:
                print(f"     {p}")
            failures += bool(problems)

    for name, doc in NEGATIVE:
        accepted = not validate(name, doc)
        print(f"{'FAIL' if accepted else 'ok  '} reject {name}")
        failures += accepted

    total = len(CASES) + len(CSV_CASES) + len(NEGATIVE)
    print(f"{total - failures}/{total} schema checks passed")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
