#!/usr/bin/env python3
"""End-to-end checks of the sidebp command line: outputs, exit codes,
schemas and run manifests."""

import argparse
import csv
import hashlib
import io
import json
import os
import shutil
import subprocess
import sys
import traceback
from pathlib import Path

import jsonschema

ARGS = None
SCHEMAS = {}


def run(*argv, expect=0, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("SIDEBP_OUTPUT_DIR", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([ARGS.binary, *map(str, argv)], capture_output=True, text=True,
                          env=full_env, cwd=cwd or ARGS.workdir, timeout=300)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(f"{argv}: exit {proc.returncode}, expected {expect}\n"
                             f"stdout: {proc.stdout[:2000]}\nstderr: {proc.stderr[:2000]}")
    return proc


def validate(name, doc):
    jsonschema.validate(doc, SCHEMAS[name])


def load_manifest(path):
    doc = json.loads(Path(path).read_text())
    validate("manifest", doc)
    return doc


def sha256(data):
    return hashlib.sha256(data).hexdigest()


def work(name):
    return Path(ARGS.workdir) / name


# ---------------------------------------------------------------------------


def test_version():
    proc = run("--version")
    assert proc.stdout.strip() and proc.stdout.strip()[0].isdigit(), proc.stdout


def test_density_g_closed_form():
    proc = run("density", "g", "--p", "0.5", "--lambda", "0.8", "--preset", "noisy:0.85", "--alpha", "0")
    assert abs(float(proc.stdout) - 1.568) < 1e-9, proc.stdout
    manifest = load_manifest(work("sidebp-density-g.manifest.json"))
    assert manifest["command"] == "density g"
    assert manifest["seed"] is None
    assert manifest["parameters"]["alpha"] == "0"
    assert manifest["parameters"]["nodes"] == "201"
    assert manifest["outputs"] == [{"path": "-", "sha256": sha256(proc.stdout.encode())}]


def test_generate_is_deterministic_and_recorded():
    a, b, c = work("gen_a.graph"), work("gen_b.graph"), work("gen_c.graph")
    common = ["generate", "--n", "2000", "--p", "0.4", "--lambda", "0.8", "--eps", "0.3",
              "--preset", "noisy:0.8", "--threads", "1"]
    run(*common, "--seed", "5", "--out", a)
    run(*common, "--seed", "5", "--out", b)
    run(*common, "--seed", "6", "--out", c)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()
    manifest = load_manifest(str(a) + ".manifest.json")
    assert manifest["seed"] == 5
    assert manifest["outputs"] == [{"path": a.name, "sha256": sha256(a.read_bytes())}]
    resolved = manifest["parameters"]["resolved"]
    assert abs(resolved["d"] - 0.8 / 0.09) < 1e-9 and resolved["n"] == 2000
    header = a.read_text().split("\n", 1)[0].split()
    assert header[0] == "2000" and header[2] == "2"


def test_bp_output_and_flags():
    graph = work("bp.graph")
    run("generate", "--n", "3000", "--p", "0.5", "--lambda", "0.8", "--eps", "0.2",
        "--preset", "noisy:0.85", "--seed", "1", "--out", graph)
    labels = work("labels.json")
    labels.write_text(json.dumps({"labels": ["a", "b"], "mu": [0.85, 0.15], "nu": [0.15, 0.85]}))
    validate("label_model", json.loads(labels.read_text()))
    out = work("bp.json")
    run("bp", "--graph", graph, "--labels", labels, "--t", "3", "--p", "0.5", "--lambda", "0.8",
        "--eps", "0.2", "--out", out)
    doc = json.loads(out.read_text())
    validate("bp", doc)
    assert doc["rounds"] == 3 and len(doc["estimates"]) == 3000
    assert doc["success"]["estimate"] > 0.6
    # At p = 1/2 the prior term is zero, so dropping it changes nothing.
    out2 = work("bp_noprior.json")
    run("bp", "--graph", graph, "--labels", labels, "--t", "3", "--p", "0.5", "--lambda", "0.8",
        "--eps", "0.2", "--no-prior-in-decision", "--out", out2)
    assert json.loads(out2.read_text())["estimates"] == doc["estimates"]
    manifest = load_manifest(str(out2) + ".manifest.json")
    assert manifest["parameters"]["no-prior-in-decision"] is True
    # Label model with the wrong alphabet size.
    bad = work("labels3.json")
    bad.write_text(json.dumps({"labels": ["a", "b", "c"], "mu": [0.5, 0.25, 0.25], "nu": [0.25, 0.25, 0.5]}))
    proc = run("bp", "--graph", graph, "--labels", bad, "--p", "0.5", "--eps", "0.2", expect=2)
    assert "label" in proc.stderr


def test_density_commands():
    proc = run("density", "evolve", "--p", "0.05", "--lambda", "0.8", "--preset", "noisy:0.5", "--from", "opt")
    evolve = json.loads(proc.stdout)
    validate("density_evolve", evolve)
    assert evolve["converged"] and abs(evolve["alpha0"] - 0.8 / 0.0475) < 1e-12
    proc = run("density", "fixed-points", "--p", "0.05", "--lambda", "0.8", "--preset", "noisy:0.5")
    fp = json.loads(proc.stdout)
    validate("fixed_points", fp)
    assert [pt["stability"] for pt in fp["points"]] == ["stable", "unstable", "stable"]
    assert abs(fp["points"][-1]["alpha"] - evolve["limit"]) < 1e-8
    proc = run("density", "sweep", "--var", "lambda", "--from", "0.2", "--to", "1.6", "--steps", "8",
               "--p", "0.3", "--preset", "noisy:0.7")
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    assert list(rows[0]) == ["lambda", "alpha_bp", "alpha_opt", "success_bp", "success_opt", "fixed_point_count"]
    assert len(rows) == 8


def test_eval_commands():
    proc = run("eval", "tree-moments", "--p", "0.5", "--lambda", "0.8", "--eps", "0.05",
               "--preset", "noisy:0.85", "--depth", "1", "--trials", "20000", "--seed", "3", "--threads", "2")
    tm = json.loads(proc.stdout)
    validate("tree_moments", tm)
    assert abs(tm["alpha"] - 1.568) < 1e-9
    proc = run("eval", "end-to-end", "--n", "5000", "--graphs", "2", "--t", "2", "--preset", "noisy:0.85",
               "--seed", "4")
    ee = json.loads(proc.stdout)
    validate("end_to_end", ee)
    assert len(ee["trials"]) == 2 and abs(ee["dtv"] - 0.7) < 1e-12
    proc = run("eval", "example1", "--n", "2000", "--graphs", "2", "--detector", "seeded-bp", "--seed", "2")
    validate("example1", json.loads(proc.stdout))
    proc = run("eval", "figure", "--kind", "G_curve", "--p", "0.5", "--lambda", "0.8",
               "--preset", "noisy:0.85", "--from", "0", "--to", "3.2", "--steps", "5")
    rows = list(csv.reader(io.StringIO(proc.stdout)))
    assert rows[0] == ["alpha", "G", "G_minus_alpha"]
    assert float(rows[1][0]) == 0.0 and abs(float(rows[1][1]) - 1.568) < 1e-9


def test_seeded_commands_are_reproducible():
    argv = ["eval", "end-to-end", "--n", "3000", "--graphs", "2", "--t", "2", "--seed", "8"]
    one = run(*argv, "--threads", "1").stdout
    two = run(*argv, "--threads", "2").stdout
    assert one == two


def test_check_failure_exit_code():
    out = work("ee_check.json")
    proc = run("eval", "end-to-end", "--n", "3000", "--graphs", "1", "--t", "2", "--seed", "1", "--preset", "noisy:0.85",
               "--check", "--tolerance", "0", "--out", out, expect=3)
    assert "check failed" in proc.stderr
    validate("end_to_end", json.loads(out.read_text()))
    load_manifest(str(out) + ".manifest.json")


def test_validation_errors():
    proc = run("eval", "example1", "--a", "9", "--b", "1", expect=2)
    assert "20" in proc.stderr and "64" in proc.stderr and "40" in proc.stderr
    run("density", "g", "--p", "1.5", "--alpha", "0", expect=2)
    run("density", "g", "--alpha", "-1", expect=2)
    run("density", "g", "--p", "0.5", expect=2)  # missing --alpha
    proc = run("density", "g", "--alpha", "0", "--bogus", expect=2)
    assert "bogus" in proc.stderr
    run("generate", "--n", "10", "--lambda", "0.8", "--eps", "0.01", expect=2)  # probabilities above 1
    run("bp", "--graph", work("does_not_exist.graph"), expect=2)
    run("density", "g", "--alpha", "0", "--preset", "noisy:1.5", expect=2)
    run(expect=2)


def test_learn_commands():
    graph = work("learn.graph")
    run("generate", "--n", "4000", "--preset", "noisy:0.8", "--seed", "3", "--out", graph)
    proc = run("learn", "estimate", "--graph", graph)
    est = json.loads(proc.stdout)
    validate("learn_estimate", est)
    assert abs(est["mu_hat"][0] - 0.8) < 0.03
    spins = work("learn.spins")
    spins.write_text("1\n" * 4000)
    run("learn", "estimate", "--graph", graph, "--spins", spins, expect=2)  # one class empty

    prefix = work("split_out") / "part"
    proc = run("learn", "split", "--graph", graph, "--out-prefix", prefix)
    split = json.loads(proc.stdout)
    validate("learn_split", split)
    assert [b["label"] for b in split["blocks"]] == [0, 1]
    assert sum(b["vertices"] for b in split["blocks"]) == 4000
    manifest = load_manifest(work("split_out") / "part.manifest.json")
    files = [o for o in manifest["outputs"] if o["path"] != "-"]
    assert len(files) == 2
    for o in files:
        assert sha256((work("split_out") / o["path"]).read_bytes()) == o["sha256"]


def test_manifest_output_dir_and_config():
    target = work("manifests")
    shutil.rmtree(target, ignore_errors=True)
    cfg = work("g.toml")
    cfg.write_text('[density.g]\nalpha = 0\np = 0.5\nlambda = 0.8\npreset = "noisy:0.85"\n')
    proc = run("--config", cfg, "density", "g", env={"SIDEBP_OUTPUT_DIR": str(target)})
    assert abs(float(proc.stdout) - 1.568) < 1e-9
    manifest = load_manifest(target / "sidebp-density-g.manifest.json")
    assert manifest["parameters"]["preset"] == "noisy:0.85"


def main():
    global ARGS
    parser = argparse.ArgumentParser()
    parser.add_argument("--binary", required=True)
    parser.add_argument("--schemas", required=True)
    parser.add_argument("--workdir", required=True)
    ARGS = parser.parse_args()
    ARGS.binary = str(Path(ARGS.binary).resolve())
    shutil.rmtree(ARGS.workdir, ignore_errors=True)
    os.makedirs(ARGS.workdir)
    for path in Path(ARGS.schemas).glob("*.schema.json"):
        schema = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        SCHEMAS[path.name.removesuffix(".schema.json")] = schema

    tests = [(name, fn) for name, fn in globals().items() if name.startswith("test_") and callable(fn)]
    failures = 0
    for name, fn in tests:
        try:
            fn()
            print(f"PASS {name}")
        except Exception:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}")
            traceback.print_exc()
    print(f"{len(tests) - failures}/{len(tests)} CLI tests passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
