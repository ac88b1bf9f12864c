"""Checks the j1 command line: outputs, exit codes, JSON schemas, determinism, cache handling.

usage: cli_contract.py <j1 binary> <repo root>
"""

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

J1 = sys.argv[1]
ROOT = Path(sys.argv[2])
SCHEMA = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (ROOT / "schema").glob("*.schema.json")}
PRINTED_LEVELS = "27,343,1331,2^9,2^10,2^6*3^3,2^6*7^3,2^6*3^3*5^3*7^3"

failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("JACOBI1_CACHE_DIR", None)
    if env:
        e.update(env)
    return subprocess.run([J1, *args], capture_output=True, text=True, env=e)


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def valid(doc, schema):
    try:
        jsonschema.validate(doc, SCHEMA[schema])
        return True
    except jsonschema.ValidationError as err:
        print(err)
        return False


def dim_of(m, N, *extra):
    r = run("dim", "--m", str(m), "--N", str(N), *extra)
    check(r.returncode == 0, f"dim {m} {N} exit {r.returncode}: {r.stderr}")
    doc = json.loads(r.stdout)
    check(valid(doc, "dim_result"), f"dim {m} {N} schema")
    return doc


# named values
for m, N, want in [(9, 9, 1), (1, 7, 0), (2, 343, 1), (9, 36, 2), (3, "2^9", 1)]:
    check(dim_of(m, N)["dim"] == want, f"dim {m} {N}")
check(dim_of(4, 12, "--method", "bruteforce")["method"] == "bruteforce", "method echo")
check(dim_of(3, 512, "--method", "thm71")["method"] == "theorem71", "thm71 alias")

# exit codes
check(run("dim", "--m", "3", "--N", "3", "--method", "thm71").returncode == 3, "hypothesis refusal exits 3")
check(run("dim", "--m", "12", "--N", "36", "--method", "catalog").returncode == 3, "catalog gap exits 3")
check(run("dim", "--m", "12", "--N", "2^20", "--method", "bruteforce", "--guard", "16").returncode == 3, "guard exits 3")
for bad in (["dim", "--m", "x", "--N", "3"], ["dim", "--m", "3"], ["table", "--m-max", "2", "--levels", ""],
            ["dim", "--m", "3", "--N", "3", "--format", "xml"], ["qexp", "--id", "nope"], ["frobnicate"],
            ["vanish", "--N", "9", "--mode", "indexp"], ["basis", "--spec", "p=4"], ["dim", "--m", "0", "--N", "3"]):
    check(run(*bad).returncode == 2, f"usage error exits 2: {bad}")

# printed table, cell for cell
r = run("table", "--m-max", "50", "--levels", PRINTED_LEVELS, "--format", "csv")
check(r.returncode == 0 and r.stdout == (ROOT / "tests/data/printed_table.csv").read_text(), "printed table csv")
r = run("table", "--m-max", "1", "--levels", "1,2,3,5,7,8,16", "--format", "csv")
check(r.stdout.splitlines()[1] == "1,0,0,0,0,0,0,0", "index 1 row of zeros")

# worker count does not change the output
a = run("table", "--m-max", "12", "--levels", "4,9,27,32", "--fill", "--threads", "1")
b = run("table", "--m-max", "12", "--levels", "4,9,27,32", "--fill", "--threads", "8")
check(a.returncode == 0 and a.stdout == b.stdout, "table deterministic across thread counts")
doc = json.loads(a.stdout)
check(valid(doc, "table"), "table schema")
check(doc["rows"][8]["dims"][1:3] == [1, 2], "filled J(9,9) and J(9,27)")
tight = json.loads(run("table", "--m-max", "12", "--levels", "2^12", "--fill", "--guard", "8").stdout)
check(any(row["dims"][0] is None for row in tight["rows"]), "guard leaves blanks")

# vanishing
for mode, extra, key, want in [("all", [], "vanishes", False), ("coprime", [], "vanishes", True),
                               ("index2", [], "nonzero", False), ("indexp", ["--p", "3"], "nonzero", False)]:
    r = run("vanish", "--N", "36", "--mode", mode, *extra)
    doc = json.loads(r.stdout)
    check(r.returncode == 0 and valid(doc, "vanish") and doc[key] == want, f"vanish 36 {mode}")
check(json.loads(run("vanish", "--N", "2000", "--mode", "all").stdout)["vanishes"], "vanish 16*125")
check(json.loads(run("vanish", "--N", "343", "--mode", "index2").stdout)["dim_one"], "index 2 at 7^3")

# q-expansions
r = run("qexp", "--id", "J12_36", "--prec", "4")
doc = json.loads(r.stdout)
check(valid(doc, "qexp") and doc["series"]["terms"][0]["q"] == "1", "J12_36 starts at q^1")
for gid in ["J8_32", "J3ab_9(1,2)", "Jp2_p2(7)", "J2_p3(7)"]:
    r = run("qexp", "--id", gid, "--prec", "3")
    check(r.returncode == 0 and valid(json.loads(r.stdout), "qexp"), f"qexp {gid}")
check(run("qexp", "--id", "J12_36", "--prec", "4", "--format", "text").stdout.endswith("order\t4\n"), "qexp text")

# invariant bases
spec = "p=3 k1=2 a1=2 k2=1 a2=2 e1=-1 e2=1 k3=2"
closed = json.loads(run("basis", "--spec", spec).stdout)
proj = json.loads(run("basis", "--spec", spec, "--source", "projector").stdout)
check(valid(closed, "basis") and valid(proj, "basis"), "basis schema")
check(closed["dim"] == proj["dim"] == 1, "closed and projector bases have the same size")

# persistent cache
with tempfile.TemporaryDirectory() as tmp:
    cache = Path(tmp) / "local_dims.txt"
    first = run("dim", "--m", "6", "--N", "24", "--method", "bruteforce", "--cache-dir", tmp)
    lines = cache.read_text().splitlines()
    check(lines[0] == "jacobi1-local-dims v1" and len(lines) > 1, "cache written")
    again = run("dim", "--m", "6", "--N", "24", "--method", "bruteforce", env={"JACOBI1_CACHE_DIR": tmp})
    check(again.stdout == first.stdout and cache.read_text().splitlines() == lines, "cache reused, nothing appended")
    # flip one dimension; the checksum no longer matches, so the whole file is distrusted
    body = lines[1].split(" ")
    body[9] = str(int(body[9]) + 1)
    cache.write_text("\n".join([lines[0], " ".join(body)] + lines[2:]) + "\n")
    bad = run("dim", "--m", "6", "--N", "24", "--method", "bruteforce", "--cache-dir", tmp)
    check(bad.returncode == 0 and bad.stdout == first.stdout, "corrupt cache ignored")
    check("corrupt" in bad.stderr, "corrupt cache warned about")
    check((Path(tmp) / "local_dims.txt.corrupt").exists(), "corrupt cache moved aside")
    check(cache.read_text().splitlines()[0] == "jacobi1-local-dims v1", "fresh cache rewritten")

print("cli contract:", "ok" if not failures else f"{len(failures)} failures")
sys.exit(1 if failures else 0)
