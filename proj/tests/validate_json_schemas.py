"""Runs every JSON-emitting command and validates the output against schemas/.

usage: validate_json_schemas.py <spin_stirling binary> <schemas dir> <data dir>
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def run(binary, *args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return proc.stdout


def main():
    binary, schemas, data = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    load = lambda name: json.loads((schemas / name).read_text())
    documents = []

    for ja in ("-42", "-16", "30"):
        out = run(binary, "cycle", "--ja-k", ja, "--jb-k", "-32", "--th", "24", "--tc", "20", "--json")
        documents.append(("cycle.schema.json", f"cycle ja={ja}", json.loads(out)))

    with tempfile.TemporaryDirectory() as tmp:
        for branch in ("b-negative", "b-positive"):
            path = pathlib.Path(tmp) / f"{branch}.json"
            run(binary, "sweep", "--branch", branch, "--ratio-steps", "21", "--temp-ratio-steps", "7",
                "--format", "json", "--out", str(path))
            documents.append(("sweep.schema.json", f"sweep {branch}", json.loads(path.read_text())))
        # the axis ends on J_A/J_B = 1, a zero-width cycle exported with nulls
        path = pathlib.Path(tmp) / "flagged.json"
        run(binary, "sweep", "--ratio-min", "-1", "--ratio-max", "1", "--ratio-steps", "3",
            "--temp-ratio-steps", "2", "--format", "json", "--out", str(path))
        flagged = json.loads(path.read_text())
        if flagged["counts"]["invalid"] != 2:
            raise SystemExit("expected two flagged cells on the J_A = J_B column")
        documents.append(("sweep.schema.json", "sweep with flagged cells", flagged))

        for policy in (["--fix-g", "2.1"], ["--free-g"]):
            path = pathlib.Path(tmp) / "fit.json"
            run(binary, "fit", "--data", str(data / "cu_dimer_ambient.csv"), *policy, "--out", str(path))
            documents.append(("fit.schema.json", f"fit {policy[0]}", json.loads(path.read_text())))
        out = run(binary, "fit", "--data", str(data / "cu_dimer_0p84GPa.csv"))
        documents.append(("fit.schema.json", "fit stdout", json.loads(out)))

    failures = 0
    for schema_name, what, doc in documents:
        schema = load(schema_name)
        jsonschema.Draft202012Validator.check_schema(schema)
        errors = list(jsonschema.Draft202012Validator(schema).iter_errors(doc))
        status = "ok" if not errors else "FAIL"
        print(f"{status:4} {what} against {schema_name}")
        for e in errors:
            print(f"     {list(e.absolute_path)}: {e.message}")
        failures += bool(errors)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
