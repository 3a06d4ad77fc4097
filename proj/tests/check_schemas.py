"""Runs every CLI subcommand on the sample data and validates its JSON output against the
published schemas. Also checks exit codes and run-to-run byte stability."""

import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


def main():
    cli, schema_dir, data_dir = str(pathlib.Path(sys.argv[1]).resolve()), pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    registry = load_registry(schema_dir)
    failures = []

    def validator(name):
        schema = registry.contents(f"{name}.schema.json")
        cls = jsonschema.validators.validator_for(schema)
        cls.check_schema(schema)
        return cls(schema, registry=registry)

    def check(schema, args, expect_code=0):
        runs = [subprocess.run([cli, *args], capture_output=True, text=True, cwd=data_dir) for _ in range(2)]
        label = " ".join(args)
        if runs[0].returncode != expect_code:
            failures.append(f"{label}: exit {runs[0].returncode}, expected {expect_code}: {runs[0].stderr.strip()}")
            return
        if runs[0].stdout != runs[1].stdout:
            failures.append(f"{label}: output differs between runs")
        errors = list(validator(schema).iter_errors(json.loads(runs[0].stdout)))
        for e in errors:
            failures.append(f"{label}: {schema} schema: {e.message} at {list(e.absolute_path)}")
        print(f"{'ok  ' if not errors else 'FAIL'} {label}")

    # Input files against their format schemas.
    inputs = {
        "uniform.json": "correlation",
        "ququart_run.json": "correlation",
        "pr_point.json": "correlation",
        "pr_spec.json": "spec",
        "phi_plus.json": "state",
        "canonical_strategy.json": "strategy",
    }
    for name, schema in inputs.items():
        for e in validator(schema).iter_errors(json.loads((data_dir / name).read_text())):
            failures.append(f"{name}: {schema} schema: {e.message}")

    check("validate", ["validate", "uniform.json"])
    check("member", ["member", "uniform.json", "--polytope", "P"])
    check("member", ["member", "uniform.json", "--polytope", "Q"])
    check("member", ["member", "pr_point.json", "--polytope", "Q"], 1)
    check("member", ["member", "pr_point.json", "--polytope", "TOL"], 1)
    check("extremal", ["extremal", "pr_spec.json"])
    check("witness", ["witness", "ququart_run.json", "--L", "2"])
    check("simulate", ["simulate", "canonical_strategy.json"])
    check("simulate", ["simulate", "--canonical", "3"])
    check("seesaw", ["seesaw", "--state", "phi_plus.json", "--seed", "3", "--iters", "50"])
    check("sample", ["sample", "--polytope", "Q", "--n", "5", "--seed", "1"])
    check("sample", ["sample", "--polytope", "TOL", "--n", "5", "--seed", "1"])
    check("count-extremal", ["count-extremal"])
    check("demo", ["demo", "hidden-nonlocality", "--d", "5", "--seed", "0"])

    bad = subprocess.run([cli, "validate", str(schema_dir / "missing.json")], capture_output=True, text=True)
    if bad.returncode != 2 or not bad.stderr:
        failures.append("missing input file should exit 2 with a diagnostic")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
