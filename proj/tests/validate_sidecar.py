"""Runs the CLI and checks the profile sidecars against the published schema."""
import csv
import json
import pathlib
import subprocess
import sys

import jsonschema


def check(csv_path, schema):
    meta = json.loads(pathlib.Path(str(csv_path) + ".meta.json").read_text())
    jsonschema.validate(meta, schema)
    with open(csv_path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == meta["columns"], rows[0]
    assert len(rows) - 1 == meta["n"], (len(rows), meta["n"])
    assert float(rows[1][0]) == meta["x_min"]
    return meta


def main():
    cli, schema_path, outdir = sys.argv[1:4]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    runs = {
        "slab.csv": ["slab", "--chi", "-0.05", "--sigma", "1", "--a", "20", "--dx", "0.1"],
        "evolve.csv": ["evolve", "--chi", "-0.5", "--sigma", "2", "--xmin", "-20", "--xmax", "60",
                       "--dx", "0.2", "--dt", "0.005", "--tmax", "5"],
    }
    for name, args in runs.items():
        target = out / name
        subprocess.run([cli, *args, "--out", str(target)], check=True)
        meta = check(target, schema)
        print(f"{name}: sidecar valid ({meta['command']}, n={meta['n']})")

    bad = {"version": "0.1.0", "command": "slab", "columns": ["x", "u"]}
    try:
        jsonschema.validate(bad, schema)
    except jsonschema.ValidationError:
        print("incomplete sidecar rejected")
    else:
        sys.exit("schema accepted an incomplete sidecar")


if __name__ == "__main__":
    main()
