"""Validates bundled data and CLI output against data/schema."""

import json
import pathlib
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

cli, data = sys.argv[1], pathlib.Path(sys.argv[2])


def check(schema, doc, label):
    validator = jsonschema.Draft202012Validator(json.loads((data / "schema" / f"{schema}.schema.json").read_text()))
    errors = list(validator.iter_errors(doc))
    for e in errors:
        print(f"{label}: {e.message}")
    return not errors


def run(*args):
    out = subprocess.run([cli, "--repo", str(data / "corpus"), "--format", "json", *args],
                         check=True, capture_output=True, text=True).stdout
    return json.loads(out)


ok = check("taxonomy", json.loads((data / "bhadra-v1.json").read_text()), "taxonomy")
ok &= check("capabilities", json.loads((data / "capabilities-v1.json").read_text()), "capabilities")
for path in sorted((data / "corpus").glob("*.json")):
    ok &= check("attack-model", json.loads(path.read_text()), path.name)
ok &= check("comparison", run("compare", "simjacker", "messagetap", "billing-1"), "compare")
ok &= check("stats", run("stats"), "stats")
sys.exit(0 if ok else 1)
