"""Checks every request body from a generation dry run against a JSON schema."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    cli, plan, schema_path, workdir = sys.argv[1:5]
    out = Path(workdir) / "dry_run_requests.jsonl"
    subprocess.run([cli, "generate", plan, "--dry-run", str(out)], check=True)
    schema = json.loads(Path(schema_path).read_text(encoding="utf-8"))
    validator = jsonschema.Draft202012Validator(schema)
    bodies = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not bodies:
        print("no request bodies written")
        return 1
    bad = 0
    for i, body in enumerate(bodies, 1):
        for err in validator.iter_errors(body):
            bad += 1
            print(f"request {i}: {err.json_path}: {err.message}")
        parts = body["messages"][0]["content"]
        images = sum(1 for p in parts if p["type"] == "image_url")
        if images < 1:
            bad += 1
            print(f"request {i}: no image part")
    print(f"{len(bodies)} request bodies checked, {bad} problems")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
