"""Runs the tool in JSON mode on the bundled models and validates every document."""
import json
import subprocess
import sys

import jsonschema

tool, schema_path, models = sys.argv[1:4]
schema = json.load(open(schema_path))
validator = jsonschema.Draft202012Validator(schema)

runs = [
    ["analyze", f"{models}/galileo_or.galileo"],
    ["analyze", f"{models}/single_leaf.galileo", "--target", "fail"],
    ["analyze", f"{models}/iot.galileo"],
    ["analyze", f"{models}/empty.galileo"],
    ["check", f"{models}/galileo_or.galileo"],
    ["check", f"{models}/iot.galileo"],
    ["simulate", f"{models}/galileo_or.galileo"],
    ["simulate", f"{models}/iot.galileo", "--values", "tMax_Break=2,CostFindLAN_AP=20,total_time=1"],
]
failed = 0
for args in runs:
    proc = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True)
    try:
        doc = json.loads(proc.stdout)
        validator.validate(doc)
        print(f"ok   exit {proc.returncode}  {' '.join(args)}  ({doc['schema']})")
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        failed += 1
        print(f"FAIL exit {proc.returncode}  {' '.join(args)}: {e}")
sys.exit(1 if failed else 0)
