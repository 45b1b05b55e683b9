"""Rewrite tests/golden/<job>.json from the job files in jobs/ (timing stripped)."""

import json
from pathlib import Path

from lapinv.cli import dumps, run, strip_timing

ROOT = Path(__file__).resolve().parent.parent

for path in sorted((ROOT / "jobs").glob("*.json")):
    report, code = run(json.loads(path.read_text()))
    (ROOT / "tests" / "golden" / path.name).write_text(dumps(strip_timing(report)))
    print(f"{path.stem}: exit {code}")
