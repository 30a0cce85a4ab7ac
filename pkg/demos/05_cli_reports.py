"""Driving the computations from job files: the `corings` CLI.

One JSON file defines the rings, the extension and a command; the tool
emits a deterministic report (text or JSON) whose bytes depend only on the
input, never on the worker count.
"""

import io
import json
import tempfile
from pathlib import Path

from corings.cli import run

job = {
    "rings": {
        "F2": {"modulus": 2, "kind": "quotient", "poly": [0, 1]},
        "F4": {"modulus": 2, "kind": "quotient", "poly": [1, 1, 1]},
    },
    "extension": {
        "base": "F2",
        "top": "F4",
        "eta": [[1, 0]],
        "basis": [[1, 0], [0, 1]],
    },
    "command": {"name": "h2"},
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "h2.json"
    path.write_text(json.dumps(job))

    buf = io.BytesIO()
    code = run([str(path)], stdout=buf)
    print(f"--- text report (exit code {code}) ---")
    print(buf.getvalue().decode())

    # byte-identical across worker counts
    buf1, buf4 = io.BytesIO(), io.BytesIO()
    run([str(path), "--format", "json"], stdout=buf1)
    run([str(path), "--format", "json", "--jobs", "4"], stdout=buf4)
    print("--jobs 1 and --jobs 4 reports identical:", buf1.getvalue() == buf4.getvalue())

    # a verification command that fails exits with code 1
    job["command"] = {"name": "cocycle-check", "twist": [0, 1, 0, 0, 0, 0, 0, 0]}
    path.write_text(json.dumps(job))
    buf = io.BytesIO()
    code = run([str(path), "--format", "json"], stdout=buf)
    verdict = json.loads(buf.getvalue())["result"]["is_cocycle"]
    print(f"cocycle-check on a non-cocycle: exit code {code}, is_cocycle={verdict}")
