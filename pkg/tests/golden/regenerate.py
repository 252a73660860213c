"""Rewrite tests/golden/expected from the current CLI. Review the diff before committing."""
import contextlib
import io
import json
import os
from pathlib import Path

from multirec.cli import main

HERE = Path(__file__).parent


def run_case(case):
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(HERE / "specs")
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(case["argv"])
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    for case in json.loads((HERE / "cases.json").read_text()):
        code, out, err = run_case(case)
        assert code == case["exit"], (case["name"], code, err)
        (HERE / "expected" / f"{case['name']}.json").write_text(out)
        print(f"{case['name']}: exit {code} {err.strip()}")
