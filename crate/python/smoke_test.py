"""Smoke test for the aqft_py extension.

Build first with `cargo build -p aqft-py`, then run `python3 python/smoke_test.py`.
The shared library is copied next to a temporary module path so no install is needed.
"""

import importlib
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    for profile in ("debug", "release"):
        lib = ROOT / "target" / profile / "libaqft_py.so"
        if lib.exists():
            break
    else:
        sys.exit("libaqft_py.so not found; run `cargo build -p aqft-py` first")
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "aqft_py.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("aqft_py")


def main():
    aqft = load()
    assert "characterize" in aqft.commands()

    cfg = json.loads(aqft.default_config())
    cfg["experiments"]["theories"] = ["boundary_generator"]
    report = json.loads(aqft.run("characterize", json.dumps(cfg)))
    assert report["command"] == "characterize"
    assert report["config_hash"] == aqft.config_hash(json.dumps(cfg))
    assert all(c["status"] == "pass" for c in report["checks"]), report
    rows = report["checks"][0]["witness"]
    assert "B0 additive=false λ-iso=false" in rows, rows

    try:
        aqft.run("catalog-build", json.dumps({"catalog": {"seeds": []}}))
    except RuntimeError as e:
        assert json.loads(str(e))["error"] == "EmptyCatalog"
    else:
        raise AssertionError("empty catalog accepted")

    try:
        aqft.run("no-such-command")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown command accepted")

    print("ok")


if __name__ == "__main__":
    main()
