"""Smoke test for the cmlocus Python bindings.

Builds the extension with cargo, loads it from a temporary directory and checks a few
known values.
"""

import importlib.util
import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    subprocess.run(["cargo", "build", "--release", "-p", "cmlocus-py"], cwd=ROOT, check=True)
    built = ROOT / "target" / "release" / "libcmlocus_py.so"
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / "cmlocus_py.so"
    shutil.copy(built, target)
    spec = importlib.util.spec_from_file_location("cmlocus_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    cm = load()

    assert cm.class_number(-4) == 1
    assert cm.class_number(-64) == 2
    assert cm.class_number(-243) == 3
    assert cm.rcf_rel_degree(-3, 6) == 3
    assert cm.compose(-3, [2, 3]) == (("K", 6), 3)

    assert cm.fiber(-4, 1, 1, 2) == [("Q", 1, 1, 1, 1), ("Q", 2, 1, 2, 1)]
    assert cm.fiber(-3, 1, 1, 3) == [("Q", 1, 1, 1, 1), ("Q", 3, 1, 3, 1)]
    doc = json.loads(cm.fiber_to_json(-4, 1, 2, 8))
    assert doc["checkTotal"] == 24 and doc["psiCheck"] is True

    fields, degrees = cm.primitive(-4, 5, 1, 125)
    assert fields == [("Q", 25), ("K", 5)]
    assert sorted(degrees) == [4, 10]

    assert cm.x1(-4, 1, 1, 5, elliptic=True) == (2, 1, 1)
    assert cm.x1(-3, 1, 1, 7, True) == (3, 1, 1)
    assert cm.x1(-4, 2, 1, 7) == (1, 3, 1)

    try:
        cm.fiber(-4, 1, 3, 4)
    except ValueError:
        pass
    else:
        raise AssertionError("M not dividing N was accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
