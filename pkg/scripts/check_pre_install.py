"""
Pre-installation check for BitAssist

Runs BEFORE installing the package, using only the standard library for the
checks themselves. Reports whether the numeric stack (numpy, scipy) and the
pydantic layer are importable at the required versions, and whether the
installed numpy links a working LAPACK (eigenvalue routine).

Exit codes:
- 0: everything present
- 1: something missing or too old (install with `pip install -e .`)
- 2: Python itself is too old
"""

import importlib
import json
import sys

MIN_PYTHON = (3, 9)
REQUIRED = {
    "numpy": (1, 24),
    "scipy": (1, 10),
    "pydantic": (2, 6),
    "pydantic_settings": (2, 1),
}


def parse_version(text):
    """Leading numeric components of a version string"""
    parts = []
    for piece in text.split("."):
        digits = ""
        for ch in piece:
            if not ch.isdigit():
                break
            digits += ch
        if not digits:
            break
        parts.append(int(digits))
    return tuple(parts)


def check_package(name, minimum):
    """
    Import a package and compare its version.
    Returns dict with status info.
    """
    try:
        module = importlib.import_module(name)
    except ImportError as e:
        return {"name": name, "status": "missing", "detail": str(e)}

    version = getattr(module, "__version__", "0")
    if parse_version(version) < minimum:
        wanted = ".".join(str(v) for v in minimum)
        return {"name": name, "status": "outdated", "version": version, "detail": f">= {wanted}"}
    return {"name": name, "status": "ok", "version": version}


def check_lapack():
    """Smallest useful LAPACK call: eigenvalues of a 2x2 Hermitian matrix"""
    try:
        import numpy as np

        w = np.linalg.eigvalsh(np.array([[0.0, 1.0], [1.0, 0.0]]))
        return bool(abs(w[0] + 1.0) < 1e-12 and abs(w[1] - 1.0) < 1e-12)
    except Exception as e:
        print(f"[WARNING] LAPACK check failed: {str(e)}")
        return False


def main():
    print("=" * 60)
    print("BitAssist - Pre-Installation Check")
    print("=" * 60)
    print()

    if sys.version_info[:2] < MIN_PYTHON:
        print(f"[ERROR] Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+ required, found {sys.version.split()[0]}")
        sys.exit(2)
    print(f"[INFO] Python {sys.version.split()[0]}")

    results = [check_package(name, minimum) for name, minimum in REQUIRED.items()]
    for result in results:
        if result["status"] == "ok":
            print(f"  [OK]      {result['name']} {result['version']}")
        else:
            print(f"  [{result['status'].upper()}] {result['name']} ({result.get('detail', '')})")

    lapack = check_lapack() if results[0]["status"] == "ok" else False
    print(f"  [{'OK' if lapack else 'FAIL'}]      numpy eigenvalue routine")
    print()

    summary = {"python": sys.version.split()[0], "packages": results, "lapack": lapack}
    try:
        with open("environment_status.json", "w") as f:
            json.dump(summary, f, indent=2)
        print("[INFO] Status saved to environment_status.json")
    except Exception as e:
        print(f"[WARNING] Failed to write environment_status.json: {e}")

    ready = lapack and all(r["status"] == "ok" for r in results)
    print()
    print("=" * 60)
    print("Ready." if ready else "Missing pieces. Run: pip install -e .[dev]")
    print("=" * 60)
    sys.exit(0 if ready else 1)


if __name__ == "__main__":
    main()
