import math
import sys
import time
from pathlib import Path

# Add src directory to sys.path so we can import 'bitassist' package directly
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from bitassist.core.logging import setup_logging
from bitassist.services.assist import (
    check_bound_thm4,
    prevedel_family,
    succ_ns,
    succ_q2_prevedel_reduced,
    succ_qn,
)
from bitassist.services.channels import make_hashing_channel, make_prevedel, succ_unassisted
from bitassist.services.correlations import device_E, local_fraction, tsirelson_box
from bitassist.services.hermitian import HermitianOp, Projector, projector_from_angle
from bitassist.services.protocol import optimal_assisted_succ
from bitassist.services.radius import rad_op

FAILURES = []


def report(label, value, expected, tol):
    ok = abs(value - expected) <= tol
    if not ok:
        FAILURES.append(label)
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {value:.10f} (expected {expected:.10f} +/- {tol:g})")


def timed(label, fn):
    start = time.time()
    value = fn()
    print(f"       {label} took {time.time() - start:.2f}s")
    return value


def verify():
    print("Verifying headline values...")
    prevedel = make_prevedel()

    report("Succ(prevedel)", succ_unassisted(prevedel), 5 / 6, 1e-9)

    q2 = timed("succ_qn(prevedel, 2)", lambda: succ_qn(prevedel, 2).value)
    report("Succ_Q2(prevedel)", q2, 2 / 3 + 1 / (3 * math.sqrt(2)), 1e-4)
    reduced = timed("reduced search", succ_q2_prevedel_reduced)
    report("Succ_Q2(prevedel), three-projector search", reduced, 2 / 3 + 1 / (3 * math.sqrt(2)), 1e-4)
    report("ratio (Succ_Q2 - 1/2)/(Succ - 1/2)", (q2 - 0.5) * 3, 0.5 + 1 / math.sqrt(2), 1e-3)

    family = prevedel_family(
        projector_from_angle(0.0),
        projector_from_angle(math.pi / 4),
        Projector(HermitianOp.identity(2)),
    )
    rad = rad_op(family)
    report("Rad{P0, P_pi/4, I}", rad.radius, 0.5 + 1 / math.sqrt(2), 1e-6)
    deviation = float(abs(rad.center.matrix - 1.5 * HermitianOp.identity(2).matrix).max())
    report("center deviation from (3/2)I", deviation, 0.0, 1e-4)

    for m in (1, 2, 3):
        ch = make_hashing_channel(m)
        report(f"Succ(T_{m})", succ_unassisted(ch), (2**m + 2 ** (m - 1) - 1) / (2 ** (m + 1) - 2), 1e-9)
        report(f"Succ_NS(T_{m})", succ_ns(ch).value, 1.0, 1e-8)
        ratio = check_bound_thm4(ch).value / (succ_unassisted(ch) - 0.5)
        report(f"NS ratio for T_{m}", ratio, 2 - 2 / 2**m, 1e-7)

    result = timed("protocol enumeration", lambda: optimal_assisted_succ(make_hashing_channel(2), device_E(2)))
    report("Succ(T_2, E_2)", result.value, 1.0, 1e-12)
    report("bound for (T_2, E_2)", result.bound_thm5, 1.0, 1e-12)

    report("loc(tsirelson)", local_fraction(tsirelson_box()).alpha, 2 - math.sqrt(2), 1e-6)

    print()
    if FAILURES:
        print(f"FAILED: {', '.join(FAILURES)}")
        sys.exit(1)
    print("All headline values reproduced.")


if __name__ == "__main__":
    setup_logging()
    verify()
