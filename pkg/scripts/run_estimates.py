"""Certified estimate suites, unit checks and the analytic-bound self-check."""

import argparse
import json
from pathlib import Path

from nearsq.algebraics import analytic_bounds_selfcheck, random_large_samples, verify_estimates
from nearsq.units import verify_a3_note, verify_unit_groups


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/estimates.json"))
    ap.add_argument("--a-max", type=int, default=10**4)
    ap.add_argument("--c-max", type=int, default=10**3)
    ap.add_argument("--random", type=int, default=1000)
    ap.add_argument("--cap", type=int, default=1024)
    args = ap.parse_args()

    a_rand, c_rand = random_large_samples(args.random)
    est = verify_estimates(list(range(4, args.a_max + 1)) + a_rand, list(range(2, args.c_max + 1)) + c_rand,
                           cap=args.cap)
    units = verify_unit_groups(range(2, 201), range(4, 201))
    selfcheck = analytic_bounds_selfcheck()
    out = {
        "estimates": {**est.to_record(), "seconds": est.seconds, "ok": est.ok},
        "units": {"ok": units.ok, "orders": len(units.entries), "undecided": units.undecided, "note": units.note},
        "analytic_selfcheck_ok": selfcheck.ok,
        "a3_note": verify_a3_note(),
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(out, indent=1, default=str))
    print(f"estimates ok={est.ok} checks={est.checks} max_bits={est.max_bits} {est.seconds:.1f}s")
    print(f"units ok={units.ok} orders={len(units.entries)}; selfcheck ok={selfcheck.ok}")


if __name__ == "__main__":
    main()
