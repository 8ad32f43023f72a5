"""Run the conjecture box and the theorem box and write their records as JSON."""

import argparse
import json
from pathlib import Path

from nearsq.scanner import scan_conjecture, scan_theorem


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/scans.json"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--a-max", type=int, default=30)
    ap.add_argument("--b1-max", type=int, default=30)
    ap.add_argument("--n-max", type=int, default=60)
    ap.add_argument("--c-max", type=int, default=50)
    ap.add_argument("--theorem-n-max", type=int, default=200)
    args = ap.parse_args()

    conj = scan_conjecture(args.a_max, args.b1_max, args.n_max, workers=args.workers)
    theo = scan_theorem(args.c_max, args.theorem_n_max, workers=args.workers)
    context = scan_theorem(min(args.c_max, 30), 4, n_min=4, context=True)
    out = {
        "conjecture": {**conj.to_record(), "seconds": conj.seconds},
        "theorem": {**theo.to_record(), "seconds": theo.seconds, "critical": len(theo.critical)},
        "theorem_context_n4": context.to_record(),
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(out, indent=1))
    print("conjecture:", [f.tuple4() for f in conj.findings], f"{conj.seconds:.1f}s")
    print("negative-kernel hits:", [f.tuple4() for f in conj.signed])
    print("theorem findings:", len(theo.findings), "critical:", len(theo.critical), f"{theo.seconds:.1f}s")


if __name__ == "__main__":
    main()
