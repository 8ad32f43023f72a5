"""Run every continued-fraction reduction at desk scale, checkpointed per chunk."""

import argparse
import json
from pathlib import Path

from nearsq.cf_reduction import DESK_MAX, CaseKind, run_reduction

FIRST = {"iiia1": 2, "iiia2": 2, "iiib": 4, "iiic": 2}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/reductions.json"))
    ap.add_argument("--checkpoint-dir", type=Path, default=Path("results/checkpoints"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--cases", nargs="*", default=list(FIRST))
    args = ap.parse_args()

    out = {}
    for kind in args.cases:
        cp = args.checkpoint_dir / f"reduce-{kind}.json"
        summary = run_reduction(kind, FIRST[kind], DESK_MAX[CaseKind(kind)], workers=args.workers, checkpoint=cp)
        out[kind] = {**summary.to_record(), "seconds": summary.seconds, "ok": summary.ok}
        print(f"{kind}: {FIRST[kind]}..{DESK_MAX[CaseKind(kind)]} ok={summary.ok} violations={len(summary.violations)} "
              f"fired={len(summary.fired_admissible)} {summary.seconds:.1f}s")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
