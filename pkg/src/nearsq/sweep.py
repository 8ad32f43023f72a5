"""Checkpointed, row-sharded parameter sweeps.

A sweep is a list of integer row keys and a module-level row function that maps a
key to a JSON-serialisable result.  Completed rows are stored in a versioned JSON
checkpoint written atomically (temporary file, then rename).  Resuming skips the
stored rows, so the merged result never depends on interruption points or on the
number of worker processes.

Checkpoint format (version 1), one JSON object:

    {"format": "nearsq-sweep-checkpoint", "version": 1,
     "scan_id": <sha256 of task and box>, "task": str, "box": {...},
     "last_completed": int | null,   # largest k with rows[..k] all done
     "digest": <sha256 of the canonical row results>,
     "rows": {"<row key>": <row result>, ...}}
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

FORMAT = "nearsq-sweep-checkpoint"
VERSION = 1


class SweepInterrupted(RuntimeError):
    """Raised after `stop_after` rows when simulating an interruption."""


class CheckpointMismatch(ValueError):
    pass


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def scan_id(task: str, box: dict) -> str:
    return hashlib.sha256(canonical({"task": task, "box": box}).encode()).hexdigest()


@dataclass
class ScanCheckpoint:
    task: str
    box: dict
    rows: dict[int, Any] = field(default_factory=dict)

    @property
    def scan_id(self) -> str:
        return scan_id(self.task, self.box)

    def last_completed(self, order: list[int]) -> int | None:
        last = None
        for key in order:
            if key not in self.rows:
                break
            last = key
        return last

    def digest(self) -> str:
        return hashlib.sha256(canonical({str(k): self.rows[k] for k in sorted(self.rows)}).encode()).hexdigest()

    def to_json(self, order: list[int]) -> str:
        return canonical({
            "format": FORMAT, "version": VERSION, "scan_id": self.scan_id, "task": self.task,
            "box": self.box, "last_completed": self.last_completed(order), "digest": self.digest(),
            "rows": {str(k): self.rows[k] for k in sorted(self.rows)},
        })

    def save(self, path: Path, order: list[int]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(self.to_json(order))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Path, task: str, box: dict) -> "ScanCheckpoint":
        data = json.loads(Path(path).read_text())
        if data.get("format") != FORMAT or data.get("version") != VERSION:
            raise CheckpointMismatch(f"unsupported checkpoint format in {path}")
        cp = cls(data["task"], data["box"], {int(k): v for k, v in data["rows"].items()})
        if cp.scan_id != scan_id(task, box):
            raise CheckpointMismatch(f"checkpoint {path} belongs to a different scan")
        if cp.digest() != data["digest"]:
            raise CheckpointMismatch(f"checkpoint {path} failed its digest check")
        return cp


def run_sweep(
    task: str,
    box: dict,
    rows: list[int],
    row_fn: Callable[..., Any],
    row_args: tuple = (),
    workers: int = 1,
    checkpoint: Path | None = None,
    stop_after: int | None = None,
) -> dict[int, Any]:
    """Run `row_fn(key, *row_args)` for every key, resuming from `checkpoint` if present."""
    cp = ScanCheckpoint(task, box)
    if checkpoint is not None and Path(checkpoint).exists():
        cp = ScanCheckpoint.load(checkpoint, task, box)
    pending = [k for k in rows if k not in cp.rows]
    done = 0

    def record(key: int, result: Any) -> None:
        nonlocal done
        cp.rows[key] = result
        if checkpoint is not None:
            cp.save(checkpoint, rows)
        done += 1
        if stop_after is not None and done >= stop_after:
            raise SweepInterrupted(f"stopped after {done} rows")

    if workers <= 1 or len(pending) <= 1:
        for key in pending:
            record(key, row_fn(key, *row_args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(row_fn, key, *row_args): key for key in pending}
            try:
                for fut in as_completed(futures):
                    record(futures[fut], fut.result())
            except BaseException:
                for fut in futures:
                    fut.cancel()
                raise
    return {k: cp.rows[k] for k in rows}
