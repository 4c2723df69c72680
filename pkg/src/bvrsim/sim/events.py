"""Event log structures and the JSON-lines wire format.

One log holds a meta record (scenario config, seed, engine constants),
one state record per tick, and discrete records for FSM transitions,
missile launches, hits, misses, and the end of the run.  Floats are
serialized with full round-trip precision so recomputing the DCA index
from a parsed log reproduces the logged samples bit for bit.

State records pack per-aircraft fields positionally to keep batch files
small; ``AC_FIELDS`` documents the layout.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from bvrsim.scenario import ScenarioConfig, config_from_dict, config_to_dict

# Positional layout of one aircraft entry inside a state record.
AC_FIELDS = (
    "id",
    "x",
    "y",
    "alt",
    "hdg",
    "spd",
    "mis",
    "alive",
    "fsm",
    "off",
    "vul",
    "tgt",
    "thr",
)

KIND_META = "meta"
KIND_STATE = "state"
KIND_TRANSITION = "transition"
KIND_LAUNCH = "launch"
KIND_HIT = "hit"
KIND_MISS = "miss"
KIND_END = "end"


@dataclass
class EventLog:
    config: ScenarioConfig
    seed: int
    version: str
    ticks: list[dict] = field(default_factory=list)
    events: list[dict] = field(default_factory=list)

    def add_tick(self, t: float, aircraft: list[list], index_samples: list[list]):
        self.ticks.append({"t": t, "kind": KIND_STATE, "ac": aircraft, "idx": index_samples})

    def add_event(self, record: dict):
        self.events.append(record)

    def records(self) -> Iterator[dict]:
        """All records in chronological order, meta first."""
        yield {
            "kind": KIND_META,
            "seed": self.seed,
            "version": self.version,
            "ac_fields": list(AC_FIELDS),
            "scenario": config_to_dict(self.config),
        }
        ei, ev = 0, self.events
        for tick in self.ticks:
            while ei < len(ev) and ev[ei]["t"] <= tick["t"]:
                yield ev[ei]
                ei += 1
            yield tick
        while ei < len(ev):
            yield ev[ei]
            ei += 1

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r, separators=(",", ":")) for r in self.records()) + "\n"


def write_log(log: EventLog, path: str | Path) -> None:
    """Write JSON-lines; a .gz suffix selects transparent gzip compression."""
    data = log.to_jsonl().encode()
    path = Path(path)
    if path.suffix == ".gz":
        # fixed mtime keeps compressed reruns byte-identical
        with open(path, "wb") as raw:
            with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
                fh.write(data)
    else:
        path.write_bytes(data)


def _open_text(path: Path):
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def read_log(path: str | Path) -> EventLog:
    path = Path(path)
    meta = None
    ticks: list[dict] = []
    events: list[dict] = []
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                kind = rec["kind"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed log record: {exc}") from exc
            if kind == KIND_META:
                meta = rec
            elif kind == KIND_STATE:
                ticks.append(rec)
            else:
                events.append(rec)
    if meta is None:
        raise ValueError(f"{path}: log has no meta record")
    log = EventLog(
        config=config_from_dict(meta["scenario"]),
        seed=int(meta["seed"]),
        version=str(meta["version"]),
        ticks=ticks,
        events=events,
    )
    return log


def ac_entry_to_dict(entry: list) -> dict:
    return dict(zip(AC_FIELDS, entry))
