"""CSV ingestion and report assembly for the command line."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np

from .bds import BdsConfig, BdsResult
from .errors import DegenerateInput, ParseError
from .pipeline import LambdaConfig, LambdaReport

SCHEMA_VERSION = "1"


@dataclass
class ColumnData:
    x: np.ndarray
    y: np.ndarray
    names: tuple[str, str]
    dropped: int
    source: str

    @property
    def digest(self) -> str:
        return data_digest(self.x, self.y)


def data_digest(x, y) -> str:
    """SHA-256 over the little-endian float64 bytes of x then y."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(x, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(y, dtype="<f8").tobytes())
    return h.hexdigest()


def _as_float(cell: str) -> float | None:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _resolve(selector: str, header: list[str] | None, width: int) -> int:
    if header is not None and selector in header:
        return header.index(selector)
    try:
        idx = int(selector)
    except ValueError:
        raise ParseError(f"column {selector!r} not found in header {header}") from None
    if not 0 <= idx < width:
        raise ParseError(f"column index {idx} out of range for {width} columns")
    return idx


def read_pair_csv(text: str, columns: tuple[str, str] | None = None,
                  source: str = "<stdin>") -> ColumnData:
    """Parse two numeric columns out of comma-separated `text`.

    A first row is taken as a header when any of its selected cells is not a
    number. Later rows whose selected cells are not finite numbers are dropped
    and counted; rows too short to hold the selected columns are an error.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DegenerateInput(f"{source} contains no data rows")
    first = [c.strip() for c in rows[0]]
    width = len(first)
    if width < 2:
        raise ParseError(f"{source}: row 1 has {width} column(s), need at least 2")

    sel = columns or ("0", "1")
    probe = []
    for s in sel:
        try:
            probe.append(int(s))
        except ValueError:
            probe = None
            break
    if probe is None:
        has_header = True
    else:
        has_header = any(i >= width or _as_float(first[i]) is None for i in probe)
    header = first if has_header else None
    ix = _resolve(sel[0], header, width)
    iy = _resolve(sel[1], header, width)
    if header is not None:
        names = (header[ix], header[iy])
    else:
        names = (f"column {ix}", f"column {iy}")

    xs, ys, dropped = [], [], 0
    body = rows[1:] if has_header else rows
    offset = 2 if has_header else 1
    for lineno, row in enumerate(body, start=offset):
        if len(row) <= max(ix, iy):
            raise ParseError(f"{source}: row {lineno} has {len(row)} cells, "
                             f"column {max(ix, iy)} is missing")
        vx, vy = _as_float(row[ix].strip()), _as_float(row[iy].strip())
        if vx is None or vy is None:
            dropped += 1
            continue
        xs.append(vx)
        ys.append(vy)
    if len(xs) < 3:
        raise DegenerateInput(
            f"{source}: {len(xs)} valid row(s) after dropping {dropped}; at least 3 are needed"
        )
    return ColumnData(np.array(xs), np.array(ys), names, dropped, source)


def write_pair_csv(stream, x, y, names=("x", "y")) -> None:
    """Write two columns with round-trip exact float formatting."""
    stream.write(f"{names[0]},{names[1]}\n")
    for a, b in zip(x.tolist(), y.tolist()):
        stream.write(f"{a!r},{b!r}\n")


def write_sequence_csv(stream, seq, name="s") -> None:
    stream.write(f"{name}\n")
    stream.write("".join(f"{int(v)}\n" for v in seq))


@dataclass
class Report:
    data: ColumnData
    lambda_report: LambdaReport
    bds: BdsResult | None
    lambda_config: LambdaConfig
    bds_config: BdsConfig | None
    bds_ordering: str
    seed: int | None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        from . import __version__
        from ._kernels import BACKEND

        lam = self.lambda_report.to_dict()
        lam.pop("config")
        bds_cfg = None
        if self.bds_config is not None:
            bds_cfg = asdict(self.bds_config)
            bds_cfg["ordering"] = self.bds_ordering
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "milambda", "version": __version__, "backend": BACKEND},
            "input": {
                "source": self.data.source,
                "sha256": self.data.digest,
                "rows": int(self.data.x.size),
                "dropped_rows": int(self.data.dropped),
                "columns": list(self.data.names),
            },
            "config": {
                "lambda": self.lambda_config.to_dict(),
                "bds": bds_cfg,
                "seed": self.seed,
            },
            "lambda": lam,
            "bds": asdict(self.bds) if self.bds is not None else None,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        # float repr is the shortest string that parses back to the same double
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    def to_text(self) -> str:
        r = self.lambda_report
        lines = [
            f"input        {self.data.source} ({self.data.x.size} rows, "
            f"{self.data.dropped} dropped)",
            f"columns      {self.data.names[0]} -> {self.data.names[1]}",
            f"sha256       {self.data.digest}",
            f"bins         {r.bins}   order {r.order}   "
            f"correction {'on' if self.lambda_config.correction else 'off'}",
            f"rho          {r.rho:.6f}",
            f"I(x,y)       {r.i_xy:.6f} nats",
            f"I(x,y')      {r.i_xyprime:.6f} nats",
            f"rho(x,y')    {r.rho_x_yprime:.6f}",
        ]
        if r.degenerate:
            lines.append("Lambda       undefined (no dependence detected)")
        else:
            lines.append(f"Lambda       {r.lam:.6f}{'  (clamped)' if r.clamped else ''}")
        if self.bds is not None:
            b = self.bds
            lines.append(
                f"BDS          m={b.embedding} eps={b.epsilon:.6g} "
                f"stat={b.statistic:.4f} p={b.p_value:.4g} ({self.bds_ordering} order)"
            )
        for note in self.notes:
            lines.append(f"note         {note}")
        return "\n".join(lines)


def load_schema() -> dict:
    text = resources.files("milambda").joinpath("schema", "report-1.json").read_text()
    return json.loads(text)
