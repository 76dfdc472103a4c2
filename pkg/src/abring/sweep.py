"""Parameter sweeps over (gamma, phi, k) and their CSV/JSON serialisation."""
import ast
import csv
import io
import json
import math
import operator
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import List, Optional, Sequence, Union

import numpy as np

from .errors import InvalidParameter
from .scattering import POLE_TOL, amplitude_grid, max_phase_shift

QUANTITIES = ("amplitudes", "phase_profile", "max_phase_shift", "det_m", "chi")
FORMATS = ("csv", "json")
AXES = ("gamma", "phi", "k")
CHUNK = 4096
DEFAULT_SHIFT_GRID = 10_000

CSV_HEADER = ("gamma", "phi", "k", "re_t", "im_t", "abs_t", "arg_t", "re_r", "im_r",
              "abs_r", "arg_r", "det_m_re", "det_m_im", "chi_abs", "flag")
SHIFT_HEADER = ("gamma", "k", "delta_omega")
AMPLITUDE_FIELDS = CSV_HEADER[3:11]

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow,
        ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text: Union[str, float, int]) -> float:
    """Parse a float, allowing arithmetic with ``pi`` (e.g. ``pi/2+1e-4``)."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError
    try:
        value = ev(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        raise InvalidParameter(f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise InvalidParameter(f"non-finite value {text!r}")
    return value


@dataclass(frozen=True)
class Axis:
    values: tuple
    swept: bool

    @classmethod
    def parse(cls, spec) -> "Axis":
        """``lo:hi:count`` (inclusive), ``a,b,c`` or a single value."""
        if isinstance(spec, Axis):
            return spec
        if isinstance(spec, (list, tuple)):
            values = tuple(parse_number(v) for v in spec)
            return cls(values, len(values) > 1)
        if isinstance(spec, (int, float)):
            return cls((float(spec),), False)
        text = str(spec)
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise InvalidParameter(f"range must be lo:hi:count, got {text!r}")
            lo, hi = parse_number(parts[0]), parse_number(parts[1])
            try:
                count = int(parts[2])
            except ValueError:
                raise InvalidParameter(f"range count must be an integer, got {parts[2]!r}") from None
            if count < 2:
                raise InvalidParameter(f"swept axis needs at least 2 points, got {count}")
            if not lo < hi:
                raise InvalidParameter(f"range needs lo < hi, got {text!r}")
            return cls(tuple(np.linspace(lo, hi, count).tolist()), True)
        if "," in text:
            return cls.parse([v for v in text.split(",") if v.strip()])
        return cls((parse_number(text),), False)


@dataclass(frozen=True)
class SweepConfig:
    quantity: str
    gamma: Axis
    phi: Optional[Axis]
    k: Axis
    output: Optional[str] = None
    format: str = "csv"
    grid: int = DEFAULT_SHIFT_GRID

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise InvalidParameter(f"unknown quantity {self.quantity!r}; choose from {', '.join(QUANTITIES)}")
        if self.format not in FORMATS:
            raise InvalidParameter(f"unknown format {self.format!r}")
        if self.gamma is None or self.k is None:
            raise InvalidParameter("gamma and k are required")
        if self.quantity == "max_phase_shift":
            if self.phi is not None:
                raise InvalidParameter("max_phase_shift scans phi internally; do not pass --phi")
            if self.grid < 3:
                raise InvalidParameter("--grid must be >= 3")
        elif self.phi is None:
            raise InvalidParameter(f"{self.quantity} needs --phi")
        if self.quantity == "phase_profile" and not self.phi.swept:
            raise InvalidParameter("phase_profile needs a swept --phi range")

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for axis in AXES:
            if data.get(axis) is not None:
                data[axis] = Axis.parse(data[axis])
            else:
                data[axis] = None
        if "quantity" not in data:
            raise InvalidParameter("quantity is required")
        if "grid" in data:
            data["grid"] = int(data["grid"])
        return cls(**data)

    def axes(self):
        return [getattr(self, a) for a in AXES if getattr(self, a) is not None]


@dataclass(frozen=True)
class DatasetRow:
    gamma: float
    phi: float
    k: float
    re_t: Optional[float]
    im_t: Optional[float]
    abs_t: Optional[float]
    arg_t: Optional[float]
    re_r: Optional[float]
    im_r: Optional[float]
    abs_r: Optional[float]
    arg_r: Optional[float]
    det_m_re: Optional[float]
    det_m_im: Optional[float]
    chi_abs: float
    flag: str


@dataclass(frozen=True)
class PhaseShiftRow:
    gamma: float
    k: float
    delta_omega: Optional[float]


def principal_angle(z):
    a = np.angle(z)
    return np.where(a == -np.pi, np.pi, a)


def thread_count(default: Optional[int] = None) -> int:
    env = os.environ.get("ABRING_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidParameter(f"ABRING_THREADS must be an integer, got {env!r}") from None
    return default or os.cpu_count() or 1


def _evaluate_chunk(args):
    g, p, k = args
    out, ok = amplitude_grid(g, p, k, tol=POLE_TOL)
    return g, p, k, out, ok


def _rows_from_chunk(g, p, k, out, ok) -> List[DatasetRow]:
    t, r = out.t_left, out.r_left
    abs_t, arg_t = np.abs(t), principal_angle(t)
    abs_r, arg_r = np.abs(r), principal_angle(r)
    rows = []
    for i in range(len(g)):
        det = out.det_m[i]
        det_re, det_im = (float(det), 0.0) if math.isfinite(det) else (None, None)
        if ok[i]:
            amp = (float(t[i].real), float(t[i].imag), float(abs_t[i]), float(arg_t[i]),
                   float(r[i].real), float(r[i].imag), float(abs_r[i]), float(arg_r[i]))
            flag = "ok"
        else:
            amp = (None,) * 8
            flag = "singular_gap"
        rows.append(DatasetRow(float(g[i]), float(p[i]), float(k[i]), *amp,
                               det_re, det_im, float(out.chi_abs[i]), flag))
    return rows


def run_sweep(cfg: SweepConfig, threads: Optional[int] = None):
    """Evaluate the configured grid; rows come back in lexicographic
    (gamma, phi, k) order regardless of the number of worker threads."""
    workers = threads or thread_count()
    if cfg.quantity == "max_phase_shift":
        pairs = [(g, k) for g in cfg.gamma.values for k in cfg.k.values]
        job = lambda gk: max_phase_shift(gk[1], gk[0], n=cfg.grid)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shifts = list(pool.map(job, pairs))
        return [PhaseShiftRow(g, k, None if math.isnan(s) else s) for (g, k), s in zip(pairs, shifts)]

    mesh = np.meshgrid(np.array(cfg.gamma.values), np.array(cfg.phi.values),
                       np.array(cfg.k.values), indexing="ij")
    g, p, k = (m.ravel() for m in mesh)
    # fixed chunk boundaries: results do not depend on the worker count
    chunks = [(g[i:i + CHUNK], p[i:i + CHUNK], k[i:i + CHUNK]) for i in range(0, len(g), CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        evaluated = list(pool.map(_evaluate_chunk, chunks))
    rows = []
    for chunk in evaluated:
        rows.extend(_rows_from_chunk(*chunk))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return "%.17g" % value


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dumps(rows: Sequence, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise InvalidParameter(f"unknown format {fmt!r}")
    header = SHIFT_HEADER if rows and isinstance(rows[0], PhaseShiftRow) else CSV_HEADER
    if fmt == "json":
        data = [{key: _json_value(v) for key, v in asdict(row).items()} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(getattr(row, name)) for name in header) + "\n")
    return buf.getvalue()


def emit(rows: Sequence, fmt: str = "csv", path: Optional[str] = None) -> None:
    """Write rows to ``path`` (stdout when None) with LF line endings."""
    text = dumps(rows, fmt)
    if path is None or path == "-":
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def read_csv(path_or_text: str, is_text: bool = False) -> List[DatasetRow]:
    """Parse a dataset CSV back into rows (empty cells become None)."""
    if is_text:
        fh = io.StringIO(path_or_text)
    else:
        fh = open(path_or_text, newline="", encoding="utf-8")
    with fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise InvalidParameter(f"unexpected header {reader.fieldnames}")
        rows = []
        for rec in reader:
            values = {}
            for name in CSV_HEADER:
                cell = rec[name]
                if name == "flag":
                    values[name] = cell
                else:
                    values[name] = None if cell == "" else float(cell)
            rows.append(DatasetRow(**values))
    return rows
