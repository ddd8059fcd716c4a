"""Reproduction harness for the published relative-error tables.

Each cell is (approx - reference) / reference, so a negative figure means
the approximation undershoots.
"""
import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .asymptotics import Side, pdf_asymptotic, quantile_asymptotic, tail_asymptotic
from .exact import Kind, PairParams, pdf_exact
from .montecarlo import InsufficientSamplesError, McConfig, draw, quantiles_from_sample
from .specfun import SeriesControl

TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8")
EXACT_TABLES = ("T1", "T4", "T7", "T8")


@lru_cache(maxsize=None)
def published_tables():
    """The printed values, loaded from the packaged data file."""
    raw = resources.files("ncgamma").joinpath("data/reference_tables.json").read_text()
    return json.loads(raw)


@dataclass(frozen=True)
class TableRow:
    params: PairParams
    order: object          # int, or None for quantile tables
    printed: tuple         # printed strings, one per column ("" if absent)


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    rows: tuple
    columns: tuple         # x values or probabilities
    column_type: str       # "x" or "prob"
    quantity: str          # "pdf", "tail" or "quantile"
    reference: str         # "ExactSeries" or "MonteCarloQuantile"
    fixed_k: object = None # regression mode: truncate the exact series at this k

    @property
    def orders(self):
        return sorted({r.order for r in self.rows if r.order is not None})


def table_spec(table_id, fixed_k=None, rows=None):
    """Build the spec of a published table; ``rows`` picks a subset by index."""
    tid = table_id.upper()
    if tid not in TABLE_IDS:
        raise ValueError(f"unknown table {table_id!r}; expected one of {TABLE_IDS}")
    t = published_tables()["tables"][tid]
    kind = Kind.parse(t["kind"])
    out = []
    for r in t["rows"]:
        p = PairParams(r["alpha1"], r["alpha2"], r["beta1"], r["beta2"],
                       r["lambda1"], r["lambda2"], kind)
        out.append(TableRow(p, r["order"], tuple(r["values"])))
    if rows is not None:
        out = [out[i] for i in rows]
    return TableSpec(tid, tuple(out), tuple(t["columns"]), t["column_type"], t["quantity"],
                     t["reference"], fixed_k)


@dataclass
class Cell:
    row: int
    column: float
    computed: float
    printed: object = None    # float or None
    std_error: float = 0.0
    match: object = None      # None when there is no printed value
    error: str = ""


@dataclass
class TableReport:
    table_id: str
    columns: list
    column_type: str
    row_labels: list
    cells: list = field(default_factory=list)   # row-major list of rows of Cell

    @property
    def summary(self):
        flat = [c for row in self.cells for c in row]
        judged = [c for c in flat if c.match is not None]
        return {"cells": len(flat), "compared": len(judged),
                "matched": sum(c.match for c in judged),
                "mismatched": sum(not c.match for c in judged),
                "errors": sum(bool(c.error) for c in flat)}

    def mismatches(self):
        return [c for row in self.cells for c in row if c.match is False]


def _printed_value(s):
    s = (s or "").strip()
    return float(s) if s else None


def round_2sf(v):
    if not math.isfinite(v) or v == 0:
        return v
    return float(f"{v:.1e}")


def matches_2sf(computed, printed):
    return round_2sf(computed) == printed


def _row_label(r):
    p = r.params
    lab = f"({p.lambda1:g},{p.lambda2:g},{p.alpha1:g},{p.alpha2:g},{p.beta1:g},{p.beta2:g})"
    return lab if r.order is None else f"{lab};{r.order}"


def _exact_row(spec, r):
    x = np.asarray(spec.columns, dtype=float)
    ctrl = SeriesControl(max_terms=max(500, spec.fixed_k or 0))
    ref = pdf_exact(r.params, x, ctrl, fixed_k=spec.fixed_k)
    approx = pdf_asymptotic(r.params, Side.PLUS, x, r.order)
    rel = (approx - ref) / ref
    return [(float(v), 0.0, "") for v in rel]


def _mc_row(spec, r, idx, cfg):
    probs = [float(v) for v in spec.columns]
    # one independent sample per row, keyed by (seed, row index)
    seed = int(np.random.SeedSequence([int(cfg.seed), idx]).generate_state(1, np.uint64)[0])
    rcfg = McConfig(cfg.n_samples, seed, cfg.n_streams)
    xs = draw(r.params, rcfg)
    out = []
    for pr in probs:
        try:
            q, = quantiles_from_sample(r.params, xs, [pr])
        except InsufficientSamplesError as exc:
            out.append((float("nan"), float("nan"), f"{type(exc).__name__}: {exc}"))
            continue
        if spec.quantity == "quantile":
            qa = quantile_asymptotic(r.params, pr)
            rel = (qa - q.value) / q.value
            se = abs(qa) / q.value ** 2 * q.std_error
        else:
            t = 1 - pr
            ta = float(tail_asymptotic(r.params, Side.PLUS, q.value, r.order))
            # d(tail)/dq is minus the density, estimated from the approximation itself
            h = max(q.std_error, 1e-6 * abs(q.value))
            slope = (float(tail_asymptotic(r.params, Side.PLUS, q.value + h, r.order)) - ta) / h
            rel = (ta - t) / t
            se = abs(slope) * q.std_error / t
        out.append((float(rel), float(se), ""))
    return out


def _tolerance_ok(computed, se, printed, n_se=4.0):
    # printed values carry a rounding half-unit in the second significant figure
    half_unit = 0.05 * 10 ** math.floor(math.log10(abs(printed))) if printed else 0.0
    return abs(computed - printed) <= n_se * se + half_unit


def run_table(spec: TableSpec, cfg: McConfig = McConfig(), workers=4):
    """Evaluate every cell of ``spec``; numeric failures are recorded per cell."""

    def one(args):
        idx, r = args
        try:
            if spec.reference == "ExactSeries":
                vals = _exact_row(spec, r)
            else:
                vals = _mc_row(spec, r, idx, cfg)
        except Exception as exc:  # recorded, not raised
            nan = float("nan")
            vals = [(nan, nan, f"{type(exc).__name__}: {exc}")] * len(spec.columns)
        row = []
        for j, (v, se, err) in enumerate(vals):
            pv = _printed_value(r.printed[j]) if j < len(r.printed) else None
            c = Cell(idx, spec.columns[j], v, pv, se, None, err)
            if pv is not None and not err:
                if spec.reference == "ExactSeries":
                    c.match = matches_2sf(v, pv)
                elif spec.columns[j] <= 0.995:
                    c.match = matches_2sf(v, pv) or _tolerance_ok(v, se, pv)
            row.append(c)
        return row

    with ThreadPoolExecutor(max_workers=max(1, workers)) as ex:
        cells = list(ex.map(one, enumerate(spec.rows)))
    return TableReport(spec.table_id, list(spec.columns), spec.column_type,
                       [_row_label(r) for r in spec.rows], cells)


CSV_COLUMNS = ("table_id", "row", "label", "column", "computed", "printed", "std_error",
               "match", "error")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return f"{float(v):.5e}"


def _records(r):
    for row in r.cells:
        for c in row:
            yield {"table_id": r.table_id, "row": c.row, "label": r.row_labels[c.row],
                   "column": _fmt(c.column), "computed": _fmt(c.computed),
                   "printed": _fmt(c.printed), "std_error": _fmt(c.std_error),
                   "match": "" if c.match is None else str(bool(c.match)).lower(),
                   "error": c.error}


def export_report(r: TableReport, format="csv"):
    """Serialize a report as CSV or JSON bytes; reals use 6 significant digits."""
    fmt = format.lower()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(_records(r))
        return buf.getvalue().encode()
    if fmt == "json":
        doc = {"table_id": r.table_id, "column_type": r.column_type,
               "columns": [_fmt(c) for c in r.columns], "summary": r.summary,
               "cells": list(_records(r))}
        return (json.dumps(doc, indent=1) + "\n").encode()
    raise ValueError(f"unsupported format {format!r}")


def empty_report(table_id="T1"):
    return TableReport(table_id, [], "x", [], [])
