"""Command-line front end.

Exit codes: 0 success, 2 argument or parameter error, 3 numeric non-convergence.
The default seed is read from the NCGAMMA_SEED environment variable.
"""
import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .asymptotics import (Side, Tail, pdf_asymptotic, pdf_asymptotic_product_normal,
                          pdf_asymptotic_product_normal_generic, quantile_asymptotic,
                          tail_asymptotic)
from .exact import CorrelatedNormalParams, Kind, PairParams, pdf_exact
from .montecarlo import McConfig, draw, quantiles_from_sample
from .quadrature import QuadratureControl, cdf_numeric, quantile_numeric, sf_numeric
from .specfun import ConvergenceError, DomainError, SeriesControl
from .tables import TABLE_IDS, export_report, run_table, table_spec

SEED_ENV = "NCGAMMA_SEED"
EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 2, 3


class UsageError(Exception):
    pass


def _num(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else str(v)


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def emit_grid(values, format="plain", header=None, names=("x", "value")):
    """Serialize (x, value, ...) rows as plottable text.

    ``header`` (a dict) is echoed as comment lines in csv/plain output and
    as a ``params`` object in JSON so every file says what produced it.
    """
    rows = [tuple(r) for r in values]
    xs = [r[0] for r in rows]
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise UsageError("grid abscissae must be sorted")
    header = header or {}
    fmt = format.lower()
    if fmt == "json":
        doc = {"params": header, "data": [dict(zip(names, map(_num, r))) for r in rows]}
        return (json.dumps(doc) + "\n").encode()
    lines = [f"# {k}={v}" for k, v in header.items()]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        w.writerows([[_fmt(v) for v in r] for r in rows])
        return ("\n".join(lines + [""]) if lines else "").encode() + buf.getvalue().encode()
    if fmt == "plain":
        lines.append("# " + " ".join(names))
        lines += [" ".join(_fmt(v) for v in r) for r in rows]
        return ("\n".join(lines) + "\n").encode()
    raise UsageError(f"unknown format {format!r}")


# ---------------------------------------------------------------- parsing

def _grid(spec):
    try:
        a, b, n = spec.split(":")
        n = int(n)
        if n < 1:
            raise ValueError
        return list(np.linspace(float(a), float(b), n))
    except ValueError:
        raise UsageError(f"malformed grid {spec!r}; expected start:stop:count") from None


def _add_pair(p):
    g = p.add_argument_group("distribution parameters")
    g.add_argument("--kind", default="diff", help="sum or diff (default diff)")
    g.add_argument("--alpha", nargs=2, type=float, required=True, metavar=("A1", "A2"),
                   help="shape parameters")
    g.add_argument("--beta", nargs=2, type=float, default=[1.0, 1.0], metavar=("B1", "B2"),
                   help="scale parameters (default 1 1)")
    g.add_argument("--lambda", dest="lam", nargs=2, type=float, default=[0.0, 0.0],
                   metavar=("L1", "L2"), help="non-centrality parameters (default 0 0)")


def _add_points(p, name="x", label="evaluation points"):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument(f"--{name}", nargs="+", type=float, help=label)
    g.add_argument("--grid", help="start:stop:count evenly spaced points")


def _add_common(p, seed=False):
    p.add_argument("--format", choices=["json", "csv", "plain"], default="json",
                   help="output format (default json)")
    p.add_argument("--rel-tol", type=float, help="series relative tolerance override")
    p.add_argument("--max-terms", type=int, help="series term limit override")
    if seed:
        p.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or 0)")
        p.add_argument("--samples", type=int, default=10_000_000,
                       help="Monte Carlo sample count (default 1e7)")
        p.add_argument("--streams", type=int, default=8, help="independent random streams")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ncgamma",
        description="Sums and differences of two independent non-central gamma variables.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", help="exact density")
    _add_pair(p); _add_points(p); _add_common(p)

    p = sub.add_parser("cdf", help="distribution function by quadrature")
    _add_pair(p); _add_points(p); _add_common(p)
    p.add_argument("--upper", action="store_true", help="report P(X > x) instead")

    p = sub.add_parser("quantile", help="quantile function")
    _add_pair(p); _add_points(p, "prob", "probabilities in (0, 1)"); _add_common(p, seed=True)
    p.add_argument("--method", choices=["numeric", "asymptotic", "mc"], default="numeric",
                   help="numeric inversion, closed-form approximation or Monte Carlo")
    p.add_argument("--tail", choices=["upper", "lower"], default="upper",
                   help="asymptotic regime for --method asymptotic")

    p = sub.add_parser("asympt", help="asymptotic expansions")
    p.add_argument("quantity", choices=["pdf", "tail", "quantile"])
    _add_pair(p); _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--x", nargs="+", type=float, help="evaluation points (pdf, tail)")
    g.add_argument("--prob", nargs="+", type=float, help="probabilities (quantile)")
    g.add_argument("--grid", help="start:stop:count evenly spaced points")
    p.add_argument("--order", type=int, default=2, help="correction terms kept (default 2)")
    p.add_argument("--side", choices=["plus", "minus"], default="plus", help="which infinity")
    p.add_argument("--corrected", action="store_true",
                   help="use the corrected tail coefficients for central cases")
    p.add_argument("--compare-exact", action="store_true",
                   help="also report the exact value and the relative error")

    p = sub.add_parser("sample", help="draw variates")
    _add_pair(p); _add_common(p, seed=True)
    p.add_argument("--prob", nargs="+", type=float,
                   help="report empirical quantiles instead of raw draws")

    p = sub.add_parser("table", help="reproduce a published relative-error table")
    p.add_argument("--id", required=True, type=str.upper, choices=TABLE_IDS, help="table id")
    p.add_argument("--format", choices=["json", "csv"], default="csv", help="report format")
    p.add_argument("--fixed-k", type=int, help="truncate the exact series at this k")
    p.add_argument("--rows", help="comma-separated row indices to keep")
    p.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or 0)")
    p.add_argument("--samples", type=int, default=10_000_000, help="Monte Carlo sample count")
    p.add_argument("--streams", type=int, default=8, help="independent random streams")

    p = sub.add_parser("product-normal", help="expansion for sums of correlated normal products")
    p.add_argument("--mu", nargs=2, type=float, required=True, metavar=("MX", "MY"))
    p.add_argument("--sigma", nargs=2, type=float, default=[1.0, 1.0], metavar=("SX", "SY"))
    p.add_argument("--rho", type=float, default=0.0, help="correlation in (-1, 1)")
    p.add_argument("--n", type=int, default=1, help="number of independent copies")
    _add_points(p); _add_common(p)
    p.add_argument("--order", type=int, default=2, help="correction terms kept")
    p.add_argument("--side", choices=["plus", "minus"], default="plus", help="which infinity")
    p.add_argument("--form", choices=["laguerre", "hermite"], default="laguerre",
                   help="coefficient form (hermite needs n = 1)")
    p.add_argument("--compare-exact", action="store_true",
                   help="also report the exact density and the relative error")
    return ap


# ------------------------------------------------------------- commands

def _pair(a):
    return PairParams(a.alpha[0], a.alpha[1], a.beta[0], a.beta[1], a.lam[0], a.lam[1],
                      Kind.parse(a.kind))


def _points(a, name="x"):
    pts = a.grid and _grid(a.grid) or getattr(a, name, None)
    if not pts:
        raise UsageError(f"no {name} values given")
    return sorted(pts)


def _ctrl(a):
    kw = {}
    if getattr(a, "rel_tol", None) is not None:
        kw["rel_tol"] = a.rel_tol
    if getattr(a, "max_terms", None) is not None:
        kw["max_terms"] = a.max_terms
    return SeriesControl(**kw)


def _seed(a):
    if a.seed is not None:
        return a.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer") from None


def _mc(a):
    return McConfig(a.samples, _seed(a), a.streams)


def _echo(a, p=None, **extra):
    h = {"command": a.command}
    if p is not None:
        h.update(kind=p.kind.value, alpha=[p.alpha1, p.alpha2], beta=[p.beta1, p.beta2],
                 **{"lambda": [p.lambda1, p.lambda2]})
    h.update({k: v for k, v in extra.items() if v is not None})
    return h


def _single_json(names, row):
    return (json.dumps(dict(zip(names, map(_num, row)))) + "\n").encode()


def _emit(a, rows, names, header):
    if a.format == "json" and len(rows) == 1:
        return _single_json(names, rows[0])
    return emit_grid(rows, a.format, header, names)


def cmd_pdf(a):
    p = _pair(a)
    x = _points(a)
    f = np.atleast_1d(pdf_exact(p, np.array(x), _ctrl(a)))
    return _emit(a, list(zip(x, f)), ("x", "pdf"), _echo(a, p))


def cmd_cdf(a):
    p = _pair(a)
    x = _points(a)
    fn = sf_numeric if a.upper else cdf_numeric
    v = np.atleast_1d(fn(p, np.array(x), QuadratureControl()))
    return _emit(a, list(zip(x, v)), ("x", "sf" if a.upper else "cdf"), _echo(a, p))


def cmd_quantile(a):
    p = _pair(a)
    probs = _points(a, "prob")
    if a.method == "mc":
        est = quantiles_from_sample(p, draw(p, _mc(a)), probs)
        rows = [(pr, e.value, e.std_error) for pr, e in zip(probs, est)]
        names = ("prob", "quantile", "std_error")
        extra = dict(samples=a.samples, seed=_seed(a), streams=a.streams)
    else:
        if a.method == "asymptotic":
            tail = Tail.UPPER if a.tail == "upper" else Tail.LOWER
            vals = [quantile_asymptotic(p, pr, tail) for pr in probs]
        else:
            vals = [quantile_numeric(p, pr) for pr in probs]
        rows = list(zip(probs, vals))
        names = ("prob", "quantile")
        extra = {}
    return _emit(a, rows, names, _echo(a, p, method=a.method, **extra))


def cmd_asympt(a):
    p = _pair(a)
    q = a.quantity
    pts = sorted(_grid(a.grid)) if a.grid else sorted(a.prob or a.x)
    if q == "quantile":
        if a.x:
            raise UsageError("quantile takes --prob, not --x")
        tail = Tail.UPPER if a.side == "plus" else Tail.LOWER
        vals = [quantile_asymptotic(p, pr, tail) for pr in pts]
        ref = [quantile_numeric(p, pr) for pr in pts] if a.compare_exact else None
        key = "prob"
    else:
        if a.prob:
            raise UsageError(f"{q} takes --x, not --prob")
        x = np.array(pts)
        if q == "pdf":
            vals = np.atleast_1d(pdf_asymptotic(p, a.side, x, a.order))
            ref = np.atleast_1d(pdf_exact(p, x, _ctrl(a))) if a.compare_exact else None
        else:
            vals = np.atleast_1d(tail_asymptotic(p, a.side, x, a.order, a.corrected))
            if a.compare_exact:
                fn = sf_numeric if a.side == "plus" else cdf_numeric
                ref = np.atleast_1d(fn(p, x))
            else:
                ref = None
        key = "x"
    if ref is None:
        rows = list(zip(pts, vals))
        names = (key, "approx")
    else:
        rows = [(t, v, r, (v - r) / r) for t, v, r in zip(pts, vals, ref)]
        names = (key, "approx", "exact", "rel_error")
    return _emit(a, rows, names, _echo(a, p, quantity=q, order=a.order, side=a.side))


def cmd_sample(a):
    p = _pair(a)
    cfg = _mc(a)
    xs = draw(p, cfg)
    extra = dict(samples=a.samples, seed=cfg.seed, streams=a.streams)
    if a.prob:
        probs = sorted(a.prob)
        est = quantiles_from_sample(p, xs, probs)
        rows = [(pr, e.value, e.std_error) for pr, e in zip(probs, est)]
        return _emit(a, rows, ("prob", "quantile", "std_error"), _echo(a, p, **extra))
    rows = list(zip(range(xs.size), xs))
    return emit_grid(rows, a.format, _echo(a, p, **extra), ("index", "value"))


def cmd_table(a):
    rows = None
    if a.rows:
        try:
            rows = [int(v) for v in a.rows.split(",")]
        except ValueError:
            raise UsageError(f"malformed --rows {a.rows!r}") from None
    try:
        spec = table_spec(a.id, a.fixed_k, rows)
    except IndexError:
        raise UsageError("row index out of range") from None
    return export_report(run_table(spec, McConfig(a.samples, _seed(a), a.streams)), a.format)


def cmd_product_normal(a):
    c = CorrelatedNormalParams(a.mu[0], a.mu[1], a.sigma[0], a.sigma[1], a.rho, a.n)
    x = np.array(_points(a))
    vals = np.atleast_1d(pdf_asymptotic_product_normal(c, a.side, x, a.order, a.form))
    head = {"command": a.command, "mu": a.mu, "sigma": a.sigma, "rho": a.rho, "n": a.n,
            "order": a.order, "side": a.side, "form": a.form}
    if a.compare_exact:
        from .exact import from_product_normal
        ref = np.atleast_1d(pdf_exact(from_product_normal(c), x, _ctrl(a)))
        rows = [(t, v, r, (v - r) / r) for t, v, r in zip(x, vals, ref)]
        names = ("x", "approx", "exact", "rel_error")
    else:
        rows = list(zip(x, vals))
        names = ("x", "approx")
    return _emit(a, rows, names, head)


COMMANDS = {"pdf": cmd_pdf, "cdf": cmd_cdf, "quantile": cmd_quantile, "asympt": cmd_asympt,
            "sample": cmd_sample, "table": cmd_table, "product-normal": cmd_product_normal}


def main(argv=None, stdout=None):
    out = stdout or sys.stdout.buffer
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        data = COMMANDS[a.command](a)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"ncgamma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"ncgamma: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    out.write(data)
    out.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
