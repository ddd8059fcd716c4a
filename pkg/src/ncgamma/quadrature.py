"""Integral representations of the density and numeric CDF / quantiles.

The integral forms are independent of the series in :mod:`ncgamma.exact`
and serve as its oracle.  All integrands are positive, so a plain adaptive
Gauss-Kronrod rule in a smoothed variable is enough.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize, special

from .exact import Kind, pdf_exact, pdf_at_origin
from .specfun import ConvergenceError, DomainError, _log_bessel_i

# Gauss-Kronrod 7/15 nodes on [-1, 1] (from QUADPACK qk15)
_XK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                0.207784955007898467600689403773245, 0.0])
_WK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
W_KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
W_GAUSS = np.zeros(15)
_gi = np.array([1, 3, 5])
W_GAUSS[_gi] = _WG[:3]
W_GAUSS[14 - _gi] = _WG[:3]
W_GAUSS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureControl:
    """Tolerances for the adaptive rule.

    ``infinite_tail_map`` names the substitution used for (0, inf);
    only ``"rational"`` (t = u / (1 - u)) is implemented.
    """
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    infinite_tail_map: str = "rational"

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")
        if self.infinite_tail_map != "rational":
            raise DomainError("only the rational map t = u/(1-u) is supported")


DEFAULT_QC = QuadratureControl()


# ------------------------------------------------------------ integrator

def adaptive_log_integral(logf, n, qc=DEFAULT_QC, breaks=None, abs_floor=None):
    """log of int_0^1 exp(logf(i, v)) dv for n independent integrands at once.

    ``logf(owner, v)`` receives integer owners and points of equal shape and
    returns the log integrand.  Each integrand is bisected independently
    until its Kronrod-Gauss difference is below rel_tol of its value.
    ``abs_floor`` (shape (n,), linear scale after the shift) stops
    refinement of integrals that are negligible in absolute terms.
    """
    if breaks is None:
        breaks = np.tile(np.linspace(0, 1, 9), (n, 1))
    # a coarse look to locate each peak and set a per-owner shift
    grid = np.linspace(0.0, 1.0, 66)[1:-1]
    lv = logf(np.repeat(np.arange(n), grid.size).reshape(n, -1),
              np.tile(grid, (n, 1)))
    lv = np.where(np.isnan(lv), -np.inf, lv)
    shift = np.max(lv, axis=1)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    vpk = grid[np.argmax(lv, axis=1)]
    owner, a, b = [], [], []
    for i in range(n):
        bp = np.unique(np.concatenate([breaks[i], [vpk[i]]]))
        owner.append(np.full(bp.size - 1, i))
        a.append(bp[:-1])
        b.append(bp[1:])
    owner, a, b = np.concatenate(owner), np.concatenate(a), np.concatenate(b)

    def rule(o, lo, hi):
        c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        v = c[:, None] + h[:, None] * NODES[None, :]
        oo = np.broadcast_to(o[:, None], v.shape)
        lv = logf(oo, v) - shift[o][:, None]
        f = np.exp(np.where(np.isnan(lv), -np.inf, lv))
        k = h * (f @ W_KRONROD)
        g = h * (f @ W_GAUSS)
        return k, np.abs(k - g)

    val, err = rule(owner, a, b)
    floor = np.zeros(n) if abs_floor is None else np.asarray(abs_floor) * np.exp(-shift)
    while True:
        tot = np.bincount(owner, val, minlength=n)
        etot = np.bincount(owner, err, minlength=n)
        cnt = np.bincount(owner, minlength=n)
        tol = np.maximum(qc.rel_tol * np.abs(tot), floor)
        tol = np.maximum(tol, 1e-15 * np.abs(tot))
        bad = etot > tol
        if not np.any(bad):
            break
        if np.any(cnt[bad] > qc.max_subdivisions):
            raise ConvergenceError("adaptive quadrature exceeded max_subdivisions")
        split = bad[owner] & (err * cnt[owner] >= 0.5 * tol[owner])
        if not np.any(split):
            split = bad[owner] & (err >= np.bincount(owner, err, minlength=n).max())
        mid = 0.5 * (a[split] + b[split])
        no = np.concatenate([owner[split], owner[split]])
        na = np.concatenate([a[split], mid])
        nb = np.concatenate([mid, b[split]])
        nv, ne = rule(no, na, nb)
        keep = ~split
        owner = np.concatenate([owner[keep], no])
        a, b = np.concatenate([a[keep], na]), np.concatenate([b[keep], nb])
        val, err = np.concatenate([val[keep], nv]), np.concatenate([err[keep], ne])
    tot = np.bincount(owner, val, minlength=n)
    with np.errstate(divide="ignore"):
        return np.log(tot) + shift


def _power_for(e):
    """Exponent m of u = v^m that smooths an endpoint factor t^e (e > -1)."""
    return int(min(40, max(1, math.ceil(2.0 / (e + 1.0)))))


def _half_line_map(v, m, scale):
    """t = scale * u / (1 - u) with u = v^m; returns t and log dt/dv."""
    with np.errstate(divide="ignore"):
        u = v ** m
        t = scale * u / (1 - u)
        lj = np.log(scale * m) + (m - 1) * np.log(v) - 2 * np.log1p(-u)
    return t, lj


def _unit_map(v, m0, m1):
    """Two-sided power map of (0, 1); returns t, 1 - t and log dt/dv."""
    left = v < 0.5
    w = np.where(left, 2 * v, 2 * (1 - v))
    m = np.where(left, m0, m1)
    with np.errstate(divide="ignore"):
        piece = 0.5 * w ** m
        lj = np.log(m) + (m - 1) * np.log(w)
    t = np.where(left, piece, 1 - piece)
    omt = np.where(left, 1 - piece, piece)
    return t, omt, lj


# ----------------------------------------------------- density integrals

def _branch_for(p):
    if p.lambda1 > 0 and p.lambda2 > 0:
        return "two_bessel"
    if p.lambda1 == 0 and p.lambda2 > 0:
        return "first_central"
    if p.lambda2 == 0 and p.lambda1 > 0:
        return "second_central"
    return "closed_form"


_SWAPPED_BRANCH = {"first_central": "second_central", "second_central": "first_central"}


def _log_pdf_integral_pos(p, x, qc, branch):
    """log density at x > 0 by a single-variable integral."""
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    A = a1 + a2
    x = np.asarray(x, dtype=float)
    n = x.size
    diff = p.kind is Kind.DIFFERENCE
    if branch == "closed_form":
        return np.log(pdf_exact(p, x))
    if branch == "equal":
        return _log_equal_integral(p, x, qc)
    w = 1 / b1 + 1 / b2
    g = 1 / b1 - 1 / b2
    e0 = a2 - 1
    e1 = a1 - 1
    if branch == "two_bessel":
        lpre = ((1 - a1) / 2 * math.log(l1 / b1) + (1 - a2) / 2 * math.log(l2 / b2)
                - a1 * math.log(b1) - a2 * math.log(b2) + A / 2 * np.log(x) - l1 - l2 - x / b1)

        def kern(xi, t, s):
            return ((a2 - 1) / 2 * np.log(t) + (a1 - 1) / 2 * np.log(s)
                    + _log_bessel_i(a1 - 1, 2 * np.sqrt(l1 * xi * s / b1))
                    + _log_bessel_i(a2 - 1, 2 * np.sqrt(l2 * xi * t / b2)))
    elif branch == "first_central":
        lpre = (-special.gammaln(a1) + (1 - a2) / 2 * math.log(l2 / b2) - a1 * math.log(b1)
                - a2 * math.log(b2) + (2 * a1 + a2 - 1) / 2 * np.log(x) - l2 - x / b1)

        def kern(xi, t, s):
            return ((a2 - 1) / 2 * np.log(t) + (a1 - 1) * np.log(s)
                    + _log_bessel_i(a2 - 1, 2 * np.sqrt(l2 * xi * t / b2)))
    elif branch == "second_central":
        lpre = (-special.gammaln(a2) + (1 - a1) / 2 * math.log(l1 / b1) - a1 * math.log(b1)
                - a2 * math.log(b2) + (a1 + 2 * a2 - 1) / 2 * np.log(x) - l1 - x / b1)

        def kern(xi, t, s):
            return ((a2 - 1) * np.log(t) + (a1 - 1) / 2 * np.log(s)
                    + _log_bessel_i(a1 - 1, 2 * np.sqrt(l1 * xi * s / b1)))
    else:
        raise DomainError(f"unknown branch {branch!r}")

    if diff:
        m = _power_for(e0)
        scale = 1.0 / (w * x)

        def logf(o, v):
            t, lj = _half_line_map(v, m, scale[o])
            xi = x[o]
            with np.errstate(divide="ignore", invalid="ignore"):
                lv = kern(xi, t, 1 + t) - w * xi * t + lj
            return np.where((t > 0) & np.isfinite(t), lv, -np.inf)
    else:
        m0, m1 = _power_for(e0), _power_for(e1)

        def logf(o, v):
            t, s, lj = _unit_map(v, m0, m1)
            xi = x[o]
            with np.errstate(divide="ignore", invalid="ignore"):
                lv = kern(xi, t, s) + g * xi * t + lj
            return np.where((t > 0) & (s > 0), lv, -np.inf)
    return lpre + adaptive_log_integral(logf, n, qc)


def _log_equal_integral(p, x, qc):
    """Equal shapes, scales and non-centralities: a single integral over (0, inf).

    Derived from the Poisson(2 lam) mixture of symmetric variance-gamma
    laws with the Bessel K integral K_nu(z) = (z/2)^nu / 2 int t^{-nu-1}
    exp(-t - z^2 / (4t)) dt.
    """
    a, beta, lam = p.alpha1, p.beta1, p.lambda1
    z = np.abs(np.asarray(x, dtype=float)) / beta
    lpre = (-2 * lam - 2 * a * math.log(2) - math.log(beta) - 0.5 * math.log(math.pi)
            + (1 - a) / 2 * math.log(lam / 2) + a * np.log(z))
    scale = np.maximum(1.0, z / 2)

    def logf(o, v):
        t, lj = _half_line_map(v, 1, scale[o])
        zi = z[o]
        with np.errstate(divide="ignore", invalid="ignore"):
            lv = (-(a + 2) / 2 * np.log(t) - t - zi * zi / (4 * t)
                  + _log_bessel_i(a - 1, zi * np.sqrt(2 * lam / t)) + lj)
            return np.where((t > 0) & np.isfinite(t), lv, -np.inf)
    return lpre + adaptive_log_integral(logf, z.size, qc)


def pdf_integral(p, x, qc=DEFAULT_QC, branch="auto"):
    """Density from a one-dimensional integral representation.

    Parameters
    ----------
    p : PairParams
    x : float or array_like
        Nonzero for a difference, positive for a sum.
    branch : str
        ``"auto"`` selects by which non-centralities vanish:
        ``"two_bessel"`` (both positive), ``"first_central"``
        (lambda1 = 0), ``"second_central"`` (lambda2 = 0).  ``"equal"``
        uses the single integral available when the two variables share
        shape, scale and non-centrality.  Negative x of a difference is
        handled by swapping the variables; an explicit one-sided branch
        is swapped with them.
    """
    xa = np.asarray(x, dtype=float)
    flat = xa.ravel()
    diff = p.kind is Kind.DIFFERENCE
    if diff and np.any(flat == 0):
        raise DomainError("x = 0 is excluded for differences")
    if not diff and np.any(flat <= 0):
        raise DomainError("a sum needs x > 0")
    if branch == "equal":
        if not (diff and p.alpha1 == p.alpha2 and p.beta1 == p.beta2
                and p.lambda1 == p.lambda2 > 0):
            raise DomainError("the equal branch needs matching shapes, scales and "
                              "positive non-centralities")
    out = np.zeros(flat.shape)
    for sgn, q in ((1, p), (-1, p.swapped() if diff else None)):
        sel = flat * sgn > 0
        if q is None or not np.any(sel):
            continue
        if branch == "auto":
            br = _branch_for(q)
        else:
            br = _SWAPPED_BRANCH.get(branch, branch) if sgn < 0 else branch
        out[sel] = np.exp(_log_pdf_integral_pos(q, sgn * flat[sel], qc, br))
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


# ------------------------------------------------------- CDF machinery

def _canon(p):
    """A sum with beta1 < beta2 is the same law with the variables swapped."""
    if p.kind is Kind.SUM and p.beta1 < p.beta2:
        return p.swapped()
    return p


def _ncg_tails(A, beta, lam, x):
    """(cdf, sf) of a single non-central gamma by its Poisson mixture."""
    x = np.asarray(x, dtype=float)
    kmax = int(lam + 12 * math.sqrt(lam + 1) + 40)
    k = np.arange(kmax)
    w = np.exp(-lam + k * math.log(lam) - special.gammaln(k + 1)) if lam > 0 else (k == 0) * 1.0
    z = np.maximum(x, 0)[..., None] / beta
    cdf = np.sum(w * special.gammainc(A + k, z), axis=-1)
    sf = np.sum(w * special.gammaincc(A + k, z), axis=-1)
    return cdf, sf


def _far_tail(p, x0):
    """(x_c, tail mass beyond x_c) from the expansion, for the +infinity side.

    x_c is the first point of a geometric grid from x0 where the last two
    partial sums of the tail expansion agree to 1e-9 relative (or the tail
    is below 1e-17).
    """
    from .asymptotics import expansion, Family, coeff_delta, Side
    from dataclasses import replace
    order = 8
    x = max(x0, 1.0, p.beta1)
    for _ in range(400):
        ap = expansion(p, Side.PLUS, x, order, tail=True)
        if ap.family is Family.TAIL_CENTRAL:
            ap = replace(ap, coefficients=tuple(coeff_delta(i, p, True) for i in range(order + 1)))
        ps = ap.partial_sums()
        scale = math.exp(float(ap.leading_log))
        t_hi, t_lo = scale * float(ps[-1]), scale * float(ps[-2])
        if t_hi > 0 and (abs(t_hi - t_lo) <= 1e-9 * t_hi or t_hi < 1e-17):
            return x, t_hi
        if t_hi <= 0 and scale < 1e-17:
            return x, 0.0
        x *= 1.25
    raise ConvergenceError("no usable crossover for the tail expansion")


def _integrate_span(p, lo, hi, qc, left_power=1):
    """int_lo^hi pdf_exact for 0 <= lo < hi on the + side (lo may be 0)."""
    if hi <= lo:
        return 0.0
    span = hi - lo

    def logf(o, v):
        u = v ** left_power
        y = lo + span * u
        with np.errstate(divide="ignore"):
            lj = math.log(span * left_power) + (left_power - 1) * np.log(v)
            return np.log(pdf_exact(p, y.ravel()).reshape(y.shape)) + lj
    return float(np.exp(adaptive_log_integral(logf, 1, qc, abs_floor=[1e-16]))[0])


def _origin_power(p):
    ob = pdf_at_origin(p)
    if ob.regime.value == "PowerSingularity":
        return _power_for(ob.exponent_or_value)
    if ob.regime.value == "LogSingularity":
        return 3
    if p.kind is Kind.SUM:
        return _power_for(p.alpha1 + p.alpha2 - 1)
    return 1


def _upper_tail(p, x0, qc):
    """P(X > x0) for x0 >= 0 on the + side of p (sum or difference)."""
    p = _canon(p)
    if p.kind is Kind.SUM and p.beta1 == p.beta2:
        return float(_ncg_tails(p.alpha1 + p.alpha2, p.beta1, p.lambda1 + p.lambda2, x0)[1])
    xc, far = _far_tail(p, x0)
    if x0 >= xc:
        from .asymptotics import tail_asymptotic
        return float(tail_asymptotic(p, "plus", x0, 8, corrected=True))
    m = _origin_power(p) if x0 == 0 else 1
    return _integrate_span(p, x0, xc, qc, m) + far


def integrate_pdf(p, a, b, qc=DEFAULT_QC):
    """int_a^b of the density; a and b may be infinite.

    Infinite ends use the tail expansion beyond a self-selected crossover
    and quadrature in between.  A difference is split at 0.
    """
    if not a < b:
        return 0.0
    if p.kind is Kind.SUM:
        a = max(a, 0.0)
        if b <= 0:
            return 0.0
        if math.isinf(b):
            return _upper_tail(p, a, qc)
        m = _origin_power(_canon(p)) if a == 0 else 1
        return _integrate_span(_canon(p), a, b, qc, m)
    total = 0.0
    if b > 0:
        lo = max(a, 0.0)
        if math.isinf(b):
            total += _upper_tail(p, lo, qc)
        else:
            m = _origin_power(p) if lo == 0 else 1
            total += _integrate_span(p, lo, b, qc, m)
    if a < 0:
        q = p.swapped()
        hi = -a
        lo = max(-b, 0.0)
        if math.isinf(hi):
            total += _upper_tail(q, lo, qc)
        else:
            m = _origin_power(q) if lo == 0 else 1
            total += _integrate_span(q, lo, hi, qc, m)
    return total


def _mean(p):
    m1 = p.beta1 * (p.alpha1 + p.lambda1)
    m2 = p.beta2 * (p.alpha2 + p.lambda2)
    return m1 + m2 if p.kind is Kind.SUM else m1 - m2


def _cdf_sf(p, x, qc):
    """(cdf, sf) at a scalar x, each computed from its own small side where possible."""
    if p.kind is Kind.SUM:
        if x <= 0:
            return 0.0, 1.0
        q = _canon(p)
        if q.beta1 == q.beta2:
            c, s = _ncg_tails(q.alpha1 + q.alpha2, q.beta1, q.lambda1 + q.lambda2, x)
            return float(c), float(s)
        if x <= _mean(q):
            c = integrate_pdf(q, 0.0, x, qc)
            return c, 1.0 - c
        s = _upper_tail(q, x, qc)
        return 1.0 - s, s
    if x >= 0:
        s = _upper_tail(p, x, qc)
        return 1.0 - s, s
    c = _upper_tail(p.swapped(), -x, qc)
    return c, 1.0 - c


def _integrate_spans(p, los, his, qc):
    """int_{lo_i}^{hi_i} pdf_exact for 0 < lo_i < hi_i on the + side, batched."""
    los = np.asarray(los, dtype=float)
    span = np.asarray(his, dtype=float) - los
    if los.size == 0:
        return np.zeros(0)

    def logf(o, v):
        y = los[o] + span[o] * v
        return np.log(pdf_exact(p, y.ravel()).reshape(y.shape)) + np.log(span[o])
    return np.exp(adaptive_log_integral(logf, los.size, qc, abs_floor=np.full(los.size, 1e-17)))


def _tails_positive(p, t, qc):
    """P(X > t_i) on the + side for sorted t >= 0: one anchored tail plus gaps."""
    out = np.empty(t.size)
    out[-1] = _upper_tail(p, t[-1], qc)
    if t.size > 1:
        lo, hi = t[:-1], t[1:]
        gaps = np.zeros(lo.size)
        pos = lo > 0
        gaps[pos] = _integrate_spans(_canon(p), lo[pos], hi[pos], qc)
        for i in np.flatnonzero(~pos):
            gaps[i] = integrate_pdf(p, 0.0, hi[i], qc)
        out[:-1] = out[-1] + np.cumsum(gaps[::-1])[::-1]
    return out


def _cdf_sf_many(p, x, qc):
    """(cdf, sf) at many points, sharing work between neighbouring points."""
    xu, inv = np.unique(x, return_inverse=True)
    cdf = np.empty(xu.size)
    sf = np.empty(xu.size)
    if p.kind is Kind.SUM:
        q = _canon(p)
        if q.beta1 == q.beta2:
            c, s = _ncg_tails(q.alpha1 + q.alpha2, q.beta1, q.lambda1 + q.lambda2, xu)
            cdf[:], sf[:] = c, s
            return cdf[inv], sf[inv]
        neg = xu <= 0
        cdf[neg], sf[neg] = 0.0, 1.0
        low = ~neg & (xu <= _mean(q))
        if np.any(low):
            t = xu[low]
            gaps = np.empty(t.size)
            gaps[0] = integrate_pdf(q, 0.0, t[0], qc)
            gaps[1:] = _integrate_spans(q, t[:-1], t[1:], qc)
            cdf[low] = np.cumsum(gaps)
            sf[low] = 1.0 - cdf[low]
        high = ~neg & ~low
        if np.any(high):
            sf[high] = _tails_positive(q, xu[high], qc)
            cdf[high] = 1.0 - sf[high]
        return cdf[inv], sf[inv]
    pos = xu >= 0
    if np.any(pos):
        sf[pos] = _tails_positive(p, xu[pos], qc)
        cdf[pos] = 1.0 - sf[pos]
    if np.any(~pos):
        c = _tails_positive(p.swapped(), -xu[~pos][::-1], qc)[::-1]
        cdf[~pos] = c
        sf[~pos] = 1.0 - c
    return cdf[inv], sf[inv]


def _cdf_sf_array(p, x, qc):
    xa = np.asarray(x, dtype=float)
    flat = xa.ravel()
    if flat.size == 1:
        c, s = _cdf_sf(p, float(flat[0]), qc)
        c, s = np.array([c]), np.array([s])
    else:
        c, s = _cdf_sf_many(p, flat, qc)
    return np.clip(c, 0.0, 1.0).reshape(xa.shape), np.clip(s, 0.0, 1.0).reshape(xa.shape)


def cdf_numeric(p, x, qc=DEFAULT_QC):
    """P(X <= x) by quadrature of the exact density plus an asymptotic far tail."""
    out = _cdf_sf_array(p, x, qc)[0]
    return float(out) if out.ndim == 0 else out


def sf_numeric(p, x, qc=DEFAULT_QC):
    """P(X > x), accurate in relative terms deep in the upper tail."""
    out = _cdf_sf_array(p, x, qc)[1]
    return float(out) if out.ndim == 0 else out


def _signed_int(p, a, b, qc):
    if a == b:
        return 0.0
    return integrate_pdf(p, a, b, qc) if a < b else -integrate_pdf(p, b, a, qc)


def _start_point(p, prob):
    from .asymptotics import quantile_asymptotic
    try:
        if prob > 0.5:
            x = float(quantile_asymptotic(_canon(p), prob, "Upper"))
        elif p.kind is Kind.DIFFERENCE:
            x = float(quantile_asymptotic(p, prob, "Lower"))
        else:
            raise DomainError
        if math.isfinite(x) and (p.kind is Kind.DIFFERENCE or x > 0):
            return x
    except (DomainError, ValueError, ZeroDivisionError):
        pass
    return _mean(p) if p.kind is Kind.DIFFERENCE else max(_mean(p), 1e-3)


def quantile_numeric(p, prob, qc=DEFAULT_QC):
    """Solve P(X <= x) = prob.

    Newton steps on the log of the smaller tail, updated with short
    integrals between iterates; falls back to bracketed root finding.
    """
    if not 0 < prob < 1:
        raise DomainError("prob must lie in (0, 1)")
    upper = prob > 0.5
    target = math.log(1 - prob if upper else prob)
    x = _start_point(p, prob)
    c, s = _cdf_sf(p, x, qc)
    cur = s if upper else c
    for _ in range(60):
        if cur <= 0:
            break
        f = float(pdf_exact(p, x)) if x != 0 else float("nan")
        if not (f > 0 and math.isfinite(f)):
            break
        resid = math.log(cur) - target
        if abs(resid) < 1e-11:
            return x
        step = resid * cur / f
        if not upper:
            step = -step
        xn = x + step
        if p.kind is Kind.SUM and xn <= 0:
            xn = 0.5 * x
        if (x < 0 < xn) or (xn < 0 < x):
            xn = 0.5 * x if abs(x) > 1e-12 else xn
        inc = _signed_int(p, x, xn, qc)
        nxt = cur - inc if upper else cur + inc
        if nxt <= 0:
            xn = 0.5 * (x + xn)
            inc = _signed_int(p, x, xn, qc)
            nxt = cur - inc if upper else cur + inc
            if nxt <= 0:
                break
        x, cur = xn, nxt
    return _bracketed_quantile(p, prob, x, qc)


def _bracketed_quantile(p, prob, guess, qc):
    def g(v):
        return cdf_numeric(p, v, qc) - prob
    width = max(1.0, abs(guess)) * 0.1
    lo, hi = guess - width, guess + width
    if p.kind is Kind.SUM:
        lo = max(lo, 1e-300)
    for _ in range(200):
        glo, ghi = g(lo), g(hi)
        if glo <= 0 <= ghi:
            return optimize.brentq(g, lo, hi, xtol=1e-14, rtol=1e-13)
        width *= 2
        if glo > 0:
            lo = lo - width if p.kind is Kind.DIFFERENCE else lo / 2
        if ghi < 0:
            hi = hi + width
    raise ConvergenceError("could not bracket the quantile")
