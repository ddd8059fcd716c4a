"""Exact densities for sums and differences of non-central gamma variables.

X_i ~ Gamma(alpha_i, beta_i, lambda_i) is a Poisson(lambda_i) mixture of
gamma laws with shape alpha_i + K and *scale* beta_i.  The sum is X_1 + X_2
and the difference X_1 - X_2.

The general densities are double series in two Poisson indices whose inner
functions are Tricomi U (difference) or Kummer M (sum).  Closed forms are
used whenever the parameters allow one; see :func:`pdf_method`.
"""
from dataclasses import dataclass, replace
from enum import Enum
import math

import numpy as np
from scipy import special

from .specfun import (DEFAULT_CONTROL, ConvergenceError, DomainError, _lse,
                      _log_bessel_i, _log_bessel_k_ladder, _log_m_diagonal, _log_m_positive,
                      _log_u_a_ladder, _log_u_quad, _laguerre_all, _poch)


class Kind(str, Enum):
    SUM = "Sum"
    DIFFERENCE = "Difference"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        key = str(v).strip().lower()
        if key in ("sum", "+", "ncgs"):
            return cls.SUM
        if key in ("difference", "diff", "-", "ncgd"):
            return cls.DIFFERENCE
        raise DomainError(f"unknown kind {v!r}")


@dataclass(frozen=True)
class PairParams:
    """Parameters of X_1 +/- X_2 with X_i ~ Gamma(alpha_i, beta_i, lambda_i).

    ``beta`` is a scale: the gamma component densities contain
    exp(-x / beta).
    """
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    lambda1: float = 0.0
    lambda2: float = 0.0
    kind: Kind = Kind.DIFFERENCE

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        for name in ("alpha1", "alpha2", "beta1", "beta2", "lambda1", "lambda2"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if min(self.alpha1, self.alpha2, self.beta1, self.beta2) <= 0:
            raise DomainError("shapes and scales must be positive")
        if min(self.lambda1, self.lambda2) < 0:
            raise DomainError("non-centralities must be nonnegative")

    @property
    def is_sum(self):
        return self.kind is Kind.SUM

    def swapped(self):
        """Parameters with the roles of X_1 and X_2 exchanged."""
        return replace(self, alpha1=self.alpha2, alpha2=self.alpha1,
                       beta1=self.beta2, beta2=self.beta1,
                       lambda1=self.lambda2, lambda2=self.lambda1)

    def as_tuple(self):
        return (self.alpha1, self.alpha2, self.beta1, self.beta2,
                self.lambda1, self.lambda2)


@dataclass(frozen=True)
class CorrelatedNormalParams:
    """Bivariate normal (X, Y) and the number n of summed products X Y."""
    mu_x: float
    mu_y: float
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    rho: float = 0.0
    n: int = 1

    def __post_init__(self):
        if self.sigma_x <= 0 or self.sigma_y <= 0:
            raise DomainError("standard deviations must be positive")
        if not -1 < self.rho < 1:
            raise DomainError("correlation must lie in (-1, 1)")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("n must be a positive integer")

    @property
    def r_x(self):
        return self.mu_x / self.sigma_x

    @property
    def r_y(self):
        return self.mu_y / self.sigma_y

    @property
    def s(self):
        # scale convention s = sigma_x * sigma_y
        return self.sigma_x * self.sigma_y


class Regime(str, Enum):
    POWER = "PowerSingularity"
    LOG = "LogSingularity"
    BOUNDED = "Bounded"


@dataclass(frozen=True)
class OriginBehavior:
    """Behaviour of the density as x -> 0.

    PowerSingularity: f ~ coefficient * |x|^exponent_or_value.
    LogSingularity: f ~ -coefficient * ln|x|.
    Bounded: f(0) = exponent_or_value (``coefficient`` repeats it, or holds
    the power-law constant for a sum that vanishes at 0).
    ``coefficient_negative`` is the constant for x < 0 (differences only).
    """
    regime: Regime
    exponent_or_value: float
    coefficient: float
    coefficient_negative: float = None


class SingularDensityError(DomainError):
    """The density is unbounded at the requested point."""

    def __init__(self, behavior):
        super().__init__(f"density is singular at 0 ({behavior.regime.value})")
        self.behavior = behavior


# ------------------------------------------------------------ parameter maps

def from_chisquare(r1, r2, w1, w2, l1=0.0, l2=0.0, kind=Kind.DIFFERENCE):
    """Parameters for w1 V1 +/- w2 V2 with V_i non-central chi-square(r_i, l_i)."""
    if min(r1, r2, w1, w2) <= 0 or min(l1, l2) < 0:
        raise DomainError("invalid chi-square parameters")
    return PairParams(r1 / 2, r2 / 2, 2 * w1, 2 * w2, l1 / 2, l2 / 2, kind)


def from_product_normal(c):
    """Difference parameters for the sum of n products of correlated normals."""
    rx, ry, rho, s, n = c.r_x, c.r_y, c.rho, c.s, c.n
    return PairParams(n / 2, n / 2, s * (1 + rho), s * (1 - rho),
                      n * (rx + ry) ** 2 / (4 * (1 + rho)),
                      n * (rx - ry) ** 2 / (4 * (1 - rho)), Kind.DIFFERENCE)


# ------------------------------------------------------- single non-central

def pdf_ncg(alpha, beta, lam, x, ctrl=DEFAULT_CONTROL):
    """Density of Gamma(alpha, beta, lam) via the Bessel I closed form."""
    if alpha <= 0 or beta <= 0 or lam < 0:
        raise DomainError("need alpha, beta > 0 and lambda >= 0")
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape)
    pos = xa > 0
    xp = xa[pos]
    if lam == 0:
        lf = -alpha * math.log(beta) + (alpha - 1) * np.log(xp) - xp / beta \
            - special.gammaln(alpha)
    else:
        lf = -math.log(beta) - lam - xp / beta \
            + 0.5 * (alpha - 1) * np.log(xp / (beta * lam)) \
            + _log_bessel_i(alpha - 1, 2 * np.sqrt(lam * xp / beta))
    out[pos] = np.exp(lf)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------- series engines

def _converged_upto(diag, ctrl):
    """True where the diagonal sums meet the stopping rule somewhere.

    ``diag`` has shape (nx, K+1) holding log sums of anti-diagonals.
    """
    partial = np.logaddexp.accumulate(diag, axis=1)
    with np.errstate(invalid="ignore"):
        small = (diag - partial < math.log(ctrl.rel_tol)) | np.isneginf(diag)
        decr = np.ones_like(small)
        decr[:, 1:] = (diag[:, 1:] <= diag[:, :-1]) | np.isneginf(diag[:, 1:])
    ok = small & decr
    run = np.zeros(diag.shape[0], dtype=int)
    hit = np.zeros(diag.shape[0], dtype=bool)
    for k in range(1, diag.shape[1]):
        run = np.where(ok[:, k], run + 1, 0)
        hit |= run >= ctrl.consecutive_small
    return hit


def _adaptive_sum(build, ctrl, fixed_k, k0=24):
    """Sum a series given anti-diagonal log sums from ``build(K)``."""
    if fixed_k is not None:
        return _lse(build(int(fixed_k)), axis=1)
    k = min(k0, ctrl.max_terms)
    while True:
        diag = build(k)
        if np.all(_converged_upto(diag, ctrl)):
            return _lse(diag, axis=1)
        if k >= ctrl.max_terms:
            raise ConvergenceError(f"density series not converged after {k} terms")
        k = min(2 * k, ctrl.max_terms)


def _diag_sums(logt, kmax):
    """Anti-diagonal log sums of logt[x, m, j] for m + j = 0..kmax."""
    nx, nm, nj = logt.shape
    idx = np.arange(nm)[:, None] + np.arange(nj)[None, :]
    out = np.full((nx, kmax + 1), -np.inf)
    for d in range(kmax + 1):
        sel = idx == d
        if np.any(sel):
            out[:, d] = _lse(logt[:, sel], axis=1)
    return out


def _poisson_logs(lam_x, n):
    """n log(lam_x) - log n! for n = 0..n-1 (lam_x of shape (nx,))."""
    k = np.arange(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = k[None, :] * np.log(lam_x)[:, None] - special.gammaln(k + 1)[None, :]
    t[:, 0] = 0.0
    return t


def _log_diff_positive(p, x, ctrl, fixed_k=None):
    """log density of X_1 - X_2 at x > 0 by the double U series."""
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    x = np.asarray(x, dtype=float)
    A = a1 + a2
    z = (1 / b1 + 1 / b2) * x

    def build(kmax):
        nm = kmax + 1 if l1 > 0 else 1
        nj = kmax + 1 if l2 > 0 else 1
        av = a2 + np.arange(nj)
        nb = max(kmax + 1, 2)
        lu = np.empty((x.size, nj, nb))
        lu[:, :, 0] = _log_u_a_ladder(a2, nj, A, z)
        lu[:, :, 1] = _log_u_a_ladder(a2, nj, A + 1, z)
        # forward recurrence in b, carried as the ratio U(b+1) / U(b)
        r = np.exp(lu[:, :, 1] - lu[:, :, 0])
        zz = z[:, None]
        for i in range(1, nb - 1):
            b = A + i
            r = ((b + zz - 1) - (b - av[None, :] - 1) / r) / zz
            lu[:, :, i + 1] = lu[:, :, i] + np.log(r)
        m = np.arange(nm)
        j = np.arange(nj)
        tm = _poisson_logs(l1 * x / b1, nm) - special.gammaln(a1 + m)[None, :]
        tj = _poisson_logs(l2 * x / b2, nj)
        bidx = np.minimum(m[:, None] + j[None, :], nb - 1)
        lug = lu[:, j[None, :], bidx]
        logt = tm[:, :, None] + tj[:, None, :] + lug
        return _diag_sums(logt, kmax)

    s = _adaptive_sum(build, ctrl, fixed_k)
    return s - a1 * math.log(b1) - a2 * math.log(b2) - l1 - l2 - x / b1 + (A - 1) * np.log(x)


def _log_sum_positive(p, x, ctrl, fixed_k=None):
    """log density of X_1 + X_2 at x > 0 by the double M series.

    The sum is symmetric in its two variables, so the pair is ordered with
    beta1 >= beta2; Kummer's transformation then gives
    M(alpha2+j, A+m+j, y) = e^y M(alpha1+m, A+m+j, -y) with -y >= 0, and
    the m direction is filled by the recurrence in :func:`_log_m_diagonal`.
    """
    if p.beta1 < p.beta2:
        p = p.swapped()
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    x = np.asarray(x, dtype=float)
    A = a1 + a2
    y = (1 / b1 - 1 / b2) * x

    def build(kmax):
        nm = kmax + 1 if l1 > 0 else 1
        nj = kmax + 1 if l2 > 0 else 1
        j = np.arange(nj)
        # lm[x, j, m] = log M(alpha1 + m, A + j + m, -y)
        lm = _log_m_diagonal(a1, A + j[None, :], -y[:, None], nm - 1, ctrl)
        lm = np.swapaxes(lm, 1, 2) + y[:, None, None]
        b = A + np.arange(nm)[:, None] + j[None, :]
        lm = lm - special.gammaln(b)[None, :, :]
        tm = _poisson_logs(l1 * x / b1, nm)
        tj = _poisson_logs(l2 * x / b2, nj)
        logt = tm[:, :, None] + tj[:, None, :] + lm
        return _diag_sums(logt, kmax)

    s = _adaptive_sum(build, ctrl, fixed_k)
    return s - a1 * math.log(b1) - a2 * math.log(b2) - l1 - l2 - x / b1 + (A - 1) * np.log(x)


def _log_diff_bessel_k(p, x, ctrl, fixed_k=None):
    """Equal shapes, scales and non-centralities: series of K Bessel terms.

    The characteristic function factors as exp(-2 lam) sum (2 lam)^k / k!
    (1 + beta^2 t^2)^(-alpha - k), a Poisson(2 lam) mixture of symmetric
    variance-gamma laws.
    """
    A = p.alpha1
    beta, lam = p.beta1, p.lambda1
    ax = np.abs(np.asarray(x, dtype=float))

    def build(kmax):
        n = kmax + 1 if lam > 0 else 1
        k = np.arange(n)
        nu = A + k - 0.5
        lk = _log_bessel_k_ladder(A - 0.5, n, ax / beta).T
        with np.errstate(divide="ignore"):
            lw = k * math.log(2 * lam) if lam > 0 else np.zeros(1)
        lt = lw - special.gammaln(k + 1) - special.gammaln(A + k)
        terms = lt[None, :] + nu[None, :] * np.log(ax / (2 * beta))[:, None] + lk
        if n < kmax + 1:
            terms = np.concatenate([terms, np.full((ax.size, kmax + 1 - n), -np.inf)], axis=1)
        return terms

    s = _adaptive_sum(build, ctrl, fixed_k)
    return s - 2 * lam - math.log(beta) - 0.5 * math.log(math.pi)


def _log_variance_gamma(p, x):
    """Central difference with equal shapes: Bessel K closed form."""
    a, b1, b2 = p.alpha1, p.beta1, p.beta2
    w = 1 / b1 + 1 / b2
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    nu = abs(a - 0.5)
    y = 0.5 * w * ax
    lk = 0.5 * math.log(math.pi) + nu * np.log(2 * y) - y + _log_u_quad(nu + 0.5, 2 * nu + 1, 2 * y)
    return (-a * math.log(b1 * b2) - 0.5 * math.log(math.pi) - special.gammaln(a)
            + (0.5 - a) * math.log(w) + 0.5 * (1 / b2 - 1 / b1) * x
            + (a - 0.5) * np.log(ax) + lk)


def _log_central_diff_positive(p, x):
    """Central difference, x > 0: a single U term."""
    a1, a2, b1, b2 = p.alpha1, p.alpha2, p.beta1, p.beta2
    A = a1 + a2
    x = np.asarray(x, dtype=float)
    z = (1 / b1 + 1 / b2) * x
    return (-a1 * math.log(b1) - a2 * math.log(b2) - special.gammaln(a1)
            - x / b1 + (A - 1) * np.log(x) + _log_u_quad(a2, A, z))


def _log_central_sum(p, x, ctrl):
    a1, a2, b1, b2 = p.alpha1, p.alpha2, p.beta1, p.beta2
    A = a1 + a2
    x = np.asarray(x, dtype=float)
    return (-a1 * math.log(b1) - a2 * math.log(b2) - special.gammaln(A)
            + (A - 1) * np.log(x) - x / b1
            + _log_m_positive(a2, A, (1 / b1 - 1 / b2) * x, ctrl))


def _log_mckay(p, x):
    """Central sum with equal shapes and unequal scales: Bessel I closed form."""
    a, b1, b2 = p.alpha1, p.beta1, p.beta2
    x = np.asarray(x, dtype=float)
    g = abs(1 / b1 - 1 / b2)
    return (special.gammaln(a + 0.5) - special.gammaln(2 * a) - a * math.log(b1 * b2)
            + (0.5 - a) * math.log(g) + (a - 0.5) * np.log(4 * x)
            - 0.5 * (1 / b1 + 1 / b2) * x + _log_bessel_i(a - 0.5, 0.5 * g * x))


def _is_pos_int(v):
    return v > 0 and v == math.floor(v)


def _log_finite_positive(p, x):
    """Finite Laguerre sum, valid for x > 0 when lambda1 = 0 and alpha1 = n."""
    n = int(p.alpha1)
    a2, b1, b2, l2 = p.alpha2, p.beta1, p.beta2, p.lambda2
    w = 1 / b1 + 1 / b2
    x = np.asarray(x, dtype=float)
    lag = _laguerre_all(n - 1, a2 - 1, -l2 * b1 / (b1 + b2))
    total = np.zeros(x.shape)
    for k in range(n):
        uk = (-1) ** k * float(_poch(1 - n, k)) * w ** (-k) * lag[k]
        total = total + uk / x ** k
    return (-n * math.log(b1) - a2 * math.log(b2) - special.gammaln(n) - a2 * math.log(w)
            + (n - 1) * np.log(x) - x / b1 - l2 * b2 / (b1 + b2) + np.log(total))


# --------------------------------------------------------------- dispatch

def pdf_method(p, side=1):
    """Name of the evaluation path chosen for ``p`` on the side sign(x)."""
    if side < 0 and not p.is_sum:
        return pdf_method(p.swapped(), 1)
    if p.is_sum:
        if p.beta1 == p.beta2:
            return "ncg"
        if p.lambda1 == 0 and p.lambda2 == 0:
            return "mckay" if p.alpha1 == p.alpha2 else "central_sum"
        return "series"
    if p.lambda1 == 0 and p.lambda2 == 0:
        return "variance_gamma" if (p.alpha1 == p.alpha2) else "central_difference"
    if p.lambda1 == 0 and _is_pos_int(p.alpha1):
        return "finite_series"
    if p.lambda1 == p.lambda2 and p.beta1 == p.beta2 and p.alpha1 == p.alpha2:
        return "bessel_k_series"
    return "series"


def _log_pdf_side(p, x, method, ctrl, fixed_k):
    """log density at x > 0 (x < 0 handled by the caller through a swap)."""
    if fixed_k is not None and method != "series":
        method = "series"
    if method == "auto":
        method = pdf_method(p)
    if p.is_sum:
        if method == "ncg":
            return np.log(pdf_ncg(p.alpha1 + p.alpha2, p.beta1, p.lambda1 + p.lambda2, x, ctrl))
        if method == "mckay":
            return _log_mckay(p, x)
        if method == "central_sum":
            return _log_central_sum(p, x, ctrl)
        return _log_sum_positive(p, x, ctrl, fixed_k)
    if method == "variance_gamma":
        return _log_variance_gamma(p, x)
    if method == "central_difference":
        return _log_central_diff_positive(p, x)
    if method == "finite_series":
        return _log_finite_positive(p, x)
    if method == "bessel_k_series":
        return _log_diff_bessel_k(p, x, ctrl, fixed_k)
    return _log_diff_positive(p, x, ctrl, fixed_k)


def pdf_exact(p, x, ctrl=DEFAULT_CONTROL, method="auto", fixed_k=None):
    """Density of X_1 +/- X_2 at ``x`` (scalar or array).

    Parameters
    ----------
    p : PairParams
    x : float or array_like
    ctrl : SeriesControl
        Truncation policy for the series paths.
    method : str
        ``"auto"`` picks the most specific closed form (see
        :func:`pdf_method`); ``"series"`` forces the general double series.
    fixed_k : int, optional
        Truncate the double series at total index k instead of stopping
        adaptively.  Implies ``method="series"``.

    Returns
    -------
    float or ndarray
        For a difference at x = 0 the bounded value is returned when
        alpha1 + alpha2 > 1; otherwise SingularDensityError is raised.
    """
    xa = np.asarray(x, dtype=float)
    flat = xa.ravel()
    out = np.zeros(flat.shape)
    pos = flat > 0
    if np.any(pos):
        out[pos] = np.exp(_log_pdf_side(p, flat[pos], method, ctrl, fixed_k))
    if not p.is_sum:
        neg = flat < 0
        if np.any(neg):
            q = p.swapped()
            m = method if method in ("auto", "series") else "auto"
            out[neg] = np.exp(_log_pdf_side(q, -flat[neg], m, ctrl, fixed_k))
        if np.any(flat == 0):
            ob = pdf_at_origin(p, ctrl)
            if ob.regime is not Regime.BOUNDED:
                raise SingularDensityError(ob)
            out[flat == 0] = ob.exponent_or_value
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


def pdf_finite_series(p, x):
    """Finite-sum density of a difference with an integer shape.

    Valid when lambda1 = 0, alpha1 is a positive integer and x > 0, or when
    lambda2 = 0, alpha2 is a positive integer and x < 0.
    """
    if p.is_sum:
        raise DomainError("finite series applies to differences only")
    xa = np.asarray(x, dtype=float)
    if np.all(xa > 0) and p.lambda1 == 0 and _is_pos_int(p.alpha1):
        out = np.exp(_log_finite_positive(p, xa))
    elif np.all(xa < 0) and p.lambda2 == 0 and _is_pos_int(p.alpha2):
        out = np.exp(_log_finite_positive(p.swapped(), -xa))
    else:
        raise DomainError("finite series preconditions not met")
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------- origin

def _log_horn_psi2(a, b1, b2, x, y, ctrl):
    """log of the Horn function Psi_2(a; b1, b2; x, y) for x, y >= 0.

    Terms are positive; summed along anti-diagonals m + n = const.
    """
    total = -np.inf
    small = 0
    lx = math.log(x) if x > 0 else -np.inf
    ly = math.log(y) if y > 0 else -np.inf
    for d in range(ctrl.max_terms):
        m = np.arange(d + 1)
        n = d - m
        with np.errstate(invalid="ignore"):
            lt = (special.gammaln(a + d) - special.gammaln(a)
                  - (special.gammaln(b1 + m) - special.gammaln(b1))
                  - (special.gammaln(b2 + n) - special.gammaln(b2))
                  - special.gammaln(m + 1) - special.gammaln(n + 1)
                  + np.where(m > 0, m * lx, 0.0) + np.where(n > 0, n * ly, 0.0))
        dl = _lse(lt)
        total = np.logaddexp(total, dl)
        if dl - total < math.log(ctrl.rel_tol) and d > 0:
            small += 1
            if small >= ctrl.consecutive_small:
                return float(total)
        else:
            small = 0
    raise ConvergenceError("Horn Psi_2 series did not converge")


def pdf_at_origin(p, ctrl=DEFAULT_CONTROL):
    """Value or limiting form of the density at 0."""
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    A = a1 + a2
    base = -a1 * math.log(b1) - a2 * math.log(b2) - l1 - l2
    if p.is_sum:
        coef = math.exp(base - special.gammaln(A))
        if A < 1:
            return OriginBehavior(Regime.POWER, A - 1, coef)
        return OriginBehavior(Regime.BOUNDED, coef if A == 1 else 0.0, coef)
    if A < 1:
        g = math.exp(base + special.gammaln(1 - A)) / math.pi
        return OriginBehavior(Regime.POWER, A - 1, g * math.sin(math.pi * a1),
                              g * math.sin(math.pi * a2))
    if A == 1:
        g = math.exp(base) / math.pi
        return OriginBehavior(Regime.LOG, 0.0, g * math.sin(math.pi * a1),
                              g * math.sin(math.pi * a2))
    psi = _log_horn_psi2(A - 1, a1, a2, l1 * b2 / (b1 + b2), l2 * b1 / (b1 + b2), ctrl)
    lv = (base + (1 - A) * math.log(1 / b1 + 1 / b2) + special.gammaln(A - 1)
          - special.gammaln(a1) - special.gammaln(a2) + psi)
    v = math.exp(lv)
    return OriginBehavior(Regime.BOUNDED, v, v, v)


def is_unimodal_at_zero(p):
    """Documented sufficient condition for a mode at 0 (not verified numerically).

    Differences: alpha1 + alpha2 <= 1.  Sums: alpha1 + alpha2 < 1.
    """
    A = p.alpha1 + p.alpha2
    return A < 1 if p.is_sum else A <= 1
