"""Large-|x| expansions of the density, tail probabilities and quantiles.

Every formula is written for x -> +infinity with a sign ``sg`` that is +1
for a difference and -1 for a sum; the x -> -infinity side of a difference
comes from swapping the two variables.
"""
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import special

from .exact import CorrelatedNormalParams, Kind, PairParams, from_product_normal
from .specfun import DomainError, _gen_binom, _laguerre_all, _poch, hermite_even_imag

MAX_QUIET_ORDER = 12


class Side(str, Enum):
    PLUS = "PlusInfinity"
    MINUS = "MinusInfinity"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        key = str(v).strip().lower()
        if key in ("plus", "+", "plusinfinity", "+inf", "upper", "right"):
            return cls.PLUS
        if key in ("minus", "-", "minusinfinity", "-inf", "lower", "left"):
            return cls.MINUS
        raise DomainError(f"unknown side {v!r}")


class Tail(str, Enum):
    UPPER = "Upper"
    LOWER = "Lower"


class Family(str, Enum):
    PDF_NONCENTRAL = "PdfNoncentral"
    PDF_CENTRAL = "PdfCentral"
    TAIL_NONCENTRAL = "TailNoncentral"
    TAIL_CENTRAL = "TailCentral"

    @property
    def step(self):
        # noncentral series run in powers of x^{-1/2}, central ones in x^{-1}
        return 0.5 if self in (Family.PDF_NONCENTRAL, Family.TAIL_NONCENTRAL) else 1.0


@dataclass(frozen=True)
class AsymptoticApprox:
    """An expansion evaluated at ``x``: exp(leading_log) * sum_l coeff_l / x^{l step}."""
    leading_log: np.ndarray
    coefficients: tuple
    order: int
    family: Family
    x: np.ndarray

    def partial_sums(self):
        """Array of shape (order + 1, len(x)) with the running series sums."""
        t = np.abs(self.x)
        terms = np.array([c * t ** (-self.family.step * l)
                          for l, c in enumerate(self.coefficients)])
        return np.cumsum(terms, axis=0)

    def value(self):
        return np.exp(self.leading_log) * self.partial_sums()[-1]


# -------------------------------------------------------------- helpers

def _sg(p):
    return 1.0 if p.kind is Kind.DIFFERENCE else -1.0


def _check(p):
    if p.kind is Kind.SUM and not p.beta1 > p.beta2:
        raise DomainError("sum expansions need beta1 > beta2")


def _need_noncentral(p):
    _check(p)
    if p.lambda1 <= 0:
        raise DomainError("this coefficient family needs lambda1 > 0")


def _need_central(p):
    _check(p)
    if p.lambda1 != 0:
        raise DomainError("this coefficient family needs lambda1 = 0")


def _laguerre_terms(n, p):
    sg = _sg(p)
    b1, b2 = p.beta1, p.beta2
    return _laguerre_all(n, p.alpha2 - 1, -p.lambda2 * b1 / (b1 + sg * b2))


def _warn_order(order):
    if order < 0:
        raise DomainError("order must be nonnegative")
    if order > MAX_QUIET_ORDER:
        warnings.warn(f"expansion order {order} > {MAX_QUIET_ORDER}: the series is "
                      "divergent and small-|x| accuracy degrades", RuntimeWarning,
                      stacklevel=3)


# ---------------------------------------------------------- coefficients

@lru_cache(maxsize=4096)
def coeff_c(l, p):
    """Density coefficient c_l for lambda1 > 0 (series in x^{-1/2})."""
    _need_noncentral(p)
    l = int(l)
    if l == 0:
        return 1.0
    a1, b1, b2, l1 = p.alpha1, p.beta1, p.beta2, p.lambda1
    sg = _sg(p)
    lag = _laguerre_terms(l, p)
    w = 1 / b1 + sg / b2
    total = 0.0
    for j in range(l + 1):
        i = l - j
        total += (float(_poch(1.5 + j - a1, i)) * float(_poch(a1 - j - 0.5, i))
                  / (math.factorial(i) * 4.0 ** i)
                  * (b1 / l1) ** (l / 2 - j) * w ** (-j) * lag[j])
    return total


@lru_cache(maxsize=4096)
def coeff_d(k, p):
    """Density coefficient d_k for lambda1 = 0 (series in 1/x)."""
    _need_central(p)
    k = int(k)
    if k == 0:
        return 1.0
    poch = float(_poch(1 - p.alpha1, k))
    if poch == 0.0:
        return 0.0
    w = 1 / p.beta1 + _sg(p) / p.beta2
    return (-1) ** k * poch * w ** (-k) * _laguerre_terms(k, p)[k]


@lru_cache(maxsize=4096)
def coeff_gamma(pord, p):
    """Tail coefficient gamma_p for lambda1 > 0.

    Sum over i + 2j + k + l = p of signed products of c_l, two generalized
    binomials and a rising factorial.
    """
    _need_noncentral(p)
    pord = int(pord)
    if pord == 0:
        return 1.0
    a1, b1 = p.alpha1, p.beta1
    lb = p.lambda1 * b1
    total = 0.0
    for l in range(pord + 1):
        cl = coeff_c(l, p)
        for k in range(pord - l + 1):
            bk = _gen_binom(a1 - 0.5 - l, k)
            for j in range((pord - l - k) // 2 + 1):
                i = pord - l - k - 2 * j
                total += ((-1) ** (i + j) * cl * bk
                          * _gen_binom(a1 - 1.5 - l - k - 2 * j, i)
                          * float(_poch((l + k) / 2 - (2 * a1 - 3) / 4, j))
                          * b1 ** j * lb ** ((k + i) / 2))
    return total


@lru_cache(maxsize=4096)
def coeff_delta(k, p, corrected=False):
    """Tail coefficient delta_k for lambda1 = 0.

    ``corrected=False`` uses the rising factorial (k+1-alpha1)_{k-s}, which
    reproduces the published closed forms and tables.  ``corrected=True``
    uses (s+1-alpha1)_{k-s}, the coefficient that follows from repeated
    integration by parts of x^{alpha1-1-s} e^{-x/beta1}; it is the one that
    actually converges to the tail and is used by the numeric CDF.
    """
    _need_central(p)
    k = int(k)
    if k == 0:
        return 1.0
    a1, b1 = p.alpha1, p.beta1
    total = 0.0
    for s in range(k + 1):
        base = (s if corrected else k) + 1 - a1
        total += (-b1) ** (k - s) * float(_poch(base, k - s)) * coeff_d(s, p)
    return total


# ------------------------------------------------------------ evaluators

def _orient(p, side, x):
    """Map a request to the PLUS side: returns (params, positive x array)."""
    side = Side.parse(side)
    x = np.asarray(x, dtype=float)
    if side is Side.MINUS:
        if p.kind is not Kind.DIFFERENCE:
            raise DomainError("the -infinity side exists for differences only")
        if np.any(x >= 0):
            raise DomainError("x must be negative on the -infinity side")
        return p.swapped(), -x
    if np.any(x <= 0):
        raise DomainError("x must be positive on the +infinity side")
    _check(p)
    return p, x


def expansion(p, side, x, order=2, tail=False):
    """Build the :class:`AsymptoticApprox` for the density or the tail.

    ``tail=True`` gives P(X > x) on the +infinity side and P(X <= x) on the
    -infinity side.
    """
    q, t = _orient(p, side, x)
    _warn_order(order)
    a1, a2, b1, b2, l1, l2 = q.as_tuple()
    sg = _sg(q)
    beta_pow = (1 - a1) if tail else -a1
    base = (beta_pow * math.log(b1) - a2 * math.log(b2)
            - a2 * math.log(1 / b2 + sg / b1) - l2 * b2 / (b2 + sg * b1))
    if l1 > 0:
        lead = (base - math.log(2 * math.sqrt(math.pi)) + (1 - 2 * a1) / 4 * math.log(l1 / b1)
                - l1 + (2 * a1 - 3) / 4 * np.log(t) + 2 * np.sqrt(l1 * t / b1) - t / b1)
        fn = coeff_gamma if tail else coeff_c
        fam = Family.TAIL_NONCENTRAL if tail else Family.PDF_NONCENTRAL
        coeffs = tuple(fn(i, q) for i in range(order + 1))
    else:
        lead = base - special.gammaln(a1) + (a1 - 1) * np.log(t) - t / b1
        fam = Family.TAIL_CENTRAL if tail else Family.PDF_CENTRAL
        if tail:
            coeffs = tuple(coeff_delta(i, q) for i in range(order + 1))
        else:
            coeffs = tuple(coeff_d(i, q) for i in range(order + 1))
    return AsymptoticApprox(lead, coeffs, order, fam, t)


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def pdf_asymptotic(p, side, x, order=2):
    """Density expansion truncated after ``order`` correction terms."""
    return _out(expansion(p, side, x, order).value())


def tail_asymptotic(p, side, x, order=2, corrected=False):
    """Expansion of P(X > x) (+infinity side) or P(X <= x) (-infinity side).

    With ``corrected=True`` the central family uses the corrected delta_k.
    """
    a = expansion(p, side, x, order, tail=True)
    if corrected and a.family is Family.TAIL_CENTRAL:
        q = _orient(p, side, x)[0]
        a = replace(a, coefficients=tuple(coeff_delta(i, q, True) for i in range(order + 1)))
    return _out(a.value())


def quantile_asymptotic(p, prob, tail=Tail.UPPER):
    """Closed-form log / log-log approximation of the quantile function.

    ``tail="Upper"`` approximates Q(prob) as prob -> 1, ``tail="Lower"``
    (differences only) as prob -> 0 through the reflection
    Q(prob) = -Q_swapped(1 - prob).
    """
    tail = Tail(tail) if not isinstance(tail, Tail) else tail
    prob = np.asarray(prob, dtype=float)
    if np.any((prob <= 0) | (prob >= 1)):
        raise DomainError("prob must lie in (0, 1)")
    if tail is Tail.LOWER:
        if p.kind is not Kind.DIFFERENCE:
            raise DomainError("lower-tail quantiles need a difference")
        return _out(-np.asarray(quantile_asymptotic(p.swapped(), 1 - prob, Tail.UPPER)))
    _check(p)
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    sg = _sg(p)
    L = np.log(1 / (1 - prob))
    LL = np.log(L)
    shift = -l2 * b2 / (b2 + sg * b1)
    if l1 > 0:
        c = (2 * a1 - 3) / 4
        const = (-math.log(2 * math.sqrt(math.pi)) - a2 * math.log(1 / b2 + sg / b1)
                 - a2 * math.log(b2) + (1 - 2 * a1) / 4 * math.log(l1))
        u = (L + 2 * math.sqrt(l1) * np.sqrt(L) + c * LL + const + l1 + shift
             + c * math.sqrt(l1) * LL / np.sqrt(L))
    else:
        const = -a2 * math.log(1 + sg * b2 / b1) - special.gammaln(a1)
        u = L + (a1 - 1) * LL + const + shift
    return _out(b1 * u)


# --------------------------------------------------------- product normal

def _pn_parts(c):
    rho, n = c.rho, c.n
    R = c.r_x + c.r_y
    D = c.r_x - c.r_y
    return rho, n, R, D


def coeff_c_product_normal(l, c, form="laguerre"):
    """Coefficient c_l of the product-normal expansion (needs r_x + r_y != 0).

    ``form="hermite"`` (n = 1 only) evaluates the equivalent Hermite sum.
    """
    rho, n, R, D = _pn_parts(c)
    if R == 0:
        raise DomainError("r_x + r_y = 0: use coeff_d_product_normal")
    l = int(l)
    if l == 0:
        return 1.0
    if form == "hermite":
        if n != 1:
            raise DomainError("the Hermite form holds for n = 1 only")
        y = math.sqrt((1 + rho) / (1 - rho)) * D / math.sqrt(8)
        v = (1 - rho) / (1 + rho) * R * R / 8
        total = 0.0
        for j in range((l + 1) // 2, l + 1):
            total += (math.comb(l, j) / math.factorial(2 * j - l) * v ** j
                      * float(hermite_even_imag(j, y)))
        return (-1) ** l * ((1 + rho) / (2 * abs(R))) ** l * total
    lag = _laguerre_all(l, n / 2 - 1, -n / 8 * (1 + rho) / (1 - rho) * D * D)
    v = n / 2 * (1 - rho) / (1 + rho) * R * R
    total = 0.0
    for j in range(l + 1):
        i = l - j
        total += (float(_poch(1.5 - n / 2 + j, i)) * float(_poch(n / 2 - 0.5 - j, i))
                  / math.factorial(i) * v ** j * lag[j])
    return total * ((1 + rho) / abs(R)) ** l / (2 ** l * n ** (l / 2))


def coeff_d_product_normal(k, c, form="laguerre"):
    """Coefficient d_k of the product-normal expansion when r_x + r_y = 0."""
    rho, n, R, D = _pn_parts(c)
    k = int(k)
    if k == 0:
        return 1.0
    rx = c.r_x
    if form == "hermite":
        if n != 1:
            raise DomainError("the Hermite form holds for n = 1 only")
        y = math.sqrt((1 + rho) / (1 - rho)) * rx / math.sqrt(2)
        return math.comb(2 * k, k) * ((1 - rho * rho) / 32) ** k * float(hermite_even_imag(k, y))
    lag = _laguerre_all(k, n / 2 - 1, -n / 2 * (1 + rho) / (1 - rho) * rx * rx)[k]
    return (-1) ** k * float(_poch(1 - n / 2, k)) * ((1 - rho * rho) / 2) ** k * lag


def pdf_asymptotic_product_normal(c, side, x, order=2, form="laguerre"):
    """Density expansion for the sum of n products of correlated normals.

    The -infinity side substitutes (r_y, rho, x) -> (-r_y, -rho, -x).
    """
    side = Side.parse(side)
    _warn_order(order)
    x = np.asarray(x, dtype=float)
    if side is Side.MINUS:
        if np.any(x >= 0):
            raise DomainError("x must be negative on the -infinity side")
        c = replace(c, mu_y=-c.mu_y, rho=-c.rho)
        x = -x
    elif np.any(x <= 0):
        raise DomainError("x must be positive on the +infinity side")
    rho, n, R, D = _pn_parts(c)
    s = c.s
    if R != 0:
        lead = (-(n + 1) / 4 * math.log(s) - math.log(2 * math.sqrt(2 * math.pi))
                + (n - 1) / 2 * math.log((1 + rho) / (abs(R) * math.sqrt(n)))
                - n * R * R / (4 * (1 + rho)) - n * D * D / 8
                + (n - 3) / 4 * np.log(x)
                + abs(R) / (1 + rho) * np.sqrt(n * x / s) - x / (s * (1 + rho)))
        terms = [coeff_c_product_normal(l, c, form) * (s / x) ** (l / 2) for l in range(order + 1)]
    else:
        lead = (-n * c.r_x ** 2 / 2 - n / 2 * math.log(2 * s) - special.gammaln(n / 2)
                + (n / 2 - 1) * np.log(x) - x / (s * (1 + rho)))
        terms = [coeff_d_product_normal(k, c, form) * (s / x) ** k for k in range(order + 1)]
    return _out(np.exp(lead) * np.sum(terms, axis=0))


def pdf_asymptotic_product_normal_generic(c, side, x, order=2):
    """Same expansion routed through the generic difference parameters."""
    return pdf_asymptotic(from_product_normal(c), side, x, order)
