"""Sampling of sums and differences via the Poisson-gamma mixture, with
empirical quantiles and exceedance probabilities."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exact import PairParams, pdf_exact
from .specfun import DomainError


class InsufficientSamplesError(DomainError):
    pass


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 10_000_000
    seed: int = 0
    n_streams: int = 8

    def __post_init__(self):
        if int(self.n_samples) < 1:
            raise DomainError("n_samples must be >= 1")
        if int(self.n_streams) < 1:
            raise DomainError("n_streams must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n: int

    def __post_init__(self):
        if not self.std_error >= 0:
            raise ValueError("std_error must be nonnegative")


def sample_ncg(alpha, beta, lam, rng, size=None):
    """Non-central gamma variates: K ~ Poisson(lam), then Gamma(alpha + K, scale beta)."""
    if lam > 0:
        shape = alpha + rng.poisson(lam, size)
    else:
        shape = alpha if size is None else np.full(size, float(alpha))
    return rng.gamma(shape, beta, size)


def sample_pair(p: PairParams, rng, size=None):
    x1 = sample_ncg(p.alpha1, p.beta1, p.lambda1, rng, size)
    x2 = sample_ncg(p.alpha2, p.beta2, p.lambda2, rng, size)
    return x1 + x2 if p.is_sum else x1 - x2


def _chunks(n, k):
    base, extra = divmod(n, k)
    return [base + (i < extra) for i in range(k)]


def draw(p: PairParams, cfg: McConfig):
    """All cfg.n_samples variates, concatenated in stream order.

    Each stream owns a generator spawned from SeedSequence(seed), so the
    output does not depend on how the streams are scheduled.
    """
    seqs = np.random.SeedSequence(int(cfg.seed)).spawn(int(cfg.n_streams))
    sizes = _chunks(int(cfg.n_samples), int(cfg.n_streams))

    def one(args):
        seq, m = args
        return sample_pair(p, np.random.default_rng(seq), m)

    with ThreadPoolExecutor(max_workers=min(len(seqs), 8)) as ex:
        parts = list(ex.map(one, zip(seqs, sizes)))
    return np.concatenate(parts)


def _order_index(n, prob):
    return min(max(int(math.ceil(n * prob)) - 1, 0), n - 1)


def _check_prob(prob, n):
    if not 0 < prob < 1:
        raise DomainError("prob must lie in (0, 1)")
    if n * min(prob, 1 - prob) < 100:
        raise InsufficientSamplesError(
            f"n_samples={n} too small for prob={prob}: need n*min(p,1-p) >= 100")


def _quantile_se(p, q, prob, n, xs_sorted=None):
    # delta method with the exact density; order-statistic spread if that fails
    try:
        f = float(pdf_exact(p, q))
        if f > 0 and math.isfinite(f):
            return math.sqrt(prob * (1 - prob) / n) / f
    except Exception:
        pass
    if xs_sorted is None:
        return float("nan")
    h = math.sqrt(n * prob * (1 - prob))
    lo = xs_sorted[max(int(n * prob - h), 0)]
    hi = xs_sorted[min(int(n * prob + h), n - 1)]
    return float(hi - lo) / 2


def quantiles_from_sample(p, xs, probs):
    n = xs.size
    probs = [float(v) for v in probs]
    for pr in probs:
        _check_prob(pr, n)
    idx = sorted({_order_index(n, pr) for pr in probs})
    part = np.partition(xs, idx)
    out = []
    for pr in probs:
        q = float(part[_order_index(n, pr)])
        se = _quantile_se(p, q, pr, n)
        if not math.isfinite(se):
            se = _quantile_se(p, q, pr, n, np.sort(xs))
        out.append(McEstimate(q, se, n))
    return out


def mc_quantiles(p: PairParams, probs, cfg: McConfig = McConfig()):
    """Empirical quantiles at several probabilities from one shared sample."""
    for pr in probs:
        _check_prob(float(pr), int(cfg.n_samples))
    return quantiles_from_sample(p, draw(p, cfg), probs)


def mc_quantile(p: PairParams, prob, cfg: McConfig = McConfig()):
    return mc_quantiles(p, [prob], cfg)[0]


def tails_from_sample(xs, x):
    xs = np.sort(xs)
    n = xs.size
    x = np.atleast_1d(np.asarray(x, dtype=float))
    frac = (n - np.searchsorted(xs, x, side="right")) / n
    se = np.sqrt(frac * (1 - frac) / n)
    return [McEstimate(float(f), float(s), n) for f, s in zip(frac, se)]


def mc_tail(p: PairParams, x, cfg: McConfig = McConfig()):
    """Empirical P(X > x) with binomial standard error; a list if x is an array."""
    out = tails_from_sample(draw(p, cfg), x)
    return out[0] if np.ndim(x) == 0 else out


def empirical_cdf(p: PairParams, x, cfg: McConfig = McConfig()):
    xs = np.sort(draw(p, cfg))
    return np.searchsorted(xs, np.asarray(x, dtype=float), side="right") / xs.size
