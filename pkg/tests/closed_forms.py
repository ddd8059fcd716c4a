"""Explicit low-order coefficients, written out independently of the
general Laguerre sums.  pm is +1 for a difference and -1 for a sum."""
import math


def _parts(p):
    pm = 1.0 if p.kind.value == "Difference" else -1.0
    a1, a2, b1, b2, l1, l2 = p.as_tuple()
    lin = b1 * b2 / (b2 + pm * b1) * (a2 + l2 * b1 / (b1 + pm * b2))
    quad = (b1 * b2 / (b1 + pm * b2)) ** 2 * (a2 * (a2 + 1) + 2 * (a2 + 1) * l2 * b1 / (b1 + pm * b2)
                                              + l2 ** 2 * b1 ** 2 / (b1 + pm * b2) ** 2)
    return a1, b1, l1, lin, quad


def c1(p):
    a1, b1, l1, lin, _ = _parts(p)
    return (1.5 - a1) * (a1 - 0.5) / 4 * math.sqrt(b1 / l1) + math.sqrt(l1 / b1) * lin


def c2(p):
    a1, b1, l1, lin, quad = _parts(p)
    return ((a1 - 1.5) * (a1 - 2.5) * (a1 - 0.5) * (a1 + 0.5) / 32 * b1 / l1
            - (a1 - 1.5) * (a1 - 2.5) / 4 * lin + l1 / (2 * b1) * quad)


def d1(p):
    a1, _, _, lin, _ = _parts(p)
    return (a1 - 1) * lin


def d2(p):
    a1, _, _, _, quad = _parts(p)
    return (a1 - 1) * (a1 - 2) / 2 * quad


def gamma1(p):
    return c1(p) + math.sqrt(p.lambda1 * p.beta1)


def gamma2(p):
    a1, b1, l1 = p.alpha1, p.beta1, p.lambda1
    return c2(p) + c1(p) * math.sqrt(l1 * b1) + b1 * (2 * a1 - 3) / 4 + l1 * b1


def delta1(p):
    a1, b1, _, lin, _ = _parts(p)
    return (a1 - 2) * b1 + (a1 - 1) * lin


def delta2(p):
    a1, b1, _, lin, quad = _parts(p)
    return ((a1 - 3) * (a1 - 4) * b1 ** 2 + (a1 - 1) * (a1 - 3) * b1 * lin
            + (a1 - 1) * (a1 - 2) / 2 * quad)
