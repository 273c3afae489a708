"""Leading-order asymptotics of sequences built from n, log n, log log n.

An :class:`Expansion` maps exponent tuples ``(p, q, r, s)`` to coefficients
and stands for ``sum c * n**p * log(n)**q * loglog(n)**r * logloglog(n)**s``
plus an o(1) remainder. Tuples compare lexicographically, which is exactly
the growth order of the monomials. ``p = inf`` marks a term that outgrows
every monomial (e.g. ``exp(n**a)``).
"""
from __future__ import annotations

import math

ZERO = (0, 0, 0, 0)
LOG = (0, 1, 0, 0)
LOGLOG = (0, 0, 1, 0)
LOGLOGLOG = (0, 0, 0, 1)
HUGE = (math.inf, 0, 0, 0)


class Undecidable(Exception):
    """The expansion falls outside what this module can classify."""


class Expansion(dict):
    def __init__(self, terms=None):
        super().__init__()
        for e, c in (terms or {}).items():
            e = tuple(float(v) for v in e)
            if c != 0 and e >= ZERO:  # monomials with e < ZERO vanish
                self[e] = self.get(e, 0.0) + c

    def __add__(self, other):
        if not isinstance(other, Expansion):
            other = Expansion({ZERO: float(other)})
        out = dict(self)
        for e, c in other.items():
            out[e] = out.get(e, 0.0) + c
        return Expansion({e: c for e, c in out.items() if c != 0})

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if isinstance(other, Expansion) else -float(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, k):
        return Expansion({e: c * k for e, c in self.items()})

    __rmul__ = __mul__

    @property
    def constant(self) -> float:
        return self.get(ZERO, 0.0)

    def leading(self):
        """(exponent, coef) of the fastest-growing non-constant term, or None."""
        growing = [e for e in self if e > ZERO]
        if not growing:
            return None
        e = max(growing)
        return e, self[e]

    def trend(self) -> int:
        """+1 if the sequence tends to +inf, -1 if to -inf, 0 if to a constant."""
        lead = self.leading()
        if lead is None:
            return 0
        return 1 if lead[1] > 0 else -1


def log_of(a: Expansion) -> Expansion:
    """Expansion of log(f) for a positive sequence f with expansion ``a``."""
    lead = a.leading()
    if lead is None:
        c = a.constant
        if c <= 0:
            raise Undecidable("log of a non-positive limit")
        return Expansion({ZERO: math.log(c)})
    (p, q, r, s), c = lead
    if c <= 0:
        raise Undecidable("log of a sequence tending to -inf")
    if s != 0 or math.isinf(p):
        raise Undecidable("nested logarithm too deep")
    return Expansion({ZERO: math.log(c), LOG: p, LOGLOG: q, LOGLOGLOG: r})


def exp_of(a: Expansion) -> Expansion:
    """Expansion of exp(f) for a sequence f with expansion ``a``."""
    lead = a.leading()
    if lead is not None and lead[0] > LOG:
        return Expansion({HUGE: 1.0}) if lead[1] > 0 else Expansion()
    for e in a:
        if e not in (ZERO, LOG, LOGLOG, LOGLOGLOG):
            raise Undecidable("exp of term n^%g log^%g ..." % e[:2])
    return Expansion({(a.get(LOG, 0.0), a.get(LOGLOG, 0.0), a.get(LOGLOGLOG, 0.0), 0): math.exp(a.constant)})


def series_diverges(log_f: Expansion) -> bool:
    """Whether sum_n f(n) diverges, given the expansion of log f(n)."""
    terms = sorted((e for e in log_f if e > ZERO), reverse=True)
    for e in terms:
        c = log_f[e]
        if e > LOG:
            return c > 0
        if e == LOG:
            if c != -1.0:
                return c > -1.0
            continue
        # below log n: f decays slower than n^(-1-eps) unless log n coef was -1
        if log_f.get(LOG, 0.0) != -1.0:
            return True
        if e > LOGLOG:
            return c > 0
        if e == LOGLOG:
            if c != -1.0:
                return c > -1.0
            continue
        if e > LOGLOGLOG:
            return c > 0
        if e == LOGLOGLOG:
            if c != -1.0:
                return c > -1.0
            continue
        return c > 0
    # what remains is c * n^-1 (log n)^-1 ... or a constant: both diverge
    return True
