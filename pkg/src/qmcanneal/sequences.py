"""(t,s)-sequences, their R-digit randomisation, and net bookkeeping.

The deterministic backbone is a base-2 Sobol' construction evaluated in
natural (not Gray-code) order, so that coordinate 1 is exactly the van der
Corput sequence. A driver for a ``d``-dimensional state uses table dimension
1 for the acceptance coordinate and dimensions ``2..d+1`` for the proposal.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

MAX_DIGITS = 53
INF = math.inf

Level = Union[int, float]


class DigitCapacityError(OverflowError):
    """Index needs more than ``MAX_DIGITS`` base-b digits."""


def parse_level(R) -> Level:
    """Accept an int >= 0, ``math.inf`` or the token ``"inf"``."""
    if isinstance(R, str):
        if R.strip().lower() in ("inf", "infinity"):
            return INF
        R = int(R)
    if isinstance(R, float):
        if math.isinf(R) and R > 0:
            return INF
        if not R.is_integer():
            raise ValueError("randomness level must be an integer or 'inf', got %r" % R)
        R = int(R)
    if R < 0:
        raise ValueError("randomness level must be >= 0, got %r" % R)
    return int(R)


def radical_inverse(n: int, b: int = 2) -> float:
    """Van der Corput radical inverse of ``n`` in base ``b``."""
    if n < 0 or b < 2:
        raise ValueError("need n >= 0 and b >= 2")
    value = 0.0
    scale = 1.0 / b
    while n:
        n, digit = divmod(n, b)
        value += digit * scale
        scale /= b
    return value


def radical_inverse_array(n: np.ndarray, b: int = 2) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64).copy()
    out = np.zeros(n.shape)
    scale = 1.0 / b
    while np.any(n):
        n, digit = np.divmod(n, b)
        out += digit * scale
        scale /= b
    return out


@dataclass(frozen=True)
class NetParams:
    b: int
    t: int
    m: int
    s: int

    def __post_init__(self):
        if self.b < 2 or self.s < 1 or not 0 <= self.t <= self.m:
            raise ValueError("invalid net parameters %r" % (self,))


@dataclass(frozen=True)
class DriverConfig:
    """Parameters of a (t,d)_R driver.

    ``t`` may be left as ``None`` to take the declared value of the digit
    table; a larger ``t`` is allowed (weaker claim), a smaller one is not.
    """

    d: int
    R: Level = INF
    b: int = 2
    t: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "R", parse_level(self.R))
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.b != 2:
            raise ValueError("only base-2 drivers are shipped (b=%r)" % self.b)
        if self.t is not None and self.t < 0:
            raise ValueError("t must be >= 0")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class DriverPoint:
    proposal: Tuple[float, ...]
    accept: float


# -- digit tables -------------------------------------------------------------

@dataclass(frozen=True)
class DimensionEntry:
    dim: int
    degree: int
    a: int
    m: Tuple[int, ...]


def _direction_integers(entry: DimensionEntry) -> np.ndarray:
    """Columns of the generating matrix as MAX_DIGITS-bit integers."""
    e = entry.degree
    if e == 0:
        m = [1] * MAX_DIGITS
    else:
        m = list(entry.m)
        for k in range(e, MAX_DIGITS):
            new = m[k - e] ^ (m[k - e] << e)
            for j in range(1, e):
                if (entry.a >> (e - 1 - j)) & 1:
                    new ^= m[k - j] << j
            m.append(new)
    return np.array([m[k] << (MAX_DIGITS - 1 - k) for k in range(MAX_DIGITS)], dtype=np.uint64)


@dataclass(frozen=True)
class DigitTable:
    """Generating matrices of a base-2 digital (t,s)-sequence.

    ``t`` is the Sobol' bound ``sum(max(e_j, 1) - 1)`` over the selected
    dimensions. It is a claim; ``verify_net`` is what checks it.
    """

    entries: Tuple[DimensionEntry, ...]
    columns: np.ndarray = field(repr=False, compare=False)
    b: int = 2

    @classmethod
    def from_entries(cls, entries: Sequence[DimensionEntry]) -> "DigitTable":
        entries = tuple(entries)
        if not entries:
            raise ValueError("empty digit table")
        cols = np.stack([_direction_integers(e) for e in entries], axis=1)
        return cls(entries, cols)

    @classmethod
    def from_file(cls, path, dims: Optional[Sequence[int]] = None) -> "DigitTable":
        """Load a whitespace-separated direction-number file.

        One dimension per line: ``dim degree a m_1 ... m_degree``; ``#``
        starts a comment. ``dims`` selects 1-based dimension indices.
        """
        with open(path) as fh:
            entries = parse_direction_lines(fh)
        return cls.from_entries(_select(entries, dims))

    @classmethod
    def shipped(cls, s: int, skip: int = 0) -> "DigitTable":
        """Dimensions ``skip+1 .. skip+s`` of the bundled Sobol' table."""
        entries = _shipped_entries()
        if skip + s > len(entries):
            raise ValueError("shipped table has only %d dimensions" % len(entries))
        return cls.from_entries(entries[skip:skip + s])

    @property
    def s(self) -> int:
        return len(self.entries)

    @property
    def t(self) -> int:
        return sum(max(e.degree, 1) - 1 for e in self.entries)


def parse_direction_lines(lines) -> list:
    entries = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            fields = [int(tok) for tok in line.split()]
        except ValueError:
            raise ValueError("line %d: non-integer field" % lineno) from None
        if len(fields) < 3:
            raise ValueError("line %d: need at least dim, degree, a" % lineno)
        dim, degree, a, *m = fields
        if len(m) != degree:
            raise ValueError("line %d: expected %d direction integers, got %d" % (lineno, degree, len(m)))
        for k, mk in enumerate(m, 1):
            if mk % 2 == 0 or mk >= 2**k:
                raise ValueError("line %d: m_%d=%d must be odd and < 2^%d" % (lineno, k, mk, k))
        if degree and a >= 2 ** (degree - 1):
            raise ValueError("line %d: polynomial code a=%d too large" % (lineno, a))
        entries.append(DimensionEntry(dim, degree, a, tuple(m)))
    return entries


def _select(entries, dims):
    if dims is None:
        return entries
    by_dim = {e.dim: e for e in entries}
    try:
        return [by_dim[j] for j in dims]
    except KeyError as exc:
        raise ValueError("dimension %s not in table" % exc.args[0]) from None


_SHIPPED = None


def _shipped_entries():
    global _SHIPPED
    if _SHIPPED is None:
        text = resources.files("qmcanneal").joinpath("data/sobol_dirnums.txt").read_text()
        _SHIPPED = parse_direction_lines(text.splitlines())
    return _SHIPPED


def ts_points(table: DigitTable, start: int, count: int) -> np.ndarray:
    """Points ``start .. start+count-1`` of the underlying sequence."""
    if start < 0 or count < 0:
        raise ValueError("need start >= 0 and count >= 0")
    stop = start + count
    if stop > 2**MAX_DIGITS:
        raise DigitCapacityError("index %d exceeds %d-digit capacity" % (stop - 1, MAX_DIGITS))
    n = np.arange(start, stop, dtype=np.uint64)
    acc = np.zeros((count, table.s), dtype=np.uint64)
    nbits = max(stop - 1, 0).bit_length()
    one = np.uint64(1)
    for k in range(nbits):
        bit = (n >> np.uint64(k)) & one
        acc ^= bit[:, None] * table.columns[k][None, :]
    return acc.astype(np.float64) * 2.0 ** -MAX_DIGITS


def ts_point(table: DigitTable, n: int) -> np.ndarray:
    """The ``n``-th point of the deterministic sequence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return ts_points(table, n, 1)[0]


# -- R-digit randomisation ------------------------------------------------------

def truncate_randomize(u_inf, R: Level, b: int, noise):
    """Keep the first ``R`` base-``b`` digits of ``u_inf``; fill the rest with noise.

    Works elementwise on scalars or arrays. The result never leaves the
    b-ary interval of width ``b**-R`` that contains ``u_inf``.
    """
    R = parse_level(R)
    if math.isinf(R):
        return u_inf
    if R == 0:
        return noise
    scale = float(b) ** R
    cell = np.floor(np.asarray(u_inf, dtype=np.float64) * scale) / scale
    out = cell + np.asarray(noise, dtype=np.float64) / scale
    upper = cell + 1.0 / scale
    # rounding can land exactly on the next digit boundary
    out = np.where(out >= upper, np.nextafter(upper, 0.0), out)
    if np.ndim(out) == 0:
        return float(out)
    return out


def uniform_noise(seed: int, start: int, count: int, width: int) -> np.ndarray:
    """Uniforms on [0,1) keyed by (seed, row, column).

    Row ``n``, column ``i`` is raw draw ``n*width + i`` of a Philox stream
    keyed by ``seed``, so any block can be regenerated independently.
    """
    first = start * width
    total = count * width
    gen = np.random.Philox(key=int(seed))
    gen.advance(first // 4)
    off = first % 4
    raw = gen.random_raw(off + total)[off:]
    return ((raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53).reshape(count, width)


class SequenceDriver:
    """Stateful source of driver points ``u^1, u^2, ...``.

    Index 0 is never emitted. Each point has ``d`` proposal coordinates from
    table dimensions 2..d+1 and one acceptance coordinate from dimension 1.
    """

    def __init__(self, config: DriverConfig, table: Optional[DigitTable] = None):
        self.config = config
        self.accept_table = DigitTable.shipped(1)
        self.table = table if table is not None else DigitTable.shipped(config.d, skip=1)
        if self.table.s != config.d:
            raise ValueError("table has %d dimensions, driver needs %d" % (self.table.s, config.d))
        if config.t is not None and config.t < self.table.t:
            raise ValueError("t=%d is below the table's declared t=%d" % (config.t, self.table.t))
        self.t = self.table.t if config.t is None else config.t
        self.index = 1

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def R(self) -> Level:
        return self.config.R

    def points(self, start: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Driver points with indices ``start .. start+count-1`` (stateless)."""
        cfg = self.config
        prop_inf = ts_points(self.table, start, count)
        acc_inf = ts_points(self.accept_table, start, count)[:, 0]
        if math.isinf(cfg.R):
            return prop_inf, acc_inf
        noise = uniform_noise(cfg.seed, start, count, cfg.d + 1)
        prop = truncate_randomize(prop_inf, cfg.R, cfg.b, noise[:, :cfg.d])
        acc = truncate_randomize(acc_inf, cfg.R, cfg.b, noise[:, cfg.d])
        return np.asarray(prop).reshape(count, cfg.d), np.asarray(acc).reshape(count)

    def take(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        prop, acc = self.points(self.index, count)
        self.index += count
        return prop, acc

    def next_driver_point(self) -> DriverPoint:
        prop, acc = self.take(1)
        return DriverPoint(tuple(float(v) for v in prop[0]), float(acc[0]))

    __next__ = next_driver_point

    def __iter__(self):
        return self


# -- nets ---------------------------------------------------------------------

@dataclass(frozen=True)
class NetCheck:
    passed: bool
    box: Optional[Tuple[Tuple[int, int], ...]] = None  # ((a_j, d_j), ...) of a bad box
    count: Optional[int] = None

    def __bool__(self):
        return self.passed


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All tuples of ``parts`` non-negative ints summing to ``total``."""
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def verify_net(points, params: NetParams) -> NetCheck:
    """Check the (t,m,s)-net property by counting points in every b-ary box."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    b, t, m, s = params.b, params.t, params.m, params.s
    if pts.shape != (b**m, s):
        raise ValueError("expected %d points in dimension %d, got shape %s" % (b**m, s, pts.shape))
    if np.any(pts < 0.0) or np.any(pts >= 1.0):
        raise ValueError("points must lie in [0,1)^s")
    want = b**t
    for shape in compositions(m - t, s):
        box = np.zeros(len(pts), dtype=np.int64)
        for j, dj in enumerate(shape):
            digits = np.floor(pts[:, j] * float(b) ** dj).astype(np.int64)
            box = box * b**dj + digits
        counts = np.bincount(box, minlength=b ** (m - t))
        bad = np.flatnonzero(counts != want)
        if bad.size:
            idx = int(bad[0])
            coords = []
            for dj in reversed(shape):
                idx, a = divmod(idx, b**dj)
                coords.append((a, dj))
            return NetCheck(False, tuple(reversed(coords)), int(counts[bad[0]]))
    return NetCheck(True)


# -- index sequences ---------------------------------------------------------------

def _next_power(n: int, b: int) -> int:
    p = 1
    while p <= n:
        p *= b
    return p


def block_indices(n: int, b: int, d: int, R: Level, t: int) -> Tuple[int, Optional[int]]:
    """``(k_n, r_n)`` with ``b^(k_n-1) <= n < b^k_n`` and
    ``(r_n-1) b^(dR+t) <= n < r_n b^(dR+t)``; ``r_n`` is None for R = inf."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k, p = 0, 1
    while p <= n:
        p *= b
        k += 1
    R = parse_level(R)
    if math.isinf(R):
        return k, None
    return k, n // b ** (d * R + t) + 1


def next_boundary(n: int, b: int, d: int, R: Level, t: int) -> int:
    """``min(b^k_n, r_n b^(dR+t))``: the first candidate boundary above ``n``."""
    R = parse_level(R)
    if math.isinf(R):
        raise ValueError("block boundaries are undefined for R = inf")
    step = b ** (d * R + t)
    return min(_next_power(n, b), (n // step + 1) * step)


def kRm_boundaries(b: int, d: int, R: Level, t: int, limit: int) -> list:
    """All ``k_{R,m} <= limit`` in increasing order, starting at ``k_{R,0} = 1``."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = [1]
    # the candidate value is constant on [n, next_boundary(n)), so hop
    n = 1
    while True:
        nxt = next_boundary(n, b, d, R, t)
        if nxt > limit:
            return out
        out.append(nxt)
        n = nxt


def block_end(n: int, b: int, d: int, R: Level, t: int) -> int:
    """Smallest ``k_{R,m} >= n``: the right end of the block holding ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1
    return next_boundary(n - 1, b, d, R, t)


# -- small-value bound on the acceptance coordinate ----------------------------------

@dataclass(frozen=True)
class Lemma1Result:
    passed: bool
    burn_in: int          # last index violating the bound (0 if none)
    violations: int
    first_violation: Optional[int] = None

    def __bool__(self):
        return self.passed


def lemma1_check(b: int, R: Level, N: int, alpha: float, seed: int = 0,
                 burn_in_limit: Optional[int] = None) -> Lemma1Result:
    """Check that the acceptance coordinate stays away from 0.

    R = inf: ``u^n >= b^-k_n`` for every ``1 <= n <= N`` (a deterministic
    bound, no burn-in). Finite R: ``u^n >= n^-(1+alpha)`` is required for
    all ``n`` beyond ``burn_in_limit`` (default ``N // 2``); the reported
    burn-in is the last violating index.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    R = parse_level(R)
    n = np.arange(1, N + 1, dtype=np.int64)
    u_inf = radical_inverse_array(n, b)
    if math.isinf(R):
        bound = np.power(float(b), -_k_array(n, b).astype(np.float64))
        bad = np.flatnonzero(u_inf < bound)
        if bad.size:
            return Lemma1Result(False, int(n[bad[-1]]), int(bad.size), int(n[bad[0]]))
        return Lemma1Result(True, 0, 0)
    u = truncate_randomize(u_inf, R, b, uniform_noise(seed, 1, N, 1)[:, 0])
    bad = np.flatnonzero(np.asarray(u) < np.power(n.astype(np.float64), -(1.0 + alpha)))
    limit = N // 2 if burn_in_limit is None else burn_in_limit
    if not bad.size:
        return Lemma1Result(True, 0, 0)
    last = int(n[bad[-1]])
    return Lemma1Result(last <= limit, last, int(bad.size), int(n[bad[0]]))


def _k_array(n: np.ndarray, b: int) -> np.ndarray:
    k = np.zeros(n.shape, dtype=np.int64)
    p = np.ones(n.shape, dtype=np.int64)
    while np.any(p <= n):
        grow = p <= n
        p[grow] *= b
        k[grow] += 1
    return k
