"""Product-form proposal kernels on [0,1]^d and their inverse Rosenblatt maps.

Two families are supported, both truncated to the unit interval per
coordinate: Student t random walks (``nu = 1`` is the Cauchy walk,
``nu = inf`` the Gaussian walk) and Ingber's ASA kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from .. import _backend
from ..sequences import Level, block_end, parse_level
from .schedules import ScaleSchedule

_core = _backend.core


def student_constant(nu: float) -> float:
    """Normalising constant c_nu of the standard Student t density."""
    if math.isinf(nu):
        return 1.0 / math.sqrt(2.0 * math.pi)
    return math.exp(math.lgamma((nu + 1) / 2) - math.lgamma(nu / 2)) / math.sqrt(nu * math.pi)


def _student_raw(z: float, nu: float) -> float:
    if math.isinf(nu):
        return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    return student_constant(nu) * (1.0 + z * z / nu) ** (-(nu + 1) / 2)


def _student_tail(z: float, nu: float) -> float:
    if nu == 1.0:
        return 0.5 + math.atan(z) / math.pi
    if math.isinf(nu):
        return float(special.ndtr(z))
    return float(special.stdtr(nu, z))


def student_mass(x: float, nu: float, sigma: float) -> float:
    """Probability that t_nu(x, sigma^2) falls in [0, 1]."""
    return _student_tail((1.0 - x) / sigma, nu) - _student_tail(-x / sigma, nu)


def student_density(y: float, x: float, nu: float, sigma: float) -> float:
    """Density at ``y`` of t_nu(x, sigma^2) truncated to [0, 1]."""
    if y < 0.0 or y > 1.0:
        return 0.0
    return _student_raw((y - x) / sigma, nu) / (sigma * student_mass(x, nu, sigma))


def student_cdf(y: float, x: float, nu: float, sigma: float) -> float:
    return _core.student_cdf(x, float(nu), sigma, y)


def student_inv_cdf(x: float, nu: float, sigma: float, u: float) -> float:
    """Quantile ``u`` of t_nu(x, sigma^2) truncated to [0, 1].

    Closed form for nu = 1 and nu = inf; bisection on the numeric CDF
    (to 1e-12 in probability) otherwise.
    """
    return _core.student_inv_cdf(x, float(nu), sigma, u)


def _asa_tilde_cdf(y: float, x: float, sigma: float) -> float:
    z = y - x
    if z == 0.0:
        return 0.5
    half = 0.5 * math.log1p(abs(z) / sigma) / math.log1p(1.0 / sigma)
    return 0.5 + half if z > 0.0 else 0.5 - half


def asa_mass(x: float, sigma: float) -> float:
    """Mass the untruncated ASA law centred at ``x`` puts on [0, 1]."""
    return _asa_tilde_cdf(1.0, x, sigma) - _asa_tilde_cdf(0.0, x, sigma)


def asa_density(y: float, x: float, sigma: float) -> float:
    if y < 0.0 or y > 1.0:
        return 0.0
    raw = 1.0 / (2.0 * (abs(y - x) + sigma) * math.log1p(1.0 / sigma))
    return raw / asa_mass(x, sigma)


def asa_cdf(y: float, x: float, sigma: float) -> float:
    return _core.asa_cdf(x, sigma, y)


def asa_inv_cdf(x: float, sigma: float, u: float) -> float:
    return _core.asa_inv_cdf(x, sigma, u)


def asa_generator(v: float, sigma: float) -> float:
    """Ingber's map G(v) = sgn(v - 1/2) sigma ((1 + 1/sigma)^|2v-1| - 1)."""
    w = 2.0 * v - 1.0
    return math.copysign(sigma * math.expm1(abs(w) * math.log1p(1.0 / sigma)), w) if w else 0.0


# -- the kernel -------------------------------------------------------------------

STUDENT = "student"
ASA = "asa"


@dataclass(frozen=True)
class KernelSpec:
    """A time-indexed product kernel.

    ``adaptation="blocks"`` holds the kernel fixed on each block
    ``(k_{R,m-1}, k_{R,m}]`` and evaluates it at the block's right end;
    ``block`` then carries ``(b, d, R, t)`` of the driving sequence.
    """

    family: str
    schedules: Tuple[ScaleSchedule, ...]
    nu: float = 1.0
    adaptation: str = "every-step"
    block: Optional[Tuple[int, int, Level, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "schedules", tuple(self.schedules))
        if self.family not in (STUDENT, ASA):
            raise ValueError("unknown kernel family %r" % self.family)
        if not self.schedules:
            raise ValueError("need one schedule per coordinate")
        nu = float(self.nu)
        if self.family == STUDENT and not (math.isinf(nu) or (nu >= 1 and nu.is_integer())):
            raise ValueError("nu must be a positive integer or inf, got %r" % self.nu)
        object.__setattr__(self, "nu", nu)
        if self.adaptation not in ("every-step", "blocks"):
            raise ValueError("adaptation must be 'every-step' or 'blocks'")
        if self.adaptation == "blocks":
            if self.block is None:
                raise ValueError("blocks adaptation needs (b, d, R, t)")
            b, d, R, t = self.block
            R = parse_level(R)
            if math.isinf(R):
                raise ValueError("blocks adaptation is undefined for R = inf")
            object.__setattr__(self, "block", (int(b), int(d), R, int(t)))

    @classmethod
    def student(cls, nu, schedules: Sequence[ScaleSchedule], **kw) -> "KernelSpec":
        return cls(STUDENT, tuple(schedules), nu=nu, **kw)

    @classmethod
    def asa(cls, schedules: Sequence[ScaleSchedule], **kw) -> "KernelSpec":
        return cls(ASA, tuple(schedules), **kw)

    @property
    def d(self) -> int:
        return len(self.schedules)

    def effective_index(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        if self.adaptation == "blocks":
            return block_end(n, *self.block)
        return n

    def effective_indices(self, start: int, count: int) -> np.ndarray:
        """Vectorised ``effective_index`` for ``start .. start+count-1``."""
        if self.adaptation != "blocks":
            return np.arange(start, start + count, dtype=np.int64)
        out = np.empty(count, dtype=np.int64)
        k = 0
        n = start
        while k < count:
            end = block_end(n, *self.block)
            m = min(end - n + 1, count - k)
            out[k:k + m] = end
            k += m
            n += m
        return out

    def sigmas(self, n: int) -> np.ndarray:
        """Per-coordinate scales at the effective index of step ``n``."""
        k = self.effective_index(n)
        return np.array([s.sigma(k) for s in self.schedules])

    def sigma_table(self, start: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
        idx = self.effective_indices(start, count)
        sig = np.stack([s.sigma(idx.astype(np.float64)) for s in self.schedules], axis=1)
        return idx, np.atleast_2d(sig).reshape(count, self.d)


def effective_index(n: int, b: int, d: int, R: Level, t: int) -> int:
    """Right end of the adaptation block containing ``n``."""
    return block_end(n, b, d, R, t)


def _coord_inv(kernel: KernelSpec):
    if kernel.family == STUDENT:
        nu = kernel.nu
        return lambda x, s, u: _core.student_inv_cdf(x, nu, s, u)
    return _core.asa_inv_cdf


def _coord_cdf(kernel: KernelSpec):
    if kernel.family == STUDENT:
        nu = kernel.nu
        return lambda x, s, y: _core.student_cdf(x, nu, s, y)
    return _core.asa_cdf


def _coord_density(kernel: KernelSpec):
    if kernel.family == STUDENT:
        nu = kernel.nu
        return lambda y, x, s: student_density(y, x, nu, s)
    return asa_density


def inv_rosenblatt(kernel: KernelSpec, n: int, x, u) -> np.ndarray:
    """Map unit-cube coordinates ``u`` to a proposal from ``K_n(x, .)``."""
    sig = kernel.sigmas(n)
    inv = _coord_inv(kernel)
    return np.array([inv(float(xi), float(si), float(ui)) for xi, si, ui in zip(x, sig, u)])


def rosenblatt(kernel: KernelSpec, n: int, x, y) -> np.ndarray:
    """Forward transform: coordinate-wise conditional CDFs of ``K_n(x, .)`` at ``y``."""
    sig = kernel.sigmas(n)
    cdf = _coord_cdf(kernel)
    return np.array([cdf(float(xi), float(si), float(yi)) for xi, si, yi in zip(x, sig, y)])


def density(kernel: KernelSpec, n: int, x, y) -> float:
    sig = kernel.sigmas(n)
    dens = _coord_density(kernel)
    out = 1.0
    for xi, yi, si in zip(x, y, sig):
        out *= dens(float(yi), float(xi), float(si))
    return out


# -- explicit constants used by the convergence conditions --------------------------

def tilde_K_coord(family: str, nu: float, sigma: float) -> float:
    """Uniform lower bound on one truncated coordinate density at scale ``sigma``."""
    if family == STUDENT:
        if math.isinf(nu):
            return math.exp(-0.5 / sigma**2) / (sigma * math.sqrt(2.0 * math.pi))
        return student_constant(nu) / sigma * (1.0 + 1.0 / (nu * sigma**2)) ** (-(nu + 1) / 2)
    if family == ASA:
        return 1.0 / (2.0 * (1.0 + sigma) * math.log1p(1.0 / sigma))
    raise ValueError("unsupported kernel family %r" % family)


def tilde_K_lower(kernel: KernelSpec, n: int) -> float:
    """Lower bound on every per-coordinate conditional density of ``K_n``."""
    return min(tilde_K_coord(kernel.family, kernel.nu, float(s)) for s in kernel.sigmas(n))


@lru_cache(maxsize=256)
def mass_lower_bound(family: str, nu: float, sigma: float, grid: int = 41) -> float:
    """inf over x in [0,1] of the untruncated mass on [0,1], by quadrature."""
    if family == STUDENT:
        def mass(x):
            return integrate.quad(lambda y: _student_raw((y - x) / sigma, nu) / sigma, 0.0, 1.0,
                                  points=[x], epsabs=1e-10, epsrel=1e-10, limit=200)[0]
    elif family == ASA:
        lg = math.log1p(1.0 / sigma)

        def mass(x):
            return integrate.quad(lambda y: 1.0 / (2.0 * (abs(y - x) + sigma) * lg), 0.0, 1.0,
                                  points=[x], epsabs=1e-10, epsrel=1e-10, limit=200)[0]
    else:
        raise ValueError("unsupported kernel family %r" % family)
    return min(mass(x) for x in np.linspace(0.0, 1.0, grid))


def lipschitz_constant(kernel: KernelSpec, n: int) -> float:
    """Explicit C_n with |F(x,y) - F(x~,x')| <= delta * C_n on separated balls.

    Student: 8 c_nu / (P_1 sigma_n), which is 8 / (P_1 pi sigma_n) for the
    Cauchy walk. ASA: 4 / (sigma_n log(1 + 1/sigma_n) P_X). P_1 and P_X bound
    the truncation mass from below at the first (largest) scale.
    """
    sig_n = float(min(kernel.sigmas(n)))
    sig_1 = [float(s) for s in kernel.sigmas(1)]
    p = min(mass_lower_bound(kernel.family, kernel.nu, s) for s in sig_1)
    if kernel.family == STUDENT:
        return 8.0 * student_constant(kernel.nu) / (p * sig_n)
    return 4.0 / (sig_n * math.log1p(1.0 / sig_n) * p)
