"""Pure-Python implementation of the hot kernels.

Mirrors ``_core.pyx`` function for function; ``qmcanneal._backend`` picks
whichever is available at import time. Keep the arithmetic in both files in
the same order so that the two backends agree bit for bit.
"""
import math

import numpy as np
from scipy import special

STUDENT = 0
ASA = 1

BISECT_TOL = 1e-12
BISECT_MAXITER = 200

_SPHERE, _MULTICOS, _STEPMAX = 0, 1, 2
_SIX_PI = 6.0 * math.pi


def _clamp01(y):
    if y < 0.0:
        return 0.0
    if y > 1.0:
        return 1.0
    return y


# -- Cauchy (nu = 1) --------------------------------------------------------

def cauchy_cdf(x, s, y):
    lo = math.atan(-x / s)
    hi = math.atan((1.0 - x) / s)
    return (math.atan((y - x) / s) - lo) / (hi - lo)


def cauchy_inv_cdf(x, s, u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    lo = math.atan(-x / s)
    hi = math.atan((1.0 - x) / s)
    return _clamp01(x + s * math.tan(lo + u * (hi - lo)))


# -- Gaussian (nu = inf) ----------------------------------------------------

def gauss_cdf(x, s, y):
    lo = float(special.ndtr(-x / s))
    hi = float(special.ndtr((1.0 - x) / s))
    return (float(special.ndtr((y - x) / s)) - lo) / (hi - lo)


def gauss_inv_cdf(x, s, u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    lo = float(special.ndtr(-x / s))
    hi = float(special.ndtr((1.0 - x) / s))
    return _clamp01(x + s * float(special.ndtri(lo + u * (hi - lo))))


# -- Student t, general nu --------------------------------------------------

def tdist_cdf(x, nu, s, y):
    lo = float(special.stdtr(nu, -x / s))
    hi = float(special.stdtr(nu, (1.0 - x) / s))
    return (float(special.stdtr(nu, (y - x) / s)) - lo) / (hi - lo)


def tdist_inv_cdf(x, nu, s, u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    lo = float(special.stdtr(nu, -x / s))
    hi = float(special.stdtr(nu, (1.0 - x) / s))
    mass = hi - lo
    a, b = 0.0, 1.0
    mid = 0.5
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (a + b)
        f = (float(special.stdtr(nu, (mid - x) / s)) - lo) / mass - u
        if abs(f) <= BISECT_TOL:
            break
        if f < 0.0:
            a = mid
        else:
            b = mid
        if not a < 0.5 * (a + b) < b:
            break
    return mid


def student_cdf(x, nu, s, y):
    if nu == 1.0:
        return cauchy_cdf(x, s, y)
    if math.isinf(nu):
        return gauss_cdf(x, s, y)
    return tdist_cdf(x, nu, s, y)


def student_inv_cdf(x, nu, s, u):
    if nu == 1.0:
        return cauchy_inv_cdf(x, s, u)
    if math.isinf(nu):
        return gauss_inv_cdf(x, s, u)
    return tdist_inv_cdf(x, nu, s, u)


# -- ASA --------------------------------------------------------------------

def _asa_tilde_cdf(x, s, y, logn):
    # CDF of the untruncated ASA law on [x - 1, x + 1]
    z = y - x
    if z > 0.0:
        return 0.5 + 0.5 * math.log1p(z / s) / logn
    if z < 0.0:
        return 0.5 - 0.5 * math.log1p(-z / s) / logn
    return 0.5


def asa_cdf(x, s, y):
    logn = math.log1p(1.0 / s)
    lo = _asa_tilde_cdf(x, s, 0.0, logn)
    hi = _asa_tilde_cdf(x, s, 1.0, logn)
    return (_asa_tilde_cdf(x, s, y, logn) - lo) / (hi - lo)


def asa_inv_cdf(x, s, u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    logn = math.log1p(1.0 / s)
    lo = _asa_tilde_cdf(x, s, 0.0, logn)
    hi = _asa_tilde_cdf(x, s, 1.0, logn)
    v = lo + u * (hi - lo)
    w = 2.0 * v - 1.0
    if w > 0.0:
        g = s * math.expm1(w * logn)
    elif w < 0.0:
        g = -s * math.expm1(-w * logn)
    else:
        g = 0.0
    return _clamp01(x + g)


# -- builtin objectives -----------------------------------------------------

def builtin_objective(code, y):
    d = len(y)
    acc = 0.0
    if code == _SPHERE:
        for i in range(d):
            z = y[i] - 0.5
            acc += z * z
        return -acc
    if code == _MULTICOS:
        for i in range(d):
            z = y[i] - 0.5
            acc += z * z - 0.1 * math.cos(_SIX_PI * z) + 0.1
        return -acc
    if code == _STEPMAX:
        dist = 0.0
        for i in range(d):
            z = abs(y[i] - 0.5)
            if z > dist:
                dist = z
        if dist <= 0.1:
            return -dist
        pen = 0.0
        if y[0] > 0.75:
            pen += 0.1
        for i in range(d):
            if int(10.0 * y[i]) % 2 == 1:
                pen += 0.05
        return -0.2 - pen
    raise ValueError("unknown builtin objective code %r" % code)


# -- the chain --------------------------------------------------------------

def run_chain(x0, phi0, proposal, accept, sigma, temp, family, nu, objective):
    """Run the annealing recursion over pre-drawn driver points.

    Row ``k`` of ``proposal``/``accept``/``sigma``/``temp`` feeds iteration
    ``n = k + 1``. Returns ``(xs, ys, values, best, accepted, probs, best_x)``.
    """
    n_steps, d = proposal.shape
    xs = np.empty((n_steps, d))
    ys = np.empty((n_steps, d))
    values = np.empty(n_steps)
    best = np.empty(n_steps)
    accepted = np.zeros(n_steps, dtype=np.uint8)
    probs = np.empty(n_steps)

    code = getattr(objective, "code", -1)
    x = [float(v) for v in x0]
    y = [0.0] * d
    phi_x = float(phi0)
    best_v = phi_x
    best_x = list(x)
    prop = proposal.tolist()
    sig = sigma.tolist()
    acc_u = accept.tolist()
    temps = temp.tolist()

    for k in range(n_steps):
        u = prop[k]
        s = sig[k]
        if family == STUDENT:
            for i in range(d):
                y[i] = student_inv_cdf(x[i], nu, s[i], u[i])
        else:
            for i in range(d):
                y[i] = asa_inv_cdf(x[i], s[i], u[i])
        if code >= 0:
            phi_y = builtin_objective(code, y)
        else:
            phi_y = float(objective(np.array(y)))
        if not math.isfinite(phi_y):
            raise ValueError("objective returned a non-finite value at n=%d" % (k + 1))
        delta = phi_y - phi_x
        if delta >= 0.0:
            a_n = 1.0
        else:
            a_n = math.exp(delta / temps[k])
        probs[k] = a_n
        if acc_u[k] <= a_n:
            accepted[k] = 1
            x = list(y)
            phi_x = phi_y
            if phi_x > best_v:
                best_v = phi_x
                best_x = list(x)
        xs[k] = x
        ys[k] = y
        values[k] = phi_x
        best[k] = best_v
    return xs, ys, values, best, accepted, probs, np.array(best_x)
