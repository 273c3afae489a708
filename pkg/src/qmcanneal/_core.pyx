# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same API and arithmetic order as ``_pycore``."""
import numpy as np

from libc.math cimport atan, tan, log1p, expm1, exp, cos, fabs, isfinite, isinf, M_PI
from scipy.special.cython_special cimport ndtr, ndtri, stdtr

STUDENT = 0
ASA = 1

BISECT_TOL = 1e-12
BISECT_MAXITER = 200

cdef double _TOL = 1e-12
cdef int _MAXITER = 200
cdef double _SIX_PI = 6.0 * M_PI


cdef inline double _clamp01(double y) nogil:
    if y < 0.0:
        return 0.0
    if y > 1.0:
        return 1.0
    return y


cdef inline double _cauchy_cdf(double x, double s, double y) nogil:
    cdef double lo = atan(-x / s)
    cdef double hi = atan((1.0 - x) / s)
    return (atan((y - x) / s) - lo) / (hi - lo)


cdef inline double _cauchy_inv(double x, double s, double u) nogil:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    cdef double lo = atan(-x / s)
    cdef double hi = atan((1.0 - x) / s)
    return _clamp01(x + s * tan(lo + u * (hi - lo)))


cdef inline double _gauss_cdf(double x, double s, double y) nogil:
    cdef double lo = ndtr(-x / s)
    cdef double hi = ndtr((1.0 - x) / s)
    return (ndtr((y - x) / s) - lo) / (hi - lo)


cdef inline double _gauss_inv(double x, double s, double u) nogil:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    cdef double lo = ndtr(-x / s)
    cdef double hi = ndtr((1.0 - x) / s)
    return _clamp01(x + s * ndtri(lo + u * (hi - lo)))


cdef inline double _tdist_cdf(double x, double nu, double s, double y) nogil:
    cdef double lo = stdtr(nu, -x / s)
    cdef double hi = stdtr(nu, (1.0 - x) / s)
    return (stdtr(nu, (y - x) / s) - lo) / (hi - lo)


cdef double _tdist_inv(double x, double nu, double s, double u) nogil:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    cdef double lo = stdtr(nu, -x / s)
    cdef double hi = stdtr(nu, (1.0 - x) / s)
    cdef double mass = hi - lo
    cdef double a = 0.0, b = 1.0, mid = 0.5, f, nxt
    cdef int it
    for it in range(_MAXITER):
        mid = 0.5 * (a + b)
        f = (stdtr(nu, (mid - x) / s) - lo) / mass - u
        if fabs(f) <= _TOL:
            break
        if f < 0.0:
            a = mid
        else:
            b = mid
        nxt = 0.5 * (a + b)
        if not (a < nxt and nxt < b):
            break
    return mid


cdef inline double _student_cdf(double x, double nu, double s, double y) nogil:
    if nu == 1.0:
        return _cauchy_cdf(x, s, y)
    if isinf(nu):
        return _gauss_cdf(x, s, y)
    return _tdist_cdf(x, nu, s, y)


cdef inline double _student_inv(double x, double nu, double s, double u) nogil:
    if nu == 1.0:
        return _cauchy_inv(x, s, u)
    if isinf(nu):
        return _gauss_inv(x, s, u)
    return _tdist_inv(x, nu, s, u)


cdef inline double _asa_tilde_cdf(double x, double s, double y, double logn) nogil:
    cdef double z = y - x
    if z > 0.0:
        return 0.5 + 0.5 * log1p(z / s) / logn
    if z < 0.0:
        return 0.5 - 0.5 * log1p(-z / s) / logn
    return 0.5


cdef inline double _asa_cdf(double x, double s, double y) nogil:
    cdef double logn = log1p(1.0 / s)
    cdef double lo = _asa_tilde_cdf(x, s, 0.0, logn)
    cdef double hi = _asa_tilde_cdf(x, s, 1.0, logn)
    return (_asa_tilde_cdf(x, s, y, logn) - lo) / (hi - lo)


cdef inline double _asa_inv(double x, double s, double u) nogil:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    cdef double logn = log1p(1.0 / s)
    cdef double lo = _asa_tilde_cdf(x, s, 0.0, logn)
    cdef double hi = _asa_tilde_cdf(x, s, 1.0, logn)
    cdef double v = lo + u * (hi - lo)
    cdef double w = 2.0 * v - 1.0
    cdef double g
    if w > 0.0:
        g = s * expm1(w * logn)
    elif w < 0.0:
        g = -s * expm1(-w * logn)
    else:
        g = 0.0
    return _clamp01(x + g)


cdef double _builtin(int code, double[::1] y) nogil:
    cdef Py_ssize_t i, d = y.shape[0]
    cdef double acc = 0.0, z, dist, pen
    if code == 0:
        for i in range(d):
            z = y[i] - 0.5
            acc += z * z
        return -acc
    if code == 1:
        for i in range(d):
            z = y[i] - 0.5
            acc += z * z - 0.1 * cos(_SIX_PI * z) + 0.1
        return -acc
    dist = 0.0
    for i in range(d):
        z = fabs(y[i] - 0.5)
        if z > dist:
            dist = z
    if dist <= 0.1:
        return -dist
    pen = 0.0
    if y[0] > 0.75:
        pen += 0.1
    for i in range(d):
        if (<long>(10.0 * y[i])) % 2 == 1:
            pen += 0.05
    return -0.2 - pen


def cauchy_cdf(double x, double s, double y):
    return _cauchy_cdf(x, s, y)


def cauchy_inv_cdf(double x, double s, double u):
    return _cauchy_inv(x, s, u)


def gauss_cdf(double x, double s, double y):
    return _gauss_cdf(x, s, y)


def gauss_inv_cdf(double x, double s, double u):
    return _gauss_inv(x, s, u)


def tdist_cdf(double x, double nu, double s, double y):
    return _tdist_cdf(x, nu, s, y)


def tdist_inv_cdf(double x, double nu, double s, double u):
    return _tdist_inv(x, nu, s, u)


def student_cdf(double x, double nu, double s, double y):
    return _student_cdf(x, nu, s, y)


def student_inv_cdf(double x, double nu, double s, double u):
    return _student_inv(x, nu, s, u)


def asa_cdf(double x, double s, double y):
    return _asa_cdf(x, s, y)


def asa_inv_cdf(double x, double s, double u):
    return _asa_inv(x, s, u)


def builtin_objective(int code, y):
    if code < 0 or code > 2:
        raise ValueError("unknown builtin objective code %r" % code)
    cdef double[::1] buf = np.ascontiguousarray(y, dtype=np.float64)
    return _builtin(code, buf)


def run_chain(x0, double phi0, proposal, accept, sigma, temp, int family,
              double nu, objective):
    """Run the annealing recursion over pre-drawn driver points.

    Row ``k`` of ``proposal``/``accept``/``sigma``/``temp`` feeds iteration
    ``n = k + 1``. Returns ``(xs, ys, values, best, accepted, probs, best_x)``.
    """
    cdef double[:, ::1] prop = np.ascontiguousarray(proposal, dtype=np.float64)
    cdef double[::1] acc_u = np.ascontiguousarray(accept, dtype=np.float64)
    cdef double[:, ::1] sig = np.ascontiguousarray(sigma, dtype=np.float64)
    cdef double[::1] temps = np.ascontiguousarray(temp, dtype=np.float64)
    cdef Py_ssize_t n_steps = prop.shape[0], d = prop.shape[1], k, i

    xs_arr = np.empty((n_steps, d))
    ys_arr = np.empty((n_steps, d))
    values_arr = np.empty(n_steps)
    best_arr = np.empty(n_steps)
    accepted_arr = np.zeros(n_steps, dtype=np.uint8)
    probs_arr = np.empty(n_steps)
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] ys = ys_arr
    cdef double[::1] values = values_arr
    cdef double[::1] best = best_arr
    cdef unsigned char[::1] accepted = accepted_arr
    cdef double[::1] probs = probs_arr

    x_arr = np.array(x0, dtype=np.float64)
    y_arr = np.zeros(d)
    bx_arr = x_arr.copy()
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef double[::1] best_x = bx_arr

    cdef int code = getattr(objective, "code", -1)
    cdef double phi_x = phi0, phi_y, best_v = phi0, delta, a_n

    for k in range(n_steps):
        if family == 0:
            for i in range(d):
                y[i] = _student_inv(x[i], nu, sig[k, i], prop[k, i])
        else:
            for i in range(d):
                y[i] = _asa_inv(x[i], sig[k, i], prop[k, i])
        if code >= 0:
            phi_y = _builtin(code, y)
        else:
            phi_y = float(objective(y_arr.copy()))
        if not isfinite(phi_y):
            raise ValueError("objective returned a non-finite value at n=%d" % (k + 1))
        delta = phi_y - phi_x
        if delta >= 0.0:
            a_n = 1.0
        else:
            a_n = exp(delta / temps[k])
        probs[k] = a_n
        if acc_u[k] <= a_n:
            accepted[k] = 1
            for i in range(d):
                x[i] = y[i]
            phi_x = phi_y
            if phi_x > best_v:
                best_v = phi_x
                for i in range(d):
                    best_x[i] = x[i]
        for i in range(d):
            xs[k, i] = x[i]
            ys[k, i] = y[i]
        values[k] = phi_x
        best[k] = best_v
    return xs_arr, ys_arr, values_arr, best_arr, accepted_arr, probs_arr, bx_arr
