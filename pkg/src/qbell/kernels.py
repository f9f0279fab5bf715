"""Hot loops: local-rotation tomograms, the two objectives, Nelder-Mead.

Every kernel exists twice.  The ``*_nb`` functions are explicit loops
compiled with numba; the ``*_np`` functions are vectorized numpy.  The simplex
search is one source, compiled (``nelder_mead_nb``) or run as plain Python
(``nelder_mead_py``).  ``QBELL_BACKEND`` picks which set :func:`get_kernels`
hands out; both sets stay importable for benchmarking.

Objective signature: ``fun(x, rho, ints) -> float`` (to be minimized), where
``rho`` is a 9x9 complex array and ``ints`` an int64 array of options.
"""
import math

import numpy as np

from ._backend import HAVE_NUMBA, USE_NUMBA, njit

TWO_PI = 2.0 * math.pi
INV_SQRT2 = 1.0 / math.sqrt(2.0)
LOG2 = math.log(2.0)

# ints layout of the mutual-information objective
MODE_FULL = 0
MODE_ROTATION = 1


# --------------------------------------------------------------------------
# loop kernels (numba)

@njit
def wigner_d_nb(theta, phi, chi, out):
    c = math.cos(theta)
    s = math.sin(theta) * INV_SQRT2
    ep = complex(math.cos(phi), -math.sin(phi))   # e^{-i phi}
    ec = complex(math.cos(chi), -math.sin(chi))   # e^{-i chi}
    epc = ep.conjugate()
    ecc = ec.conjugate()
    out[0, 0] = 0.5 * (1.0 + c) * ep * ec
    out[0, 1] = -s * ep
    out[0, 2] = 0.5 * (1.0 - c) * ep * ecc
    out[1, 0] = s * ec
    out[1, 1] = c
    out[1, 2] = -s * ecc
    out[2, 0] = 0.5 * (1.0 - c) * epc * ec
    out[2, 1] = s * epc
    out[2, 2] = 0.5 * (1.0 + c) * epc * ecc


@njit
def pair_tomogram_nb(rho, d1, d2, w):
    """w[3k+l] = <u_kl| rho |u_kl> with u_kl = d1[:, k] (x) d2[:, l]."""
    u = np.empty(9, dtype=np.complex128)
    for k in range(3):
        for l in range(3):
            for r1 in range(3):
                for r2 in range(3):
                    u[3 * r1 + r2] = d1[r1, k] * d2[r2, l]
            acc = 0.0
            for r in range(9):
                tmp = 0j
                for s in range(9):
                    tmp += rho[r, s] * u[s]
                acc += (u[r].conjugate() * tmp).real
            w[3 * k + l] = acc


@njit
def correlator_nb(w, g1, g2):
    """Portrait correlator omega1 - omega2 - omega3 + omega4."""
    e = 0.0
    for k in range(3):
        for l in range(3):
            if (k == g1) == (l == g2):
                e += w[3 * k + l]
            else:
                e -= w[3 * k + l]
    return e


@njit
def bell_value_nb(x, rho, ints):
    """|Tr(I T)| for x = (theta_a, theta_b, theta_c, theta_d, phi_a, phi_b, phi_c, phi_d)."""
    g1 = ints[0]
    g2 = ints[1]
    da = np.empty((3, 3), dtype=np.complex128)
    db = np.empty((3, 3), dtype=np.complex128)
    dc = np.empty((3, 3), dtype=np.complex128)
    dd = np.empty((3, 3), dtype=np.complex128)
    wigner_d_nb(x[0], x[4], 0.0, da)
    wigner_d_nb(x[1], x[5], 0.0, db)
    wigner_d_nb(x[2], x[6], 0.0, dc)
    wigner_d_nb(x[3], x[7], 0.0, dd)
    w = np.empty(9)
    pair_tomogram_nb(rho, da, dc, w)
    total = correlator_nb(w, g1, g2)
    pair_tomogram_nb(rho, da, dd, w)
    total += correlator_nb(w, g1, g2)
    pair_tomogram_nb(rho, db, dc, w)
    total += correlator_nb(w, g1, g2)
    pair_tomogram_nb(rho, db, dd, w)
    total -= correlator_nb(w, g1, g2)
    return abs(total)


@njit
def neg_bell_nb(x, rho, ints):
    return -bell_value_nb(x, rho, ints)


@njit
def givens_unitary_nb(p, out):
    """U = R01(p0, p1) R02(p2, p3) R12(p4, p5), each a complex plane rotation."""
    for i in range(3):
        for j in range(3):
            out[i, j] = 1.0 if i == j else 0.0
    tmp = np.empty((3, 3), dtype=np.complex128)
    for n in range(3):
        if n == 0:
            j, k = 0, 1
        elif n == 1:
            j, k = 0, 2
        else:
            j, k = 1, 2
        c = math.cos(p[2 * n])
        s = math.sin(p[2 * n])
        e = complex(math.cos(p[2 * n + 1]), math.sin(p[2 * n + 1]))
        # out <- out @ R
        for i in range(3):
            for m in range(3):
                tmp[i, m] = out[i, m]
        for i in range(3):
            out[i, j] = tmp[i, j] * c + tmp[i, k] * e * s
            out[i, k] = -tmp[i, j] * e.conjugate() * s + tmp[i, k] * c


@njit
def mutual_information_nb(w):
    pa = np.zeros(3)
    pb = np.zeros(3)
    for k in range(3):
        for l in range(3):
            v = w[3 * k + l]
            if v > 0.0:
                pa[k] += v
                pb[l] += v
    mi = 0.0
    for k in range(3):
        for l in range(3):
            v = w[3 * k + l]
            if v > 0.0:
                mi += v * math.log(v / (pa[k] * pb[l]))
    return mi / LOG2


@njit
def measured_mi_nb(x, rho, ints):
    ua = np.empty((3, 3), dtype=np.complex128)
    ub = np.empty((3, 3), dtype=np.complex128)
    if ints[0] == MODE_ROTATION:
        wigner_d_nb(x[0], x[1], 0.0, ua)
        wigner_d_nb(x[2], x[3], 0.0, ub)
    else:
        givens_unitary_nb(x[0:6], ua)
        givens_unitary_nb(x[6:12], ub)
    w = np.empty(9)
    pair_tomogram_nb(rho, ua, ub, w)
    return mutual_information_nb(w)


@njit
def neg_mi_nb(x, rho, ints):
    return -measured_mi_nb(x, rho, ints)


# --------------------------------------------------------------------------
# vectorized kernels (numpy)

def wigner_d_np(theta, phi, chi=0.0):
    c = np.cos(theta)
    s = np.sin(theta) * INV_SQRT2
    ep = np.exp(-1j * phi)
    ec = np.exp(-1j * chi)
    return np.array([
        [0.5 * (1 + c) * ep * ec, -s * ep, 0.5 * (1 - c) * ep / ec],
        [s * ec, c, -s / ec],
        [0.5 * (1 - c) * ec / ep, s / ep, 0.5 * (1 + c) / (ep * ec)],
    ])


def pair_tomogram_np(rho, d1, d2):
    u = np.kron(d1, d2)
    return np.einsum("rk,rs,sk->k", u.conj(), rho, u).real


def _sign_matrix(g1, g2):
    on1 = np.arange(3) == g1
    on2 = np.arange(3) == g2
    return np.where(on1[:, None] == on2[None, :], 1.0, -1.0).ravel()


def bell_value_np(x, rho, ints):
    sign = _sign_matrix(ints[0], ints[1])
    da, db, dc, dd = (wigner_d_np(x[i], x[i + 4]) for i in range(4))
    total = 0.0
    for u1, d2, s in ((da, dc, 1), (da, dd, 1), (db, dc, 1), (db, dd, -1)):
        total += s * sign @ pair_tomogram_np(rho, u1, d2)
    return abs(total)


def neg_bell_np(x, rho, ints):
    return -bell_value_np(x, rho, ints)


def givens_unitary_np(p):
    u = np.eye(3, dtype=complex)
    for n, (j, k) in enumerate(((0, 1), (0, 2), (1, 2))):
        r = np.eye(3, dtype=complex)
        c, s, e = np.cos(p[2 * n]), np.sin(p[2 * n]), np.exp(1j * p[2 * n + 1])
        r[j, j] = r[k, k] = c
        r[k, j] = e * s
        r[j, k] = -np.conj(e) * s
        u = u @ r
    return u


def mutual_information_np(w):
    p = np.clip(np.asarray(w, dtype=float).reshape(3, 3), 0.0, None)
    outer = p.sum(axis=1)[:, None] * p.sum(axis=0)[None, :]
    nz = p > 0
    return float(np.sum(p[nz] * np.log2(p[nz] / outer[nz])))


def measured_mi_np(x, rho, ints):
    if ints[0] == MODE_ROTATION:
        ua, ub = wigner_d_np(x[0], x[1]), wigner_d_np(x[2], x[3])
    else:
        ua, ub = givens_unitary_np(x[0:6]), givens_unitary_np(x[6:12])
    return mutual_information_np(pair_tomogram_np(rho, ua, ub))


def neg_mi_np(x, rho, ints):
    return -measured_mi_np(x, rho, ints)


# --------------------------------------------------------------------------
# simplex search

OBJ_NEG_BELL = 0
OBJ_NEG_MI = 1


def evaluate(fun, x, rho, ints):
    """Call objective ``fun``.  In compiled code ``fun`` is an ``OBJ_*`` id."""
    return fun(x, rho, ints)


if HAVE_NUMBA:
    from numba.extending import overload

    @overload(evaluate)
    def _evaluate_compiled(fun, x, rho, ints):
        def impl(fun, x, rho, ints):
            if fun == OBJ_NEG_BELL:
                return neg_bell_nb(x, rho, ints)
            return neg_mi_nb(x, rho, ints)
        return impl


def nelder_mead_py(fun, x0, step, pairs, tol, max_evals, rho, ints):
    """Minimize ``fun(fold(x), rho, ints)`` starting from ``x0``.

    ``fun`` is a Python callable, or an ``OBJ_*`` id for :data:`nelder_mead_nb`.

    ``fold`` wraps every coordinate into [0, 2pi) and, for each
    ``(polar, azimuth)`` index pair in ``pairs``, carries a polar angle above
    pi back across the pole (theta -> 2pi - theta, phi -> phi + pi), which
    names the same direction.  The simplex itself lives in unfolded
    coordinates so wrapping never tears it apart.

    Stops when the spread of simplex values is at most ``tol`` or after
    ``max_evals`` evaluations.  Returns ``(x_best, f_best, n_evals, converged)``
    with ``x_best`` folded.
    """
    n = x0.shape[0]
    npairs = pairs.shape[0]
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    trial = np.empty(n)
    cand = np.empty(n)
    centroid = np.empty(n)
    best_r = np.empty(n)

    for i in range(n + 1):
        for j in range(n):
            sim[i, j] = x0[j]
        if i > 0:
            sim[i, i - 1] += step[i - 1]
    nev = 0
    for i in range(n + 1):
        for j in range(n):
            trial[j] = sim[i, j] % TWO_PI
        for q in range(npairs):
            t = pairs[q, 0]
            if trial[t] > math.pi:
                trial[t] = TWO_PI - trial[t]
                trial[pairs[q, 1]] = (trial[pairs[q, 1]] + math.pi) % TWO_PI
        fs[i] = evaluate(fun, trial, rho, ints)
        nev += 1

    converged = False
    while True:
        # keep the simplex sorted, best first; stable for deterministic ties
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]
        if fs[n] - fs[0] <= tol:
            converged = True
            break
        if nev >= max_evals:
            break
        for j in range(n):
            acc = 0.0
            for i in range(n):
                acc += sim[i, j]
            centroid[j] = acc / n

        # phase: 0 reflect, 1 expand, 2 outside contract, 3 inside contract
        fr = 0.0
        phase = 0
        replaced = False
        while True:
            if phase == 0:
                coef = 1.0
            elif phase == 1:
                coef = 2.0
            elif phase == 2:
                coef = 0.5
            else:
                coef = -0.5
            for j in range(n):
                cand[j] = centroid[j] + coef * (centroid[j] - sim[n, j])
                trial[j] = cand[j] % TWO_PI
            for q in range(npairs):
                t = pairs[q, 0]
                if trial[t] > math.pi:
                    trial[t] = TWO_PI - trial[t]
                    trial[pairs[q, 1]] = (trial[pairs[q, 1]] + math.pi) % TWO_PI
            fc = evaluate(fun, trial, rho, ints)
            nev += 1
            if phase == 0:
                fr = fc
                for j in range(n):
                    best_r[j] = cand[j]
                if fr < fs[0]:
                    phase = 1
                    continue
                if fr < fs[n - 1]:
                    replaced = True
                    break
                phase = 2 if fr < fs[n] else 3
                continue
            if phase == 1:
                if fc < fr:
                    for j in range(n):
                        best_r[j] = cand[j]
                    fr = fc
                replaced = True
                break
            if phase == 2:
                if fc <= fr:
                    for j in range(n):
                        best_r[j] = cand[j]
                    fr = fc
                    replaced = True
                break
            if fc < fs[n]:
                for j in range(n):
                    best_r[j] = cand[j]
                fr = fc
                replaced = True
            break

        if replaced:
            for j in range(n):
                sim[n, j] = best_r[j]
            fs[n] = fr
            continue
        # shrink towards the best vertex
        for i in range(1, n + 1):
            for j in range(n):
                sim[i, j] = sim[0, j] + 0.5 * (sim[i, j] - sim[0, j])
                trial[j] = sim[i, j] % TWO_PI
            for q in range(npairs):
                t = pairs[q, 0]
                if trial[t] > math.pi:
                    trial[t] = TWO_PI - trial[t]
                    trial[pairs[q, 1]] = (trial[pairs[q, 1]] + math.pi) % TWO_PI
            fs[i] = evaluate(fun, trial, rho, ints)
            nev += 1

    for j in range(n):
        trial[j] = sim[0, j] % TWO_PI
    for q in range(npairs):
        t = pairs[q, 0]
        if trial[t] > math.pi:
            trial[t] = TWO_PI - trial[t]
            trial[pairs[q, 1]] = (trial[pairs[q, 1]] + math.pi) % TWO_PI
    return trial.copy(), fs[0], nev, converged


nelder_mead_nb = njit(nelder_mead_py)


_NUMBA_KERNELS = {
    "bell_value": bell_value_nb,
    "neg_bell": OBJ_NEG_BELL,
    "measured_mi": measured_mi_nb,
    "neg_mi": OBJ_NEG_MI,
    "nelder_mead": nelder_mead_nb,
}
_NUMPY_KERNELS = {
    "bell_value": bell_value_np,
    "neg_bell": neg_bell_np,
    "measured_mi": measured_mi_np,
    "neg_mi": neg_mi_np,
    "nelder_mead": nelder_mead_py,
}


def get_kernels(backend=None):
    """Kernel table for ``backend`` ('numba' or 'numpy'); default from the env flag."""
    backend = backend or ("numba" if USE_NUMBA else "numpy")
    if backend == "numba":
        return _NUMBA_KERNELS
    if backend == "numpy":
        return _NUMPY_KERNELS
    raise ValueError(f"unknown backend {backend!r}")


ACTIVE_BACKEND = "numba" if USE_NUMBA else "numpy"
