"""Hot evaluation kernels.

Each kernel has a numba implementation and a pure-numpy twin with the same
signature. The numba path is used when numba imports cleanly, unless the
environment variable ``GROWTHOPS_DISABLE_NUMBA`` is set to a truthy value
("1", "true", "yes"). The flag is read once at import time; use
:func:`use_numba` to switch at runtime (tests and the benchmark do this).
"""

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_ENV_FLAG = "GROWTHOPS_DISABLE_NUMBA"


def _env_disabled():
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


_state = {"numba": _HAVE_NUMBA and not _env_disabled()}


def numba_enabled():
    return _state["numba"]


def use_numba(flag):
    """Select the numba kernels (True) or the numpy fallback (False).

    Returns the previous setting.
    """
    prev = _state["numba"]
    _state["numba"] = bool(flag) and _HAVE_NUMBA
    return prev


# ---------------------------------------------------------------------------
# numpy fallbacks


def _poly_eval_numpy(exps, coeffs, Z):
    # exps (T, N) int64, coeffs (T,) complex128, Z (P, N) complex128 -> (P,)
    if exps.shape[0] == 0:
        return np.zeros(Z.shape[0], dtype=np.complex128)
    out = np.zeros(Z.shape[0], dtype=np.complex128)
    # chunk over points to bound the (P, T, N) temporary
    step = max(1, 2_000_000 // max(1, exps.shape[0] * max(1, exps.shape[1])))
    for s in range(0, Z.shape[0], step):
        zc = Z[s:s + step]
        mon = np.prod(zc[:, None, :] ** exps[None, :, :], axis=2)
        out[s:s + step] = mon @ coeffs
    return out


def _gap_eval_numpy(coeffs, exps, zp):
    # sum_k c_k zp**e_k for large, sparse exponents e_k (float64 to allow q**k)
    out = np.zeros(zp.shape[0], dtype=np.complex128)
    nz = zp != 0
    if np.any(nz):
        logz = np.log(zp[nz])
        out[nz] = np.exp(logz[:, None] * exps[None, :]) @ coeffs
    if np.any(~nz):
        out[~nz] = np.sum(coeffs[exps == 0])
    return out


# ---------------------------------------------------------------------------
# numba kernels

if _HAVE_NUMBA:

    @njit(cache=True)
    def _cpow(z, e):
        # binary exponentiation; exact for small integer exponents
        result = 1.0 + 0.0j
        base = z
        while e > 0:
            if e & 1:
                result *= base
            base *= base
            e >>= 1
        return result

    @njit(cache=True)
    def _poly_eval_numba(exps, coeffs, Z):
        P = Z.shape[0]
        T = exps.shape[0]
        N = exps.shape[1]
        out = np.zeros(P, dtype=np.complex128)
        for i in range(P):
            acc = 0.0 + 0.0j
            for t in range(T):
                m = coeffs[t]
                for d in range(N):
                    e = exps[t, d]
                    if e != 0:
                        m *= _cpow(Z[i, d], e)
                acc += m
            out[i] = acc
        return out

    @njit(cache=True)
    def _gap_eval_numba(coeffs, exps, zp):
        P = zp.shape[0]
        K = coeffs.shape[0]
        out = np.zeros(P, dtype=np.complex128)
        for i in range(P):
            z = zp[i]
            acc = 0.0 + 0.0j
            if z == 0:
                for k in range(K):
                    if exps[k] == 0:
                        acc += coeffs[k]
            else:
                lz = np.log(z)
                for k in range(K):
                    acc += coeffs[k] * np.exp(lz * exps[k])
            out[i] = acc
        return out


def poly_eval(exps, coeffs, Z):
    """Evaluate sum_t coeffs[t] * prod_d Z[:, d]**exps[t, d] at every row of Z."""
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    Z = np.ascontiguousarray(Z, dtype=np.complex128)
    if exps.ndim != 2 or Z.ndim != 2 or (exps.shape[0] and exps.shape[1] != Z.shape[1]):
        raise ValueError("shape mismatch between exponents and points")
    if _state["numba"]:
        return _poly_eval_numba(exps, coeffs, Z)
    return _poly_eval_numpy(exps, coeffs, Z)


def gap_eval(coeffs, exps, zp):
    """Evaluate a one-variable gap series sum_k coeffs[k] * zp**exps[k]."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    exps = np.ascontiguousarray(exps, dtype=np.float64)
    zp = np.ascontiguousarray(zp, dtype=np.complex128)
    if _state["numba"]:
        return _gap_eval_numba(coeffs, exps, zp)
    return _gap_eval_numpy(coeffs, exps, zp)
