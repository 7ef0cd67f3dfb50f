"""Gibbs sweep and fold-in kernels.

Two implementations per kernel: a numba ``@njit`` loop and a fallback that
runs without numba. Both consume the same pre-drawn uniforms and accumulate
probabilities in the same order, so they produce identical assignments. Set
``HOPEFEAR_DISABLE_NUMBA=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

NUMBA = "numba"
NUMPY = "numpy"

_DISABLED = os.environ.get("HOPEFEAR_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

DEFAULT_BACKEND = NUMBA if HAVE_NUMBA else NUMPY


def sweep_numpy(words, docs, z, ndk, nkw, nk, alpha, beta, u):
    # Per-token numpy calls on K-length rows are dominated by call overhead,
    # so the fallback works on Python lists and writes the tables back.
    K = nkw.shape[0]
    vbeta = nkw.shape[1] * beta
    ndk_l = ndk.tolist()
    nwk = nkw.T.tolist()
    nk_l = nk.tolist()
    z_l = z.tolist()
    topics = range(K)
    last = K - 1
    for i, (w, d, t) in enumerate(zip(words.tolist(), docs.tolist(), u.tolist())):
        k = z_l[i]
        row = ndk_l[d]
        col = nwk[w]
        row[k] -= 1
        col[k] -= 1
        nk_l[k] -= 1
        cum = []
        acc = 0.0
        for j in topics:
            acc += (row[j] + alpha) * (col[j] + beta) / (nk_l[j] + vbeta)
            cum.append(acc)
        target = t * acc
        k = 0
        while k < last and cum[k] <= target:
            k += 1
        z_l[i] = k
        row[k] += 1
        col[k] += 1
        nk_l[k] += 1
    z[:] = z_l
    ndk[:] = ndk_l
    nkw[:] = np.asarray(nwk, dtype=nkw.dtype).T
    nk[:] = nk_l


def foldin_numpy(words, docs, z, ndk, phi, alpha, u):
    K = phi.shape[0]
    ndk_l = ndk.tolist()
    phi_w = phi.T.tolist()
    z_l = z.tolist()
    topics = range(K)
    last = K - 1
    for i, (w, d, t) in enumerate(zip(words.tolist(), docs.tolist(), u.tolist())):
        k = z_l[i]
        row = ndk_l[d]
        col = phi_w[w]
        row[k] -= 1
        cum = []
        acc = 0.0
        for j in topics:
            acc += (row[j] + alpha) * col[j]
            cum.append(acc)
        target = t * acc
        k = 0
        while k < last and cum[k] <= target:
            k += 1
        z_l[i] = k
        row[k] += 1
    z[:] = z_l
    ndk[:] = ndk_l


if HAVE_NUMBA:
    @njit(cache=True, nogil=True)
    def sweep_numba(words, docs, z, ndk, nkw, nk, alpha, beta, u):
        K = nkw.shape[0]
        vbeta = nkw.shape[1] * beta
        cum = np.empty(K)
        for i in range(words.shape[0]):
            w = words[i]
            d = docs[i]
            k = z[i]
            ndk[d, k] -= 1
            nkw[k, w] -= 1
            nk[k] -= 1
            acc = 0.0
            for j in range(K):
                acc += (ndk[d, j] + alpha) * (nkw[j, w] + beta) / (nk[j] + vbeta)
                cum[j] = acc
            target = u[i] * acc
            k = 0
            while k < K - 1 and cum[k] <= target:
                k += 1
            z[i] = k
            ndk[d, k] += 1
            nkw[k, w] += 1
            nk[k] += 1

    @njit(cache=True, nogil=True)
    def foldin_numba(words, docs, z, ndk, phi, alpha, u):
        K = phi.shape[0]
        cum = np.empty(K)
        for i in range(words.shape[0]):
            w = words[i]
            d = docs[i]
            k = z[i]
            ndk[d, k] -= 1
            acc = 0.0
            for j in range(K):
                acc += (ndk[d, j] + alpha) * phi[j, w]
                cum[j] = acc
            target = u[i] * acc
            k = 0
            while k < K - 1 and cum[k] <= target:
                k += 1
            z[i] = k
            ndk[d, k] += 1
else:
    sweep_numba = None
    foldin_numba = None


def get_sweep(backend: str | None = None):
    backend = backend or DEFAULT_BACKEND
    if backend == NUMBA:
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        return sweep_numba
    if backend == NUMPY:
        return sweep_numpy
    raise ValueError(f"unknown backend {backend!r}")


def get_foldin(backend: str | None = None):
    backend = backend or DEFAULT_BACKEND
    if backend == NUMBA:
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        return foldin_numba
    if backend == NUMPY:
        return foldin_numpy
    raise ValueError(f"unknown backend {backend!r}")
