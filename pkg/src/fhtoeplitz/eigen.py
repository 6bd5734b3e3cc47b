"""
Dense non-Hermitian eigendecomposition of Toeplitz sections.

The decomposition is delegated to LAPACK ``*geev`` (through
:func:`scipy.linalg.eig`), which balances the matrix before the Hessenberg
reduction and shifted QR iteration. Every returned pair is certified
afterwards: its residual is recomputed with the structured matvec and the
eigenvalue sum is checked against the trace ``n * t_0``.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import CertificationError, ConvergenceFailure, ParameterOutOfRange
from .toeplitz import ToeplitzMatrix, densify, matvec

__all__ = ["EigenPair", "full_spectrum", "match", "residual", "phase_fix",
           "subspace_overlap", "write_spectrum"]

MAX_DENSE_N = 4096
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its unit right vector and, optionally, left vector.

    ``left`` satisfies ``left @ T = eigenvalue * left`` (plain transpose, no
    conjugation). Both vectors are phase-fixed with :func:`phase_fix`.
    """

    eigenvalue: complex
    right: np.ndarray
    residual: float
    left: Optional[np.ndarray] = None
    left_residual: Optional[float] = None


def phase_fix(v):
    """Scale ``v`` to unit 2-norm with its largest-modulus entry positive real."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def residual(T: ToeplitzMatrix, pair) -> float:
    """``||T psi - lambda psi||_2`` through the structured matvec."""
    psi = pair.right if isinstance(pair, EigenPair) else pair[1]
    lam = pair.eigenvalue if isinstance(pair, EigenPair) else pair[0]
    return float(np.linalg.norm(matvec(T, psi) - lam * psi))


def _order(lam):
    ang = np.round(np.angle(lam), 10)
    return np.lexsort((np.abs(lam), ang))


def full_spectrum(T: ToeplitzMatrix, want_left: bool = False, certify: bool = True):
    """All ``n`` eigenpairs of ``T``, sorted by argument then modulus.

    Raises
    ------
    ConvergenceFailure
        if the QR iteration does not converge; ``index`` is the first
        eigenvalue LAPACK reports as unconverged.
    CertificationError
        if a residual exceeds ``1e-8 * ||T||_F`` or the eigenvalue sum misses
        the trace by more than ``1e-8 * n * |t_0| + 1e-10``.
    """
    n = T.n
    if n > MAX_DENSE_N:
        raise ParameterOutOfRange("n", f"n <= {MAX_DENSE_N} for the dense solver", n)
    A = densify(T)
    try:
        if want_left:
            lam, vl, vr = scipy.linalg.eig(A, left=True, right=True)
        else:
            lam, vr = scipy.linalg.eig(A)
            vl = None
    except np.linalg.LinAlgError as exc:
        found = re.search(r"(\d+)", str(exc))
        raise ConvergenceFailure(int(found.group(1)) if found else -1, str(exc)) from exc

    order = _order(lam)
    lam = lam[order]
    right = np.stack([phase_fix(vr[:, i]) for i in order], axis=1)
    res = np.linalg.norm(matvec(T, right) - right * lam[None, :], axis=0)
    if want_left:
        left = np.stack([phase_fix(np.conj(vl[:, i])) for i in order], axis=1)
        lres = np.linalg.norm(matvec(T.reversed(), left) - left * lam[None, :], axis=0)

    if certify:
        bound = RESIDUAL_RTOL * T.frobenius_norm()
        worst = float(res.max(initial=0.0))
        if want_left:
            worst = max(worst, float(lres.max(initial=0.0)))
        if worst > bound:
            raise CertificationError(f"residual {worst:.3e} exceeds {bound:.3e}")
        trace_err = abs(lam.sum() - n * T.t0)
        if trace_err > 1e-8 * n * abs(T.t0) + 1e-10:
            raise CertificationError(f"eigenvalue sum misses the trace by {trace_err:.3e}")

    return [EigenPair(complex(lam[i]), right[:, i], float(res[i]),
                      left[:, i] if want_left else None,
                      float(lres[i]) if want_left else None)
            for i in range(n)]


def match(spectrum, predicted):
    """Index and distance of the eigenvalue closest to ``predicted`` (first on ties)."""
    if len(spectrum) == 0:
        raise ValueError("empty spectrum")
    lam = np.array([p.eigenvalue if isinstance(p, EigenPair) else p for p in spectrum])
    d = np.abs(lam - predicted)
    i = int(np.argmin(d))
    return i, float(d[i])


def subspace_overlap(spectrum, index, vector, cluster_tol=1e-10) -> float:
    """Norm of the projection of unit ``vector`` on the eigenspace of ``spectrum[index]``.

    Eigenvalues within ``cluster_tol * max(1, |lambda|)`` of the selected one
    are taken as one (numerically degenerate) eigenspace; for a simple
    eigenvalue this is ``|<psi, vector>|``.
    """
    lam0 = spectrum[index].eigenvalue
    tol = cluster_tol * max(1.0, abs(lam0))
    cols = [p.right for p in spectrum if abs(p.eigenvalue - lam0) <= tol]
    Q, _ = np.linalg.qr(np.stack(cols, axis=1))
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return float(min(1.0, np.linalg.norm(Q.conj().T @ v)))


def write_spectrum(path, spectrum, vectors_path=None) -> None:
    """``index,re_lambda,im_lambda,residual`` rows, eigenvectors optionally alongside."""
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re_lambda", "im_lambda", "residual"])
        for i, p in enumerate(spectrum):
            w.writerow([i, repr(float(p.eigenvalue.real)),
                        repr(float(p.eigenvalue.imag)), repr(float(p.residual))])
    if vectors_path is not None:
        with open(Path(vectors_path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "j", "re_psi", "im_psi"])
            for i, p in enumerate(spectrum):
                for j, c in enumerate(p.right):
                    w.writerow([i, j, repr(float(c.real)), repr(float(c.imag))])
