r"""
Closed-form large-``n`` predictions for the ``l``-th eigenpair.

With :math:`\alpha` the exponent of the singular point,

.. math::

    p^l = \frac{2\pi l}{n} + i(2\alpha+1)\frac{\log n}{n}, \qquad
    E^l = a\big(e^{-ip^l}\big), \qquad \psi^l_j \propto e^{i p^l j}.

The family-specific ``eigenvalue_*`` functions evaluate :math:`E^l` at the
truncated momentum :math:`2\pi l/n`, i.e. at :math:`w = e^{-2\pi i l/n}` on the
circle. :func:`eigenvalue_full` keeps the logarithmic term and needs the
analytic continuation of the symbol slightly off the circle.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import symbols as sym
from .eigen import phase_fix
from .errors import EvaluationAtSingularity, ParameterOutOfRange, SingularDesign
from .symbols import SymbolKind, SymbolSpec

__all__ = [
    "AsymptoticPrediction", "CorrectionFit", "momentum", "momentum_truncated",
    "eigenvalue_singular", "eigenvalue_type1", "eigenvalue_type2",
    "eigenvalue_type3", "predicted_eigenvalue", "eigenvalue_full",
    "critical_value", "planewave", "fit_correction", "default_window",
    "predict", "write_predictions",
]

MAX_CONDITION = 1e10


@dataclass(frozen=True)
class AsymptoticPrediction:
    family: str
    l: int
    n: int
    p_l: complex           # full momentum, with the log n / n term
    E_l: complex           # eigenvalue at the truncated momentum 2 pi l / n
    E_full: complex        # symbol continued to exp(-i p_l)
    psi: np.ndarray


@dataclass(frozen=True)
class CorrectionFit:
    A: complex
    B: complex
    z_crit: complex
    residual: float
    window: tuple


def momentum(l, n, alpha) -> complex:
    """``2 pi l / n + i (2 alpha + 1) log(n) / n``; the O(1/n) remainder is dropped."""
    return 2 * np.pi * l / n + 1j * (2 * complex(alpha) + 1) * np.log(n) / n


def momentum_truncated(l, n) -> float:
    return 2 * np.pi * l / n


def _w(l, n):
    return np.exp(-2j * np.pi * l / n)


def eigenvalue_singular(alpha, beta, l, n) -> complex:
    """``(-1)**beta 4**alpha sin(pi l/n)**(2 alpha) exp(-2 i pi beta l/n)``.

    ``(-1)**beta`` means ``e^{i pi beta}``.
    """
    alpha, beta = complex(alpha), complex(beta)
    s = np.sin(np.pi * l / n)
    if s == 0:
        if alpha == 0:
            return complex(np.exp(1j * np.pi * beta))
        return 0j
    return complex(np.exp(1j * np.pi * beta) * 4 ** alpha * complex(s) ** (2 * alpha)
                   * np.exp(-2j * np.pi * beta * l / n))


def eigenvalue_type1(alpha, beta, l, n) -> complex:
    """``[2 - w - 1/w]**(alpha/2) (-1)**beta exp(-2 i pi l/n)**beta``, ``w = exp(-2 pi i l/n)``."""
    alpha, beta = complex(alpha), complex(beta)
    w = _w(l, n)
    base = complex(2 - w - 1 / w)
    if base.real <= 0 and abs(base) < 1e-15:
        return 0j if alpha != 0 else complex(np.exp(1j * np.pi * beta))
    base = complex(base.real, 0.0) if abs(base.imag) < 1e-15 else base
    return complex(base ** (alpha / 2) * np.exp(1j * np.pi * beta)
                   * np.exp(-2j * np.pi * beta * l / n))


def eigenvalue_type2(delta, gamma, z0, b_kind, l, n, b_power=0) -> complex:
    """``(1 - z0/w)**delta (1 - w/z0)**gamma b(w)`` at ``w = exp(-2 pi i l/n)``."""
    delta, gamma, z0 = complex(delta), complex(gamma), complex(z0)
    w = _w(l, n)
    if abs(w - z0) <= sym.SINGULAR_TOL:
        raise EvaluationAtSingularity("exp(-2 pi i l/n) coincides with z0")
    spec = SymbolSpec.type2(delta, gamma, z0, b_kind=b_kind, b_power=b_power)
    b = complex(sym._b_values(spec, np.array([w]))[0])
    return complex((1 - z0 / w) ** delta * (1 - w / z0) ** gamma * b)


def eigenvalue_type3(singularities, c_kind, l, n) -> complex:
    """``prod_j |z_j|**(2 a_j) |w/z_j - 1|**(2 a_j) c(w)`` with ``z_j = exp(-i theta_j)``.

    The singularity locations ``z_j`` are fixed, independent of ``l``.
    """
    w = _w(l, n)
    out = complex(sym._c_values(SymbolSpec.type3((), c_kind), np.array([w]))[0])
    for theta, a in singularities:
        zj = np.exp(-1j * theta)
        if abs(w - zj) <= sym.SINGULAR_TOL:
            raise EvaluationAtSingularity("exp(-2 pi i l/n) coincides with a z_j")
        out *= abs(zj) ** (2 * a) * abs(w / zj - 1) ** (2 * a)
    return out


def predicted_eigenvalue(spec: SymbolSpec, l, n) -> complex:
    """Family dispatch of the truncated-momentum eigenvalue."""
    if spec.kind is SymbolKind.SINGULAR:
        return eigenvalue_singular(spec.alpha, spec.beta, l, n)
    if spec.kind is SymbolKind.TYPE_I:
        return eigenvalue_type1(spec.alpha, spec.beta, l, n)
    if spec.kind is SymbolKind.TYPE_II:
        return eigenvalue_type2(spec.delta, spec.gamma, spec.z0, spec.b_kind, l, n,
                                spec.b_power)
    return eigenvalue_type3(spec.singularities, spec.c_kind, l, n)


def eigenvalue_full(spec: SymbolSpec, l, n) -> complex:
    """``a(exp(-i p_l))`` with the full complex momentum."""
    p = momentum(l, n, sym.effective_alpha(spec))
    return sym.continued(spec, np.exp(-1j * p))


def critical_value(spec: SymbolSpec, l, n) -> complex:
    """``z_crit = a(exp(-i p_l))`` at the full momentum."""
    return eigenvalue_full(spec, l, n)


def planewave(p_l, n) -> np.ndarray:
    """``exp(i p_l j)``, ``j = 0..n-1``, unit-normalized and phase-fixed."""
    j = np.arange(n)
    return phase_fix(np.exp(1j * complex(p_l) * j))


def default_window(n) -> tuple:
    return (n // 8, n // 2)


def fit_correction(psi, z_crit, alpha, window=None) -> CorrectionFit:
    """Least-squares fit of ``psi_j ~ A z_crit**-(j-1) + B (j+1)**(-2 alpha - 1)``.

    ``window`` is a half-open index range ``(start, stop)``, default
    ``(n/8, n/2)``. Columns are scaled before solving (the geometric column
    can span hundreds of decades), so ``A`` may underflow to zero when the
    geometric term is negligible on the window. ``residual`` is the relative
    2-norm misfit on the window.
    """
    psi = np.asarray(psi, dtype=complex)
    n = len(psi)
    start, stop = default_window(n) if window is None else (int(window[0]), int(window[1]))
    if not (0 <= start < stop <= n) or stop - start < 8:
        raise ParameterOutOfRange("window", "8 or more indices within 0..n-1", (start, stop))
    z_crit = complex(z_crit)
    if z_crit == 0:
        raise ParameterOutOfRange("z_crit", "z_crit != 0", z_crit)
    j = np.arange(start, stop, dtype=float)
    log_geo = -(j - 1) * np.log(z_crit)
    shift = float(log_geo.real.max())
    geo = np.exp(log_geo - shift)
    power = (j + 1) ** (-2 * complex(alpha) - 1)
    X = np.stack([geo, power], axis=1)
    scale = np.linalg.norm(X, axis=0)
    Xs = X / scale
    sv = np.linalg.svd(Xs, compute_uv=False)
    if sv[-1] <= sv[0] / MAX_CONDITION:
        raise SingularDesign(f"basis columns collinear on window {start}..{stop}")
    y = psi[start:stop]
    coef, *_ = np.linalg.lstsq(Xs, y, rcond=None)
    res = float(np.linalg.norm(Xs @ coef - y) / np.linalg.norm(y))
    with np.errstate(under="ignore", over="ignore"):
        A = complex(coef[0] / scale[0] * np.exp(-shift))
    B = complex(coef[1] / scale[1])
    return CorrectionFit(A, B, z_crit, res, (start, stop))


def predict(spec: SymbolSpec, l, n) -> AsymptoticPrediction:
    if not 0 <= l < n:
        raise ParameterOutOfRange("l", "0 <= l < n", l)
    p = momentum(l, n, sym.effective_alpha(spec))
    return AsymptoticPrediction(spec.kind.value, int(l), int(n), p,
                                predicted_eigenvalue(spec, l, n),
                                eigenvalue_full(spec, l, n), planewave(p, n))


def write_predictions(path, predictions, full=False) -> None:
    """``family,l,n,re_p,im_p,re_E,im_E`` rows; ``full`` writes ``E_full`` instead of ``E_l``."""
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["family", "l", "n", "re_p", "im_p", "re_E", "im_E"])
        for pr in predictions:
            E = pr.E_full if full else pr.E_l
            w.writerow([pr.family, pr.l, pr.n, repr(float(pr.p_l.real)), repr(float(pr.p_l.imag)),
                        repr(float(E.real)), repr(float(E.imag))])
