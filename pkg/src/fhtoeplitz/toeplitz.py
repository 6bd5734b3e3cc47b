"""
Fourier coefficients of symbols and finite Toeplitz sections.

Coefficients are stored center-indexed: for a section of size ``n`` the array
``coeffs`` has length ``2n - 1`` and ``coeffs[k + n - 1]`` is ``t_k``, the
coefficient of ``z**k`` in the symbol. Entry ``(j, k)`` of the matrix is
``t_{j-k}``, so ``t_1, t_2, ...`` fill the diagonals below the main one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.fft
from scipy.special import loggamma, rgamma

from . import symbols as sym
from .errors import (DimensionMismatch, GridTooCoarse, LengthMismatch,
                     ParameterOutOfRange)

__all__ = [
    "ToeplitzMatrix", "DecayReport", "build", "densify", "matvec",
    "fourier_coefficients", "gamma_coefficient", "reciprocal_gamma",
    "decay_check", "toeplitz_from_symbol", "write_coefficients",
    "read_coefficients",
]

SMOOTH_TOL = 1e-10
SINGULAR_TOL = 1e-7
DEFAULT_MIN_M = 8192


# ---------------------------------------------------------------------------
# closed form for the singular family
# ---------------------------------------------------------------------------

def _is_pole(x):
    x = np.asarray(x, dtype=complex)
    re = x.real
    return (x.imag == 0) & (re <= 0) & (re == np.round(re))


def reciprocal_gamma(x):
    """``1/Gamma(x)``, exactly zero at the poles ``x = 0, -1, -2, ...``."""
    x = np.asarray(x, dtype=complex)
    out = np.where(_is_pole(x), 0j, rgamma(x))
    return out[()] if out.ndim == 0 else out


def gamma_coefficient(alpha, beta, k):
    r"""Closed-form Fourier coefficient of the singular symbol.

    .. math::

        t_k = (-1)^k \frac{\Gamma(2\alpha+1)}{\Gamma(\alpha+\beta+1-k)\,\Gamma(\alpha-\beta+1+k)}

    Built from reciprocal Gamma values so that a pole in either denominator
    factor gives an exact zero. For large ``|k|`` the product is formed in
    log space to avoid ``inf * 0``.
    """
    alpha, beta = complex(alpha), complex(beta)
    if not (2 * alpha + 1).real > 0:
        raise ParameterOutOfRange("alpha", "Re(2 alpha + 1) > 0", alpha)
    k = np.asarray(k)
    kf = k.astype(float)
    x1 = alpha + beta + 1 - kf
    x2 = alpha - beta + 1 + kf
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        g = complex(np.exp(loggamma(2 * alpha + 1)))
        direct = sign * g * reciprocal_gamma(x1) * reciprocal_gamma(x2)
        logged = sign * np.exp(loggamma(2 * alpha + 1) - loggamma(x1 + 0j)
                               - loggamma(x2 + 0j))
    out = np.where(np.isfinite(direct), direct, logged)
    out = np.where(_is_pole(x1) | _is_pole(x2), 0j, out)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _trapezoid(spec, n, m, shift):
    """Offset trapezoid rule on ``m`` nodes; returns t_{-(n-1)}..t_{n-1}."""
    phi = sym.grid_rotation(spec)
    theta0 = phi + 2 * np.pi * (0.5 + shift) / m
    nodes = np.exp(1j * (theta0 + 2 * np.pi * np.arange(m) / m))
    vals = sym.evaluate(spec, nodes)
    spectrum = scipy.fft.fft(vals) / m
    ks = np.arange(-(n - 1), n)
    return spectrum[ks % m] * np.exp(-1j * ks * theta0)


def _grid_shift(spec, m):
    nodes = sym.grid_nodes(spec, m)
    phi = sym.grid_rotation(spec)
    first = np.angle(nodes[0] * np.exp(-1j * phi)) % (2 * np.pi)
    return first * m / (2 * np.pi) - 0.5


def _richardson_exponents(spec):
    """Leading error exponents ``s+1, s+2`` of each singular point, lowest first.

    A singularity ``|theta - theta_s|**s`` sitting at a fixed fractional cell
    position contributes trapezoid errors ``h**(s+1), h**(s+2), ...``.
    """
    exps = []
    for _, s in sym.singular_exponents(spec):
        for p in (s + 1, s + 2):
            p = complex(p)
            if all(abs(p - q) > 1e-12 for q in exps):
                exps.append(p)
    return sorted(exps, key=lambda c: (c.real, c.imag))


def _aligned(spec, coarsest):
    """True if every singular point keeps its fractional cell position on all levels."""
    phi = sym.grid_rotation(spec)
    for angle, _ in sym.singular_exponents(spec):
        cells = ((angle - phi) % (2 * np.pi)) * coarsest / (2 * np.pi)
        if abs(cells - np.round(cells)) > 1e-9:
            return False
    return True


def _extrapolated(spec, n, m, extrapolate=True):
    shift = _grid_shift(spec, m)
    exps = _richardson_exponents(spec) if extrapolate else []
    levels = len(exps) + 1
    while levels > 1 and m // 2 ** (levels - 1) < 2 * n - 1:
        levels -= 1
    if levels == 1 or not _aligned(spec, m // 2 ** (levels - 1)):
        return _trapezoid(spec, n, m, shift)
    table = [_trapezoid(spec, n, m // 2 ** i, shift) for i in range(levels)]
    for p in exps[:levels - 1]:
        f = 2.0 ** p
        table = [(f * table[i] - table[i + 1]) / (f - 1)
                 for i in range(len(table) - 1)]
    return table[0]


def fourier_coefficients(spec, n, m=None, tol=None, extrapolate=True):
    r"""
    Fourier coefficients ``t_k``, ``|k| <= n-1``, of a symbol by quadrature.

    Parameters
    ----------

    spec : SymbolSpec
        Validated symbol.
    n : int
        Section size; ``2n - 1`` coefficients are returned.
    m : int, default=None
        Number of quadrature nodes, at least ``8 n``. Defaults to the smallest
        power of two ``>= 16 n``, and never below ``DEFAULT_MIN_M``.
    tol : float, default=None
        Accepted change of any coefficient when ``m`` is doubled. Defaults to
        ``1e-10`` for smooth symbols and ``1e-7`` otherwise.
    extrapolate : bool, default=True
        Remove the leading algebraic error terms of the singular points by
        Richardson extrapolation over ``m, m/2, m/4, ...``.

    Returns
    -------

    coeffs : numpy.ndarray
        Center-indexed coefficients, ``coeffs[k + n - 1] = t_k``.

    Raises
    ------

    GridTooCoarse
        If doubling ``m`` moves a coefficient by more than ``tol``.
    """
    if n < 1:
        raise ParameterOutOfRange("n", "n >= 1", n)
    if m is None:
        m = max(DEFAULT_MIN_M, 1 << int(np.ceil(np.log2(16 * n))))
    if m < 8 * n:
        raise ParameterOutOfRange("m", "m >= 8 n", m)
    if tol is None:
        tol = SMOOTH_TOL if sym.is_trivial(spec) else SINGULAR_TOL
    coarse = _extrapolated(spec, n, m, extrapolate)
    fine = _extrapolated(spec, n, 2 * m, extrapolate)
    change = float(np.max(np.abs(fine - coarse)))
    if change > tol:
        raise GridTooCoarse(f"doubling m={m} changed coefficients by {change:.3e} > {tol:.1e}")
    return coarse


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToeplitzMatrix:
    """``n x n`` Toeplitz matrix held as its band ``t_{-(n-1)} .. t_{n-1}``."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or len(c) != 2 * self.n - 1:
            raise LengthMismatch(f"need 2n-1 = {2 * self.n - 1} coefficients, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def t(self, k):
        return self.coeffs[np.asarray(k) + self.n - 1]

    @property
    def t0(self) -> complex:
        return complex(self.coeffs[self.n - 1])

    @property
    def shape(self):
        return (self.n, self.n)

    def reversed(self) -> "ToeplitzMatrix":
        """The transpose, i.e. the band with ``t_k <-> t_{-k}``."""
        return ToeplitzMatrix(self.n, self.coeffs[::-1])

    def frobenius_norm(self) -> float:
        k = np.arange(-(self.n - 1), self.n)
        return float(np.sqrt(np.sum((self.n - np.abs(k)) * np.abs(self.coeffs) ** 2)))

    @cached_property
    def _embedding(self):
        n = self.n
        size = scipy.fft.next_fast_len(2 * n - 1)
        col = np.zeros(size, dtype=complex)
        col[:n] = self.coeffs[n - 1:]
        if n > 1:
            col[size - (n - 1):] = self.coeffs[:n - 1]
        return size, scipy.fft.fft(col)

    def dense(self) -> np.ndarray:
        return densify(self)

    def matvec(self, x) -> np.ndarray:
        return matvec(self, x)

    def __matmul__(self, x):
        return matvec(self, x)


def build(coeffs, n) -> ToeplitzMatrix:
    return ToeplitzMatrix(int(n), coeffs)


def densify(T: ToeplitzMatrix) -> np.ndarray:
    """Dense ``n x n`` array with entry ``(j, k) = t_{j-k}``."""
    n = T.n
    j = np.arange(n)
    return T.coeffs[(j[:, None] - j[None, :]) + n - 1]


def matvec(T: ToeplitzMatrix, x) -> np.ndarray:
    """``T @ x`` through a circulant embedding and FFTs, ``O(n log n)``."""
    x = np.asarray(x)
    if x.shape[0] != T.n:
        raise DimensionMismatch(f"vector of length {x.shape[0]} for n = {T.n}")
    size, col_hat = T._embedding
    if x.ndim == 2:
        col_hat = col_hat[:, None]
    y = scipy.fft.ifft(col_hat * scipy.fft.fft(x, n=size, axis=0), axis=0)
    return y[:T.n]


def toeplitz_from_symbol(spec, n, m=None, **kw) -> ToeplitzMatrix:
    """Section ``T_n(a)`` of a validated symbol by quadrature."""
    return build(fourier_coefficients(spec, n, m, **kw), n)


# ---------------------------------------------------------------------------
# decay diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayReport:
    exponent: float
    stderr: float
    tail_partial_sums: tuple
    summable: bool
    all_zero_tail: bool = False


def decay_check(coeffs, zero_tol=1e-14) -> DecayReport:
    """Fit ``|t_k| ~ |k|**(-s)`` over the outer half of the available offsets.

    Coefficients below ``zero_tol * max|t|`` count as zero. A tail without any
    nonzero entry is reported as ``s = inf`` and summable. ``summable`` is
    ``s - 2 stderr > 1``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or len(c) % 2 == 0:
        raise LengthMismatch("center-indexed coefficients need odd length")
    if len(c) < 32:
        raise ParameterOutOfRange("coeffs", "at least 32 coefficients", len(c))
    n = (len(c) + 1) // 2
    k = np.arange(-(n - 1), n)
    mag = np.abs(c)
    sums = tuple(float(np.sum(mag[np.abs(k) <= K]))
                 for K in sorted({*(1 << np.arange(int(np.log2(n - 1)) + 1)), n - 1}))
    floor = zero_tol * max(float(mag.max()), np.finfo(float).tiny)
    outer = (np.abs(k) >= (n - 1) / 2) & (mag > floor)
    if np.count_nonzero(outer) < 3:
        return DecayReport(np.inf, 0.0, sums, True, all_zero_tail=True)
    x = np.log(np.abs(k[outer]))
    y = np.log(mag[outer])
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    dof = max(len(x) - 2, 1)
    sigma2 = float(np.sum((A @ coef - y) ** 2)) / dof
    cov = sigma2 * np.linalg.inv(A.T @ A)
    s = -float(coef[1])
    se = float(np.sqrt(cov[1, 1]))
    return DecayReport(s, se, sums, bool(s - 2 * se > 1))


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def write_coefficients(path, T) -> None:
    """Write ``offset,re,im`` rows for a :class:`ToeplitzMatrix` or center-indexed array."""
    coeffs = T.coeffs if isinstance(T, ToeplitzMatrix) else np.asarray(T, dtype=complex)
    n = (len(coeffs) + 1) // 2
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["offset", "re", "im"])
        for k, c in zip(range(-(n - 1), n), coeffs):
            w.writerow([k, repr(float(c.real)), repr(float(c.imag))])


def read_coefficients(path) -> ToeplitzMatrix:
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    data = {int(r["offset"]): complex(float(r["re"]), float(r["im"])) for r in rows}
    if not data:
        raise LengthMismatch("empty coefficient file")
    n = max(abs(k) for k in data) + 1
    missing = [k for k in range(-(n - 1), n) if k not in data]
    if missing:
        raise LengthMismatch(f"offsets missing from file: {missing[:5]}")
    return build(np.array([data[k] for k in range(-(n - 1), n)]), n)
