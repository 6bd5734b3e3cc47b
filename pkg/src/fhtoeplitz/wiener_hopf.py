r"""
Wiener-Hopf route to Toeplitz eigenvectors.

For a trial eigenvalue ``E`` the shifted symbol :math:`W(z) = a(z) - E` is
sampled on a uniform grid. With ``v`` the winding number of :math:`W` about
the origin, :math:`\log(z^{-v} W)` is single valued on the circle and splits
additively into its nonnegative and negative Fourier modes,

.. math::

    z^{-v} W(z) = \exp\big(G_+(z) + G_-(z)\big), \qquad
    G_+ = [\log(z^{-v} W)]_+, \quad G_- = [\log(z^{-v} W)]_-,

with the constant mode in :math:`G_+`. Sign convention: ``G_+`` here is the
plus part itself, not its negative. For ``v = -1`` the function
:math:`\Psi(z) = k\, e^{-G_+(z)}` satisfies :math:`W \Psi = k z^{-1} e^{G_-}`,
which has no nonnegative modes, so the Taylor coefficients of :math:`\Psi`
solve the semi-infinite Toeplitz system and approximate the eigenvector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import symbols as sym
from .eigen import phase_fix
from .errors import (NonIntegerWinding, ParameterOutOfRange, SymbolVanishesOnCircle,
                     TooCloseToBoundary, UnwrapFailure, WrongWinding)
from .symbols import SymbolSpec

__all__ = ["ShiftedSymbol", "FactorizationResult", "winding_number", "factorize",
           "cauchy_gplus", "eigvec_from_factorization", "write_factorization"]

MIN_MODULUS = 1e-12
MIN_WINDING_M = 1024
WINDING_TOL = 1e-3
# largest accepted argument step between adjacent samples; beyond this the
# sampled curve does not resolve the turning of W around the origin
MAX_ARG_STEP = np.pi / 2
MAX_CAUCHY_RADIUS = 0.95


@dataclass(frozen=True)
class ShiftedSymbol:
    """Samples of ``W(z) = a(z) - E`` at ``z_q = exp(i(theta0 + 2 pi q/m))``."""

    values: np.ndarray
    theta0: float
    E: complex = 0j
    spec: Optional[SymbolSpec] = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or len(vals) < 8 or len(vals) % 2:
            raise ParameterOutOfRange("m", "even m >= 8", len(vals))
        if not np.all(np.isfinite(vals)):
            raise SymbolVanishesOnCircle("non-finite sample of W")
        small = float(np.min(np.abs(vals)))
        if small < MIN_MODULUS:
            raise SymbolVanishesOnCircle(f"min |W| = {small:.3e} < {MIN_MODULUS:.0e}")

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(1j * (self.theta0 + 2 * np.pi * np.arange(self.m) / self.m))

    @classmethod
    def from_spec(cls, spec: SymbolSpec, E, m: int = 4096) -> "ShiftedSymbol":
        spec = sym.validate(spec, wiener_hopf=True)
        nodes = sym.grid_nodes(spec, m)
        return cls(sym.evaluate(spec, nodes) - complex(E), float(np.angle(nodes[0])),
                   complex(E), spec)

    @classmethod
    def from_function(cls, W: Callable, m: int = 4096, offset: float = 0.5) -> "ShiftedSymbol":
        """Sample a vectorized callable ``W`` at ``exp(2 pi i (q + offset)/m)``."""
        theta0 = 2 * np.pi * offset / m
        nodes = np.exp(1j * (theta0 + 2 * np.pi * np.arange(m) / m))
        return cls(np.broadcast_to(np.asarray(W(nodes), dtype=complex), (m,)), theta0)


@dataclass(frozen=True)
class FactorizationResult:
    """Additive split of ``log(z^{-v} W)``.

    ``gplus[k]`` is the mode ``g_k``, ``k = 0 .. m/2 - 1``; ``gminus[k - 1]`` is
    ``g_{-k}``, ``k = 1 .. m/2``. ``k_const = exp(g_0)`` normalizes
    ``k exp(-G_+)`` to value 1 at ``z = 0``.
    """

    v: int
    gplus: np.ndarray
    gminus: np.ndarray
    k_const: complex
    reconstruction_error: float
    theta0: float

    @property
    def m(self) -> int:
        return len(self.gplus) + len(self.gminus)

    def gplus_at(self, z):
        """``sum_{k >= 0} g_k z**k`` (Horner)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.gplus[::-1]:
            out = out * z + c
        return out

    def gminus_at(self, z):
        """``sum_{k >= 1} g_{-k} z**(-k)``."""
        w = 1 / np.asarray(z, dtype=complex)
        out = np.zeros_like(w)
        for c in self.gminus[::-1]:
            out = out * w + c
        return out * w

    def to_dict(self) -> dict:
        return {
            "v": int(self.v),
            "k_const": [float(self.k_const.real), float(self.k_const.imag)],
            "gplus": [[k, float(c.real), float(c.imag)] for k, c in enumerate(self.gplus)],
            "gminus": [[-(k + 1), float(c.real), float(c.imag)]
                       for k, c in enumerate(self.gminus)],
            "reconstruction_error": float(self.reconstruction_error),
        }


def _arg_steps(values):
    return np.angle(np.roll(values, -1) / values)


def winding_number(S: ShiftedSymbol) -> int:
    """Winding of ``W`` about 0 by argument tracking around the sampled circle.

    Raises
    ------
    NonIntegerWinding
        if an argument step between neighbouring samples reaches ``pi/2`` (the
        grid does not resolve the curve; retry with doubled ``m``) or the
        accumulated turning is more than ``1e-3`` from an integer.
    """
    if S.m < MIN_WINDING_M:
        raise ParameterOutOfRange("m", f"m >= {MIN_WINDING_M}", S.m)
    steps = _arg_steps(S.values)
    worst = float(np.max(np.abs(steps)))
    if worst >= MAX_ARG_STEP:
        raise NonIntegerWinding(f"argument step {worst:.3f} unresolved at m={S.m}")
    turns = steps.sum() / (2 * np.pi)
    v = int(np.rint(turns))
    if abs(turns - v) > WINDING_TOL:
        raise NonIntegerWinding(f"winding {turns:.6f} is not an integer")
    return v


def _log_shifted(S: ShiftedSymbol, v: int):
    """``log(z^{-v} W)`` on the grid with continuous imaginary part."""
    vals = S.nodes ** (-v) * S.values
    steps = _arg_steps(vals)
    worst = float(np.max(np.abs(steps)))
    if worst >= MAX_ARG_STEP:
        raise UnwrapFailure(f"argument step {worst:.3f} between adjacent samples")
    total = steps.sum() / (2 * np.pi)
    if abs(total) > 0.5:
        raise WrongWinding(f"z^(-v) W winds {total:.3f} times for v={v}")
    arg = np.angle(vals[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return np.log(np.abs(vals)) + 1j * arg


def _modes(L, theta0):
    m = len(L)
    k = np.fft.fftfreq(m, 1.0 / m)
    return k, np.fft.fft(L) / m * np.exp(-1j * k * theta0)


def factorize(S: ShiftedSymbol, v: int) -> FactorizationResult:
    """Split ``log(z^{-v} W)`` into plus and minus Fourier modes.

    The Nyquist mode ``k = -m/2`` goes to ``G_-``; the constant mode to ``G_+``.
    """
    v = int(v)
    L = _log_shifted(S, v)
    m = S.m
    k, g = _modes(L, S.theta0)
    half = m // 2
    gplus = g[:half].copy()                      # k = 0 .. m/2 - 1
    gminus = g[::-1][:half].copy()               # k = -1 .. -m/2
    plus = np.where(k >= 0, g, 0)
    minus = np.where(k < 0, g, 0)
    phase = np.exp(1j * k * S.theta0)
    Gp = np.fft.ifft(plus * phase) * m
    Gm = np.fft.ifft(minus * phase) * m
    target = S.nodes ** (-v) * S.values
    err = float(np.max(np.abs(np.exp(Gp + Gm) - target)))
    return FactorizationResult(v, gplus, gminus, complex(np.exp(gplus[0])), err, S.theta0)


def cauchy_gplus(S: ShiftedSymbol, v: int, z) -> complex:
    """``G_+(z)`` as the Cauchy integral ``(1/2 pi i) oint log(z'^{-v} W(z')) / (z' - z) dz'``.

    For ``|z| < 1`` the integral of the full logarithm picks out its plus part;
    the trapezoidal rule on the sampling grid is used.
    """
    z = complex(z)
    if abs(z) > MAX_CAUCHY_RADIUS:
        raise TooCloseToBoundary(f"|z| = {abs(z):.3f} > {MAX_CAUCHY_RADIUS}")
    L = _log_shifted(S, int(v))
    zq = S.nodes
    return complex(np.mean(L * zq / (zq - z)))


def eigvec_from_factorization(F: FactorizationResult, n: int) -> np.ndarray:
    """First ``n`` Taylor coefficients of ``k_const * exp(-G_+(z))``, phase-fixed."""
    if F.v != -1:
        raise WrongWinding(f"eigenvector route needs v = -1, got v = {F.v}")
    m = F.m
    if not 1 <= n <= m // 2:
        raise ParameterOutOfRange("n", f"1 <= n <= m/2 = {m // 2}", n)
    k = np.fft.fftfreq(m, 1.0 / m)
    phase = np.exp(1j * k * F.theta0)
    modes = np.zeros(m, dtype=complex)
    modes[: len(F.gplus)] = F.gplus
    Gp = np.fft.ifft(modes * phase) * m
    psi_grid = F.k_const * np.exp(-Gp)
    coeffs = np.fft.fft(psi_grid) / m * np.exp(-1j * k * F.theta0)
    return phase_fix(coeffs[:n])


def write_factorization(path, F: FactorizationResult) -> None:
    Path(path).write_text(json.dumps(F.to_dict(), indent=1) + "\n")
