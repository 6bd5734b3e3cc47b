r"""
Fisher-Hartwig symbol families on the unit circle.

Four concrete families are supported:

``Singular``
    :math:`a(z) = (z-1)^{2\alpha} z^{\beta-\alpha} e^{-i\pi(\alpha+\beta)}`,
    equivalently :math:`(-1)^{\alpha+\beta} \big((z-1)/z^{1/2}\big)^{2\alpha} z^\beta`.
    With :math:`z = e^{i\theta}` this is
    :math:`(2\sin(\theta/2))^{2\alpha} e^{i\beta(\theta-\pi)}`.
``TypeI``
    :math:`a(z) = (2 - z - 1/z)^{\alpha/2} (-z)^\beta`.
``TypeII``
    :math:`a(z) = (1 - z_0/z)^\delta (1 - z/z_0)^\gamma b(z)`.
``TypeIII``
    :math:`a(z) = \prod_j |z_j|^{2\alpha_j} |z/z_j - 1|^{2\alpha_j} c(z)` with
    :math:`z_j = e^{-i\theta_j}`.

Branch conventions
------------------
For the ``Singular`` family :math:`\log z` is taken with :math:`\arg z \in (0, 2\pi)`
and :math:`\arg(z-1) = (\arg z + \pi)/2`, so the only cut on the circle sits at the
singular point :math:`z = 1`. With the principal logarithm the expanded form
would acquire a second, spurious jump at :math:`z = -1`.

``TypeI`` and ``TypeII`` use principal powers. The base :math:`2 - z - 1/z` is real
and nonnegative on the circle, :math:`(-z)^\beta` is cut at :math:`z = 1`, and
:math:`1 - z_0/z`, :math:`1 - z/z_0` have nonnegative real part on the circle, so the
only cut of a Type II symbol is at :math:`z_0`. ``TypeIII`` is real and has no cut.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from .errors import (EvaluationAtSingularity, NotOnUnitCircle,
                     ParameterOutOfRange)

__all__ = [
    "SymbolKind", "SymbolSpec", "validate", "evaluate", "evaluate_grid",
    "continued", "grid_nodes", "grid_rotation", "singular_points",
    "singular_exponents", "effective_alpha", "singular_form_product",
    "singular_form_expanded", "B_KINDS", "C_KINDS",
]

TWO_PI = 2.0 * np.pi
CIRCLE_TOL = 1e-12
Z0_TOL = 1e-14
SINGULAR_TOL = 1e-14
MIN_B_MODULUS = 1e-8

ComplexFunc = Callable[[np.ndarray], np.ndarray]


class SymbolKind(str, enum.Enum):
    SINGULAR = "Singular"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"


# Type II smooth factors b(z). The row names follow the reference table of b
# functions; "row1" is z**b_power, so that b(exp(-2 pi i l / n)) = exp(-2 pi i l)
# when b_power = n.
B_KINDS = ("one", "row1", "row2", "row3", "row4", "row5")
C_KINDS = ("one",)


@dataclass(frozen=True)
class SymbolSpec:
    """Immutable description of one symbol and its parameters.

    Only the fields relevant to ``kind`` are used. ``b_kind`` and ``c_kind`` are
    either one of :data:`B_KINDS` / :data:`C_KINDS` or a vectorized callable.
    """

    kind: SymbolKind
    alpha: complex = 0j
    beta: complex = 0j
    delta: complex = 0j
    gamma: complex = 0j
    z0: complex = 1 + 0j
    b_kind: Union[str, ComplexFunc] = "one"
    b_power: int = 0
    singularities: tuple = field(default_factory=tuple)
    c_kind: Union[str, ComplexFunc] = "one"

    def __post_init__(self):
        object.__setattr__(self, "kind", SymbolKind(self.kind))
        for name in ("alpha", "beta", "delta", "gamma", "z0"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        sing = tuple((float(t), float(a)) for t, a in self.singularities)
        object.__setattr__(self, "singularities", sing)
        object.__setattr__(self, "b_power", int(self.b_power))

    # constructors -----------------------------------------------------------

    @classmethod
    def singular(cls, alpha, beta=0.0):
        return cls(SymbolKind.SINGULAR, alpha=alpha, beta=beta)

    @classmethod
    def type1(cls, alpha, beta):
        return cls(SymbolKind.TYPE_I, alpha=alpha, beta=beta)

    @classmethod
    def type2(cls, delta, gamma, z0=None, *, z0_angle=None, b_kind="one",
              b_power=0):
        if z0 is None:
            z0 = np.exp(1j * (0.0 if z0_angle is None else z0_angle))
        return cls(SymbolKind.TYPE_II, delta=delta, gamma=gamma, z0=z0,
                   b_kind=b_kind, b_power=b_power)

    @classmethod
    def type3(cls, singularities: Sequence = (), c_kind="one"):
        return cls(SymbolKind.TYPE_III, singularities=tuple(singularities),
                   c_kind=c_kind)

    def with_(self, **changes) -> "SymbolSpec":
        return replace(self, **changes)

    # serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        for name in ("b_kind", "c_kind"):
            if callable(getattr(self, name)):
                raise ValueError(f"{name} is a callable and cannot be serialized")
        return {
            "kind": self.kind.value,
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "delta": [self.delta.real, self.delta.imag],
            "gamma": [self.gamma.real, self.gamma.imag],
            "z0_angle": float(np.angle(self.z0)),
            "b_kind": self.b_kind,
            "b_power": self.b_power,
            "singularities": [{"theta": t, "alpha_j": a}
                              for t, a in self.singularities],
            "c_kind": self.c_kind,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SymbolSpec":
        def cplx(key):
            v = data.get(key, 0.0)
            if isinstance(v, (list, tuple)):
                if len(v) != 2:
                    raise ValueError(f"{key} must be [re, im]")
                return complex(v[0], v[1])
            return complex(v)

        try:
            kind = SymbolKind(data["kind"])
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad or missing symbol kind: {data.get('kind')!r}") from exc
        sing = tuple((float(s["theta"]), float(s["alpha_j"]))
                     for s in data.get("singularities", []))
        return cls(kind, alpha=cplx("alpha"), beta=cplx("beta"),
                   delta=cplx("delta"), gamma=cplx("gamma"),
                   z0=np.exp(1j * float(data.get("z0_angle", 0.0))),
                   b_kind=data.get("b_kind", "one"),
                   b_power=int(data.get("b_power", 0)),
                   singularities=sing, c_kind=data.get("c_kind", "one"))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate(spec: SymbolSpec, wiener_hopf: bool = False) -> SymbolSpec:
    """Check the parameter constraints of ``spec`` and return it unchanged.

    With ``wiener_hopf=True`` a Type I symbol must also satisfy
    ``0 < alpha/2 < -beta < 1`` (real parts), the range in which the
    winding -1 factorization applies.
    """
    kind = spec.kind
    if kind in (SymbolKind.SINGULAR, SymbolKind.TYPE_I):
        if not spec.alpha.real > -0.5:
            raise ParameterOutOfRange("alpha", "Re(alpha) > -1/2", spec.alpha)
        if kind is SymbolKind.TYPE_I and wiener_hopf:
            a, b = spec.alpha.real, spec.beta.real
            if not (0 < a / 2 < -b < 1):
                raise ParameterOutOfRange("alpha/beta", "0 < alpha/2 < -beta < 1",
                                          (spec.alpha, spec.beta))
    elif kind is SymbolKind.TYPE_II:
        if not spec.delta.real + spec.gamma.real > -1:
            raise ParameterOutOfRange("delta+gamma", "Re(delta) + Re(gamma) > -1",
                                      (spec.delta, spec.gamma))
        if abs(abs(spec.z0) - 1) > Z0_TOL:
            raise ParameterOutOfRange("z0", "|z0| = 1", spec.z0)
        if not callable(spec.b_kind) and spec.b_kind not in B_KINDS:
            raise ParameterOutOfRange("b_kind", f"one of {B_KINDS}", spec.b_kind)
        zs = grid_nodes(spec, 1024)
        bmin = float(np.min(np.abs(_b_values(spec, zs))))
        if not bmin >= MIN_B_MODULUS:
            raise ParameterOutOfRange("b_kind", "b nonvanishing on the circle", bmin)
    elif kind is SymbolKind.TYPE_III:
        for j, (theta, a) in enumerate(spec.singularities):
            if not -0.5 < a < 0.5:
                raise ParameterOutOfRange(f"singularities[{j}].alpha_j",
                                          "-1/2 < alpha_j < 1/2", a)
        angles = sorted(t % TWO_PI for t, _ in spec.singularities)
        if len(angles) > 1 and np.min(np.diff(angles + [angles[0] + TWO_PI])) < 1e-12:
            raise ParameterOutOfRange("singularities", "distinct theta_j")
        if not callable(spec.c_kind) and spec.c_kind not in C_KINDS:
            raise ParameterOutOfRange("c_kind", f"one of {C_KINDS}", spec.c_kind)
        if callable(spec.c_kind):
            c = np.asarray(spec.c_kind(grid_nodes(spec, 1024)), dtype=complex)
            if np.any(c.real <= 0) or np.any(np.abs(c.imag) > 1e-12 * np.abs(c)):
                raise ParameterOutOfRange("c_kind", "c real and positive on the circle")
    return spec


# ---------------------------------------------------------------------------
# singular points and quadrature grids
# ---------------------------------------------------------------------------

def singular_points(spec: SymbolSpec) -> np.ndarray:
    """Points of the circle where the symbol may be non-smooth."""
    if spec.kind in (SymbolKind.SINGULAR, SymbolKind.TYPE_I):
        return np.array([1.0 + 0j])
    if spec.kind is SymbolKind.TYPE_II:
        return np.array([spec.z0])
    return np.exp(-1j * np.array([t for t, _ in spec.singularities], dtype=float))


def singular_exponents(spec: SymbolSpec) -> list:
    """``(angle, s)`` pairs: near ``angle`` the symbol behaves like ``|theta - angle|**s``
    times a (possibly jumping) smooth factor."""
    if spec.kind is SymbolKind.SINGULAR:
        return [(0.0, 2 * spec.alpha)]
    if spec.kind is SymbolKind.TYPE_I:
        return [(0.0, spec.alpha)]
    if spec.kind is SymbolKind.TYPE_II:
        s = spec.delta + spec.gamma + _b_exponent(spec)
        return [(float(np.angle(spec.z0)), s)]
    return [(-t, complex(2 * a)) for t, a in spec.singularities]


def effective_alpha(spec: SymbolSpec) -> complex:
    """Exponent ``alpha`` with ``a(z) ~ |z - z_s|**(2 alpha)`` at the (first) singular point.

    This is the ``alpha`` entering the momentum ``p = 2 pi l/n + i(2 alpha + 1) log(n)/n``.
    """
    ex = singular_exponents(spec)
    if not ex:
        return 0j
    return complex(ex[0][1]) / 2


def grid_rotation(spec: SymbolSpec) -> float:
    """Rotation angle placing the first singular point halfway between two nodes."""
    pts = singular_points(spec)
    return float(np.angle(pts[0])) if len(pts) else 0.0


def grid_nodes(spec: SymbolSpec, m: int) -> np.ndarray:
    """Offset quadrature nodes ``exp(i(phi + 2 pi (k + 1/2)/m))``.

    ``phi`` is :func:`grid_rotation`; if another singular point still falls on a
    node the grid is shifted by a further quarter cell.
    """
    phi = grid_rotation(spec)
    pts = singular_points(spec)
    k = np.arange(m)
    for shift in (0.0, 0.25, 0.125):
        theta = phi + TWO_PI * (k + 0.5 + shift) / m
        nodes = np.exp(1j * theta)
        if len(pts) == 0 or np.min(np.abs(nodes[:, None] - pts[None, :])) > 1e-12:
            return nodes
    return nodes


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _angle_0_2pi(z):
    return np.mod(np.angle(z), TWO_PI)


def singular_form_expanded(alpha, beta, z):
    """``(z-1)**(2 alpha) * z**(beta - alpha) * exp(-i pi (alpha + beta))`` on the circle."""
    z = np.asarray(z, dtype=complex)
    alpha, beta = complex(alpha), complex(beta)
    theta = _angle_0_2pi(z)
    log_zm1 = np.log(np.abs(z - 1)) + 1j * (theta + np.pi) / 2
    log_z = 1j * theta
    return np.exp(2 * alpha * log_zm1 + (beta - alpha) * log_z
                  - 1j * np.pi * (alpha + beta))


def singular_form_product(alpha, beta, z):
    """``(-1)**(alpha + beta) * ((z-1)/z**(1/2))**(2 alpha) * z**beta`` on the circle.

    ``(-1)**(alpha+beta)`` is ``exp(-i pi (alpha + beta))`` and ``z**(1/2)``, ``z**beta``
    use ``arg z`` in ``(0, 2 pi)``.
    """
    z = np.asarray(z, dtype=complex)
    alpha, beta = complex(alpha), complex(beta)
    theta = _angle_0_2pi(z)
    ratio = (z - 1) / np.exp(0.5j * theta)
    return (np.exp(-1j * np.pi * (alpha + beta)) * ratio ** (2 * alpha)
            * np.exp(1j * beta * theta))


def _b_exponent(spec):
    kind = spec.b_kind
    if callable(kind) or kind in ("one", "row1"):
        return 0j
    return {
        "row2": -spec.delta,
        "row3": -spec.gamma,
        "row4": -spec.delta - spec.gamma,
        "row5": -2 * abs(spec.delta + spec.gamma),
    }[kind]


def _b_values(spec, z):
    kind = spec.b_kind
    if callable(kind):
        return np.asarray(kind(z), dtype=complex) * np.ones_like(z)
    u = 1 - spec.z0 / z
    v = 1 - z / spec.z0
    if kind == "one":
        return np.ones_like(z)
    if kind == "row1":
        return z ** spec.b_power
    if kind == "row2":
        return u ** (-spec.delta)
    if kind == "row3":
        return v ** (-spec.gamma)
    if kind == "row4":
        return u ** (-spec.delta) * v ** (-spec.gamma)
    if kind == "row5":
        return (u * v) ** (-abs(spec.delta + spec.gamma))
    raise ParameterOutOfRange("b_kind", f"one of {B_KINDS}", kind)


def _c_values(spec, z):
    if callable(spec.c_kind):
        return np.asarray(spec.c_kind(z), dtype=complex) * np.ones_like(z)
    return np.ones_like(z)


def _formula(spec, z, on_circle):
    kind = spec.kind
    if kind is SymbolKind.SINGULAR:
        if on_circle:
            return singular_form_expanded(spec.alpha, spec.beta, z)
        return (2 - z - 1 / z) ** spec.alpha * (-z) ** spec.beta
    if kind is SymbolKind.TYPE_I:
        if on_circle:
            base = (4 * np.sin(_angle_0_2pi(z) / 2) ** 2).astype(complex)
        else:
            base = 2 - z - 1 / z
        return base ** (spec.alpha / 2) * (-z) ** spec.beta
    if kind is SymbolKind.TYPE_II:
        return ((1 - spec.z0 / z) ** spec.delta * (1 - z / spec.z0) ** spec.gamma
                * _b_values(spec, z))
    out = _c_values(spec, z)
    for theta, a in spec.singularities:
        zj = np.exp(-1j * theta)
        if on_circle:
            out = out * (abs(zj) ** (2 * a) * np.abs(z / zj - 1) ** (2 * a))
        else:
            out = out * (2 - z / zj - zj / z) ** a
    return out


def evaluate(spec: SymbolSpec, z):
    """Evaluate the symbol at point(s) ``z`` on the unit circle.

    Raises
    ------
    NotOnUnitCircle
        if ``| |z| - 1 | > 1e-12`` for any point.
    EvaluationAtSingularity
        if a point coincides with a singular point of the family.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(np.abs(np.abs(arr) - 1) > CIRCLE_TOL):
        raise NotOnUnitCircle("symbol is only defined on |z| = 1")
    pts = singular_points(spec)
    if len(pts) and np.min(np.abs(arr[:, None] - pts[None, :])) <= SINGULAR_TOL:
        raise EvaluationAtSingularity("point coincides with a singularity of the symbol")
    out = _formula(spec, arr, on_circle=True)
    return complex(out[0]) if scalar else out


def continued(spec: SymbolSpec, z):
    """Analytic continuation of the symbol to a neighbourhood of the circle.

    Agrees with :func:`evaluate` on the circle (away from the cut) and is used
    wherever the symbol is needed at a complex momentum ``exp(-i p)`` with
    ``Im p != 0``.  Custom ``b``/``c`` callables are called as given.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    out = _formula(spec, np.atleast_1d(arr), on_circle=False)
    return complex(out[0]) if scalar else out


def evaluate_grid(spec: SymbolSpec, m: int) -> np.ndarray:
    """Symbol samples on the ``m``-point offset grid :func:`grid_nodes`."""
    if m < 8:
        raise ParameterOutOfRange("m", "m >= 8", m)
    return evaluate(spec, grid_nodes(spec, m))


def is_trivial(spec: SymbolSpec) -> bool:
    """True when the symbol has no singular behaviour at all."""
    if spec.kind in (SymbolKind.SINGULAR, SymbolKind.TYPE_I):
        return spec.alpha == 0 and spec.beta == 0
    if spec.kind is SymbolKind.TYPE_II:
        return (spec.delta == 0 and spec.gamma == 0 and not callable(spec.b_kind)
                and spec.b_kind in ("one", "row1", "row4"))
    return all(a == 0 for _, a in spec.singularities) and not callable(spec.c_kind)
