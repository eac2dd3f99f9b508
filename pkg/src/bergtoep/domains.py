"""Planar domains and polar tensor quadrature rules.

Two domains are supported, both with outer radius 1: the unit disk and the
annulus ``rho < |z| < 1``.  Area integrals are realised by a Gauss-Legendre
rule in ``r`` (Jacobian ``r`` folded into the weights) times the periodic
trapezoid rule in ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

__all__ = [
    "Domain",
    "QuadratureRule",
    "AdaptiveResult",
    "NonFiniteIntegrandError",
    "build_quadrature",
    "integrate",
    "integrate_adaptive",
    "radial_moment",
]

ADAPTIVE_START = (8, 16)
ADAPTIVE_CAP = (1024, 2048)


class NonFiniteIntegrandError(ValueError):
    """Raised when an integrand is NaN or infinite at a quadrature node."""

    def __init__(self, index, point):
        super().__init__(
            f"integrand is not finite at node {index} (z = {point!r})"
        )
        self.index = index
        self.point = point


@dataclass(frozen=True)
class Domain:
    """The unit disk (``kind='disk'``) or an annulus ``rho < |z| < 1``."""

    kind: str
    rho: float | None = None

    def __post_init__(self):
        if self.kind == "disk":
            if self.rho is not None:
                raise ValueError("the disk takes no inner radius")
        elif self.kind == "annulus":
            if self.rho is None or not (0.0 < float(self.rho) < 1.0):
                raise ValueError(
                    f"annulus inner radius must lie in (0, 1), got {self.rho!r}"
                )
            object.__setattr__(self, "rho", float(self.rho))
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}")

    @classmethod
    def disk(cls) -> "Domain":
        return cls("disk")

    @classmethod
    def annulus(cls, rho: float) -> "Domain":
        return cls("annulus", rho)

    @classmethod
    def parse(cls, text: str) -> "Domain":
        """Parse ``'disk'`` or ``'annulus:<rho>'``."""
        text = text.strip()
        if text == "disk":
            return cls.disk()
        if text.startswith("annulus:"):
            try:
                rho = float(text[len("annulus:"):])
            except ValueError:
                raise ValueError(f"malformed annulus radius in {text!r}") from None
            return cls.annulus(rho)
        raise ValueError(f"unknown domain {text!r}; expected disk or annulus:<rho>")

    @property
    def is_disk(self) -> bool:
        return self.kind == "disk"

    @property
    def inner_radius(self) -> float:
        return 0.0 if self.is_disk else self.rho

    @property
    def area(self) -> float:
        return math.pi * (1.0 - self.inner_radius ** 2)

    def contains(self, z) -> np.ndarray:
        r = np.abs(np.asarray(z))
        inside = r < 1.0
        if not self.is_disk:
            inside &= r > self.rho
        return inside

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if not self.is_disk:
            d["rho"] = self.rho
        return d

    def __str__(self):
        return "disk" if self.is_disk else f"annulus:{self.rho!r}"


@dataclass(frozen=True)
class QuadratureRule:
    """Polar tensor rule; ``weights`` already include the Jacobian ``r``."""

    domain: Domain
    n_r: int
    n_theta: int
    r: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def points(self) -> np.ndarray:
        return self.r * np.exp(1j * self.theta)

    @property
    def size(self) -> int:
        return self.weights.size

    def metadata(self) -> dict:
        return {**self.domain.to_dict(), "n_r": self.n_r, "n_theta": self.n_theta}


def build_quadrature(domain: Domain, n_r: int, n_theta: int) -> QuadratureRule:
    """Tensor rule with ``n_r`` Gauss-Legendre radii and ``n_theta`` angles.

    Nodes are ordered radius-major: node ``i * n_theta + t`` sits at radius
    ``r_i`` and angle ``2 pi t / n_theta``.
    """
    if int(n_r) != n_r or int(n_theta) != n_theta or n_r < 1 or n_theta < 1:
        raise ValueError(f"quadrature orders must be positive integers, got ({n_r}, {n_theta})")
    n_r, n_theta = int(n_r), int(n_theta)
    a = domain.inner_radius
    x, wx = roots_legendre(n_r)
    half = 0.5 * (1.0 - a)
    r1 = a + half * (x + 1.0)
    wr = half * wx * r1
    th1 = 2.0 * np.pi * np.arange(n_theta) / n_theta
    wth = 2.0 * np.pi / n_theta
    r = np.repeat(r1, n_theta)
    theta = np.tile(th1, n_r)
    weights = np.repeat(wr, n_theta) * wth
    for arr in (r, theta, weights):
        arr.setflags(write=False)
    return QuadratureRule(domain, n_r, n_theta, r, theta, weights)


def _sample(rule: QuadratureRule, integrand: Callable) -> np.ndarray:
    z = rule.points
    vals = np.asarray(integrand(z), dtype=complex)
    if vals.shape != z.shape:
        vals = np.broadcast_to(vals, z.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteIntegrandError(i, complex(z[i]))
    return vals


def integrate(rule: QuadratureRule, integrand: Callable) -> complex:
    """Approximate ``int_Omega integrand dA``.

    ``integrand`` is called once with the array of node points and must be
    vectorised (a scalar return is broadcast, so constants are fine).
    """
    vals = _sample(rule, integrand)
    return complex(np.sum(rule.weights * vals))


@dataclass(frozen=True)
class AdaptiveResult:
    value: complex
    err_estimate: float
    converged: bool
    orders: tuple
    history: tuple = ()

    def __iter__(self):
        # allows ``value, err = integrate_adaptive(...)``
        return iter((self.value, self.err_estimate))


def integrate_adaptive(domain: Domain, integrand: Callable, tol: float) -> AdaptiveResult:
    """Double both orders from (8, 16) until successive values agree to ``tol``.

    Stops at (1024, 2048); in that case ``converged`` is False and the caller
    decides what to do with the last value.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    n_r, n_th = ADAPTIVE_START
    prev = integrate(build_quadrature(domain, n_r, n_th), integrand)
    history = []
    while True:
        if n_r * 2 > ADAPTIVE_CAP[0] or n_th * 2 > ADAPTIVE_CAP[1]:
            err = history[-1] if history else math.inf
            return AdaptiveResult(prev, err, False, (n_r, n_th), tuple(history))
        n_r, n_th = 2 * n_r, 2 * n_th
        val = integrate(build_quadrature(domain, n_r, n_th), integrand)
        err = abs(val - prev)
        history.append(err)
        prev = val
        if err < tol:
            return AdaptiveResult(val, err, True, (n_r, n_th), tuple(history))


def radial_moment(q: float, p: int, rho: float = 0.0) -> float:
    """Exact ``int_rho^1 r**q * log(r)**p dr`` (``rho = 0`` for the disk).

    With ``s = q + 1`` and ``t = -log r`` the integral is
    ``(-1)**p * int_0^T t**p exp(-s t) dt`` where ``T = -log rho``.
    """
    p = int(p)
    if p < 0:
        raise ValueError("log power must be nonnegative")
    s = q + 1.0
    if rho == 0.0:
        if s <= 0.0:
            raise ValueError(f"r**{q} * log(r)**{p} is not integrable at r = 0")
        return (-1) ** p * math.factorial(p) / s ** (p + 1)
    T = -math.log(rho)
    if abs(s * T) <= 1.0:
        # entire series in s; no cancellation for |s T| <= 1
        total, i, term = 0.0, 0, 1.0
        while True:
            contrib = term * T ** (p + i + 1) / (p + i + 1)
            total += contrib
            if abs(contrib) <= 1e-18 * abs(total) or i > 200:
                break
            i += 1
            term *= -s / i
        return (-1) ** p * total
    # int_0^T t^k e^{-st} dt = -T^k e^{-sT}/s + (k/s) int_0^T t^{k-1} e^{-st} dt
    e = math.exp(-s * T)
    val = -math.expm1(-s * T) / s
    for k in range(1, p + 1):
        val = -(T ** k) * e / s + k / s * val
    return (-1) ** p * val
