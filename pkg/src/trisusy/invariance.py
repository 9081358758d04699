"""Consequences of the shape-invariance postulate H+(eta) = H(eta + delta) + eps_1(eta).

For a chain whose d_n are independent of the shape parameter eta and whose
c_n obey the translation property c_{n+1}(eta) = c_n(eta + delta), the first
excited energy

    eps_1(eta) = (c_0^2 - c_1^2) + d_1^2

determines the whole spectrum by telescoping, the commutator of the
parameter-translating ladder operators, every level of the partner
hierarchy, and conversely the chain can be rebuilt from the spectrum plus
the two seeds {c_0^2, d_1^2}.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import NegativityError, WindowError
from .operators import LadderCoefficients, TridiagonalOperator, compose, partner

__all__ = [
    "ShapeInvariantModel",
    "SpectrumFunction",
    "HierarchyLevel",
    "epsilon1",
    "epsilon1_n_independence",
    "spectrum",
    "telescoping_check",
    "partner_spectrum",
    "commutator_diagonal",
    "shape_invariance_residual",
    "hierarchy",
    "inverse_construct",
    "model_spectrum",
]


@dataclass(frozen=True)
class ShapeInvariantModel:
    """Closed-form chain c_n^2(eta), d_n^2 with the shape-invariance properties.

    The squares are the primary data (they enter every energy identity and
    are exact closed forms); c_sign_fn supplies the sign of the amplitude
    c_n, which equals the sign of the composed b_n and fixes the
    ground-state expansion.  d_n^2 must not depend on eta.  ``m_max`` bounds
    the bound-state window (None when the spectrum is unbounded); ``params``
    optionally records the catalogue parameters the model was built from.
    """

    label: str
    eta: float
    delta: float
    c_sq_fn: Callable[[int, float], float]
    d_sq_fn: Callable[[int], float]
    c_sign_fn: Optional[Callable[[int, float], float]] = None
    m_max: Optional[int] = None
    params: object = None

    def c_sq(self, n, eta=None):
        return self.c_sq_fn(n, self.eta if eta is None else eta)

    def d_sq(self, n):
        return self.d_sq_fn(n)

    def c(self, n, eta=None):
        eta_val = self.eta if eta is None else eta
        sign = self.c_sign_fn(n, eta_val) if self.c_sign_fn is not None else 1.0
        return sign * math.sqrt(self.c_sq_fn(n, eta_val))

    def d(self, n):
        return math.sqrt(self.d_sq_fn(n))

    def shift(self, steps=1):
        """Copy of the model with eta -> eta + steps * delta."""
        return replace(self, eta=self.eta + steps * self.delta)

    def ladder(self, n_terms):
        """Ladder coefficients through index n_terms at the model's eta."""
        c = np.array([self.c(n) for n in range(n_terms + 1)])
        d = np.array([self.d(n) for n in range(n_terms + 1)])
        return LadderCoefficients(c, d)

    def operator(self, n_terms):
        """Composed tridiagonal operator through index n_terms."""
        return compose(self.ladder(n_terms))


@dataclass(frozen=True)
class SpectrumFunction:
    """Bound-state energies m -> eps_m with eps_0 = 0."""

    eval: Callable[[int], float]
    m_max: Optional[int] = None

    def __call__(self, m):
        if self.m_max is not None and m > self.m_max:
            raise WindowError(f"m={m} beyond bound-state window m_max={self.m_max}")
        return self.eval(m)


def model_spectrum(model):
    """SpectrumFunction of a shape-invariant model (closed form, Eq. below)."""
    return SpectrumFunction(eval=lambda m: spectrum(model, m), m_max=model.m_max)


def epsilon1(model, eta=None):
    """First excited energy (c_0^2 - c_1^2) + d_1^2 at the given eta."""
    return (model.c_sq(0, eta) - model.c_sq(1, eta)) + model.d_sq(1)


def epsilon1_n_independence(model, n_terms):
    """Max over n <= N of |(c_n^2 - c_{n+1}^2) + (d_{n+1}^2 - d_n^2) - eps_1|."""
    e1 = epsilon1(model)
    dev = 0.0
    for n in range(n_terms + 1):
        val = (model.c_sq(n) - model.c_sq(n + 1)) + (model.d_sq(n + 1) - model.d_sq(n))
        dev = max(dev, abs(val - e1))
    return dev


def _check_window(model, m):
    if m < 0:
        raise WindowError(f"level index must be nonnegative, got m={m}")
    if model.m_max is not None and m > model.m_max:
        raise WindowError(f"m={m} beyond bound-state window m_max={model.m_max} "
                          f"of model {model.label}")


def spectrum(model, m):
    """Level energy eps_m = [c_0^2 - c_m^2] + m d_1^2, with eps_0 = 0."""
    _check_window(model, m)
    if m == 0:
        return 0.0
    return (model.c_sq(0) - model.c_sq(m)) + m * model.d_sq(1)


def telescoping_check(model, m):
    """|sum_{k<m} eps_1(eta + k delta) - eps_m|: telescoped vs closed form."""
    if m < 1:
        raise WindowError(f"telescoping check needs m >= 1, got {m}")
    total = 0.0
    for k in range(m):
        total += epsilon1(model, model.eta + k * model.delta)
    return abs(total - spectrum(model, m))


def partner_spectrum(model, m):
    """Partner level eps+_m = eps_m(eta + delta) + eps_1(eta) = eps_{m+1}."""
    _check_window(model, m + 1)
    shifted = model.shift()
    return spectrum(shifted, m) + epsilon1(model)


def commutator_diagonal(model, n):
    """Diagonal of [B, B^dag] on basis state n: equals eps_1(eta - delta).

    The n = 0 entry uses c_{-1}(eta) := c_0(eta - delta), which the
    translation property makes the unique consistent extension.
    """
    if n < 0:
        raise WindowError(f"need n >= 0, got {n}")
    if n == 0:
        cm1_sq = model.c_sq(0, model.eta - model.delta)
    else:
        cm1_sq = model.c_sq(n - 1)
    return (cm1_sq + model.d_sq(n + 1)) - (model.c_sq(n) + model.d_sq(n))


def shape_invariance_residual(model, n_terms):
    """Deviations of the partner chain from the shifted chain.

    Composes H(eta), builds the partner through the ladder algebra, composes
    H(eta + delta), and returns

        (max_n |a+_n(eta) - a_n(eta+delta) - eps_1(eta)|,
         max_n |b+_n(eta) - b_n(eta+delta)|)

    over n <= N-2 (truncation boundary excluded).
    """
    if n_terms < 2:
        raise WindowError(f"need N >= 2, got {n_terms}")
    h_plus = partner(model.ladder(n_terms))
    h_shifted = model.shift().operator(n_terms)
    e1 = epsilon1(model)
    top = n_terms - 2
    dev_a = float(np.max(np.abs(h_plus.a[: top + 1] - h_shifted.a[: top + 1] - e1)))
    dev_b = float(np.max(np.abs(h_plus.b[: top + 1] - h_shifted.b[: top + 1])))
    return dev_a, dev_b


@dataclass(frozen=True)
class HierarchyLevel:
    """One row of the partner hierarchy.

    kind is "zeroed_partner" for H~^{k(+)} (ground energy re-zeroed) or
    "shifted_partner" for H^{(k+1)(+)} (ground energy eps_1(eta + k delta)
    above the zeroed level below it).  c_at / d_at give the signed
    c-like and d-like coefficient rules; a_at / b_at the composed matrix
    elements.
    """

    level: int
    kind: str
    ground_energy: float
    c_at: Callable[[int], float]
    d_at: Callable[[int], float]

    def c_sq_at(self, n):
        return self.c_at(n) ** 2

    def d_sq_at(self, n):
        return self.d_at(n) ** 2

    def a_at(self, n):
        return self.c_at(n) ** 2 + self.d_at(n) ** 2

    def b_at(self, n):
        return self.c_at(n) * self.d_at(n + 1)

    def operator(self, n_terms):
        a = np.array([self.a_at(n) for n in range(n_terms + 1)])
        b = np.array([self.b_at(n) for n in range(n_terms)])
        return TridiagonalOperator(a, b, decoupled=bool(np.any(b == 0.0)))


def hierarchy(model, k):
    """Level-k rows of the supersymmetric hierarchy.

    Returns (zeroed, shifted):

    * zeroed -- H~^{k(+)} with rules (c_{n+k}, d_n) and ground energy 0
      (for k = 0 this is H itself);
    * shifted -- H^{(k+1)(+)} with rules (c-like = d_{n+1}, d-like = c_{n+k})
      and ground energy eps_1(eta + k delta) above the zeroed level.
    """
    if k < 0:
        raise WindowError(f"hierarchy level must be nonnegative, got {k}")
    zeroed = HierarchyLevel(
        level=k, kind="zeroed_partner", ground_energy=0.0,
        c_at=lambda n, _k=k: model.c(n + _k),
        d_at=lambda n: model.d(n),
    )
    shifted = HierarchyLevel(
        level=k, kind="shifted_partner",
        ground_energy=epsilon1(model, model.eta + k * model.delta),
        c_at=lambda n: model.d(n + 1),
        d_at=lambda n, _k=k: model.c(n + _k),
    )
    return zeroed, shifted


def inverse_construct(spectrum_fn, c0_sq, d1_sq, m_terms):
    """Chain (c_n, d_n) rebuilt from a spectrum and the seeds {c_0^2, d_1^2}.

        d_{m+1}^2 = (m+1) d_1^2 + [(m+1) eps_1 - eps_{m+1}]
        c_{m+1}^2 = c_0^2 + [(m+1) d_1^2 - eps_{m+1}]

    for m = 0..M-1, with eps_1 taken from spectrum_fn(1).  The returned
    coefficients are the nonnegative square roots (a spectrum alone carries
    no sign information).
    """
    if spectrum_fn.m_max is not None and m_terms > spectrum_fn.m_max:
        raise WindowError(f"M={m_terms} beyond spectrum window m_max={spectrum_fn.m_max}")
    eps0 = spectrum_fn(0)
    if abs(eps0) > 1e-12:
        raise ValueError(f"spectrum must be zeroed on the ground state, got eps_0={eps0}")
    if c0_sq < 0 or d1_sq < 0:
        raise NegativityError("seeds c_0^2 and d_1^2 must be nonnegative")
    e1 = spectrum_fn(1)
    c_sq = np.zeros(m_terms + 1)
    d_sq = np.zeros(m_terms + 1)
    c_sq[0] = c0_sq
    for m in range(m_terms):
        eps_next = spectrum_fn(m + 1)
        d_next = (m + 1) * d1_sq + ((m + 1) * e1 - eps_next)
        c_next = c0_sq + ((m + 1) * d1_sq - eps_next)
        if d_next < 0:
            raise NegativityError(f"constructed d_{m + 1}^2 = {d_next} < 0; "
                                  "spectrum and seeds are inconsistent")
        if c_next < 0:
            raise NegativityError(f"constructed c_{m + 1}^2 = {c_next} < 0; "
                                  "spectrum and seeds are inconsistent")
        d_sq[m + 1] = d_next
        c_sq[m + 1] = c_next
    return LadderCoefficients(np.sqrt(c_sq), np.sqrt(d_sq))
