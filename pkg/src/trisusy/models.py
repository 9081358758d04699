"""Closed-form model catalogue: partial-wave kinetic energy, radial oscillator, Morse.

Each model supplies the signed ladder coefficients of its tridiagonal
representation, the Laguerre-type basis that makes it tridiagonal, and the
configuration-space potentials, all pre-shifted so the ground energy is 0.
These are the ground truth against which the operator and shape-invariance
machinery is checked.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import DecoupledChainWarning, DomainError, SingularityError, UnsupportedModelError
from .invariance import ShapeInvariantModel, epsilon1
from .specfun import laguerre_weighted_table, ln_gamma

__all__ = [
    "ModelParams",
    "WavefunctionGrid",
    "kinetic",
    "oscillator",
    "morse",
    "morse_m_max",
    "make_model",
    "shifted",
    "basis_eval",
    "basis_series",
    "eigenstate_eval_oscillator",
    "potential_eval",
    "partner_potential_residual",
]

_VARIANTS = ("kinetic", "oscillator", "morse")
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Catalogue parameters.

    scale is the free basis parameter: the length scale lambda for the
    radial variants, the Laguerre order gamma for Morse.  For Morse the
    well depth is V0 = alpha^2 (D + 1/2)^2 / 2.
    """

    variant: str
    l: int = 0
    omega: float = 1.0
    alpha: float = 1.0
    D: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {_VARIANTS}")
        if self.l < 0 or int(self.l) != self.l:
            raise ValueError(f"angular momentum l must be a nonnegative integer, got {self.l}")
        if self.scale <= 0:
            raise ValueError(f"free basis parameter must be positive, got {self.scale}")
        if self.variant == "oscillator":
            if self.omega <= 0:
                raise ValueError(f"omega must be positive, got {self.omega}")
            if self.scale ** 2 == self.omega:
                warnings.warn("lambda^2 = omega gives c_n = 0: basis coincides with the "
                              "eigenbasis and the chain decouples", DecoupledChainWarning,
                              stacklevel=3)
        if self.variant == "morse":
            if self.alpha <= 0:
                raise ValueError(f"alpha must be positive, got {self.alpha}")
            if self.D <= 0.5:
                raise ValueError(f"Morse depth parameter needs D > 1/2, got {self.D}")


def kinetic(l=0, lam=1.0):
    """l-th partial-wave kinetic energy in the oscillator Laguerre basis."""
    return ModelParams(variant="kinetic", l=l, scale=lam)


def oscillator(l=0, omega=1.0, lam=2.0):
    """Radial harmonic oscillator, ground energy shifted to 0."""
    return ModelParams(variant="oscillator", l=l, omega=omega, scale=lam)


def morse(alpha=1.0, D=2.0, gamma=2.0):
    """Morse oscillator with depth parameter D, ground energy shifted to 0."""
    return ModelParams(variant="morse", alpha=alpha, D=D, scale=gamma)


def morse_m_max(D):
    """Largest level index with a strictly increasing Morse spectrum: m < D + 1/2."""
    return int(math.ceil(D + 0.5)) - 1


def make_model(params):
    """Shape-invariant descriptor (closed-form c_n^2(eta), d_n^2, sign of c_n).

    The sign of c_n matches the sign of the composed b_n in the fixed
    all-positive basis of each model; this is what makes the ground-state
    expansion coefficients come out with their physical signs.
    """
    if params.variant == "kinetic":
        lam_sq = params.scale ** 2
        return ShapeInvariantModel(
            label="kinetic", eta=params.l + 0.5, delta=1.0,
            c_sq_fn=lambda n, eta: 0.5 * lam_sq * (n + eta + 1),
            d_sq_fn=lambda n: 0.5 * lam_sq * n,
            c_sign_fn=None, m_max=None, params=params)

    if params.variant == "oscillator":
        lam, om = params.scale, params.omega
        minus_sq = (lam - om / lam) ** 2
        plus_sq = (lam + om / lam) ** 2
        sign = 1.0 if lam ** 2 >= om else -1.0
        return ShapeInvariantModel(
            label="oscillator", eta=params.l + 0.5, delta=1.0,
            c_sq_fn=lambda n, eta: 0.5 * minus_sq * (n + eta + 1),
            d_sq_fn=lambda n: 0.5 * plus_sq * n,
            c_sign_fn=lambda n, eta: sign, m_max=None, params=params)

    al_sq, gam = params.alpha ** 2, params.scale
    return ShapeInvariantModel(
        label="morse", eta=params.D, delta=-1.0,
        c_sq_fn=lambda n, eta: 0.5 * al_sq * (n + gam + 0.5 - eta) ** 2,
        d_sq_fn=lambda n: 0.5 * al_sq * n * (n + 2 * gam),
        c_sign_fn=lambda n, eta: -1.0 if n + gam + 0.5 - eta > 0 else 1.0,
        m_max=morse_m_max(params.D), params=params)


def shifted(params, steps=1):
    """Parameters with eta advanced by steps * delta (l -> l+steps, D -> D-steps)."""
    if params.variant == "morse":
        return replace(params, D=params.D - steps)
    return replace(params, l=params.l + steps)


@dataclass(frozen=True, eq=False)
class WavefunctionGrid:
    """Wavefunction (or superpotential) samples on a strictly increasing grid."""

    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", values)
        if x.ndim != 1 or values.shape != x.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if len(x) >= 2 and not np.all(np.diff(x) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("wavefunction values must be finite")

    def to_csv_text(self):
        lines = ["x,value"]
        lines += [f"{float(xi)!r},{float(vi)!r}" for xi, vi in zip(self.x, self.values)]
        return "\n".join(lines) + "\n"

    def to_json_dict(self):
        return {"x": self.x.tolist(), "values": self.values.tolist()}


def _radial_argument(params, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("radial models are defined for r > 0")
    return x


def morse_zeta(params, x):
    """Morse basis argument zeta(x) = (2D+1) e^{-alpha x} (= sqrt(8 V0)/alpha e^{-alpha x})."""
    x = np.asarray(x, dtype=float)
    return (2 * params.D + 1) * np.exp(-params.alpha * x)


def basis_series(params, coeffs, x):
    """Pointwise sum_n coeffs[n] phi_n(x) over the model's basis.

    One sweep of the weighted Laguerre recurrence serves every order, so the
    cost is O(len(coeffs) * len(x)) and the evaluation is safe far past the
    oscillatory region.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n_max = len(coeffs) - 1
    if params.variant == "morse":
        arg = morse_zeta(params, x)
        order = 2 * params.scale
        k0 = math.sqrt(params.alpha) * math.exp(-0.5 * ln_gamma(order + 1))
        prefactor = arg ** (params.scale + 0.5)
    else:
        r = _radial_argument(params, x)
        lam = params.scale
        nu = params.l + 0.5
        order = nu
        arg = (lam * r) ** 2
        k0 = math.sqrt(2 * lam) * math.exp(-0.5 * ln_gamma(nu + 1))
        prefactor = (lam * r) ** (params.l + 1)
    table = laguerre_weighted_table(n_max, order, arg)
    acc = np.zeros_like(arg)
    k_n = k0
    for n in range(n_max + 1):
        if n >= 1:
            k_n *= math.sqrt(n / (n + order))
        if coeffs[n] != 0.0:
            acc += coeffs[n] * k_n * table[n]
    return prefactor * acc


def basis_eval(params, n, x):
    """Basis function phi_n(x) of the model's tridiagonalizing basis."""
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    out = basis_series(params, coeffs, np.atleast_1d(x))
    return out if np.ndim(x) else float(out[0])


def eigenstate_eval_oscillator(params, m, r):
    """Exact oscillator eigenstate chi_m(r): the lambda -> sqrt(omega) basis."""
    if params.variant != "oscillator":
        raise UnsupportedModelError(
            f"closed-form eigenstates are oscillator-only, got {params.variant}")
    with warnings.catch_warnings():
        # the eigenbasis *is* the decoupling point lambda^2 = omega; no chain is built
        warnings.simplefilter("ignore", DecoupledChainWarning)
        eigen_params = replace(params, scale=math.sqrt(params.omega))
    return basis_eval(eigen_params, m, r)


def potential_eval(params, which, x):
    """Closed-form potential V or its partner V_plus at x.

    The oscillator V_plus constant is -(l + 1/2) omega, the value required
    by V+(eta) = V(eta+delta) + eps_1(eta) and by the superpotential
    reconstruction W^2 + W'/sqrt(2).
    """
    if which not in ("V", "V_plus"):
        raise ValueError(f"which must be 'V' or 'V_plus', got {which!r}")
    plus = which == "V_plus"
    if params.variant == "morse":
        x = np.asarray(x, dtype=float)
        al, dpar = params.alpha, params.D
        coef = (dpar - 0.5) if plus else (dpar + 0.5)
        e = np.exp(-al * x)
        out = 0.5 * al ** 2 * coef ** 2 * (e ** 2 - 2 * e) + 0.5 * al ** 2 * dpar ** 2
    else:
        r = np.asarray(x, dtype=float)
        if np.any(r == 0):
            raise SingularityError("potential singular at r = 0")
        if np.any(r < 0):
            raise DomainError("radial potentials are defined for r > 0")
        l = params.l
        cent = ((l + 1) * (l + 2) if plus else l * (l + 1)) / (2.0 * r ** 2)
        if params.variant == "kinetic":
            out = cent
        else:
            om = params.omega
            const = (l + 0.5) if plus else (l + 1.5)
            out = cent + 0.5 * om ** 2 * r ** 2 - const * om
    return out if np.ndim(x) else float(out)


def partner_potential_residual(params, grid):
    """Max |V_plus(eta; x) - V(eta+delta; x) - eps_1(eta)| over the grid."""
    grid = np.asarray(grid, dtype=float)
    e1 = epsilon1(make_model(params))
    v_plus = potential_eval(params, "V_plus", grid)
    v_shift = potential_eval(shifted(params), "V", grid)
    return float(np.max(np.abs(v_plus - v_shift - e1)))
