"""State-level machinery: ground-state expansions, ladder action on eigenstates,
coherent states, moment checks and the superpotential.

The ground state of a factorized chain expands over the basis with
coefficients Lambda_0 Q_n(0), Q_n(0) = prod_{j<n} (-c_j / d_{j+1}); applying
the forward-shift operator to it cancels identically, which is the
annihilation property everything else leans on.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (DivergenceError, DomainError, QuadratureError, SingularityError,
                     TruncationWarning, UnsupportedModelError, WindowError)
from .invariance import epsilon1, spectrum
from .models import WavefunctionGrid, basis_series, make_model, morse_zeta, shifted
from .operators import ExpansionVector, apply_Adagger
from .quadrature import exponential_moment
from .specfun import hyp2f1_terminating, ln_gamma

__all__ = [
    "GroundStateExpansion",
    "CoherentState",
    "ground_state_coefficients",
    "ground_wavefunction",
    "ground_state_closed_form",
    "eigenstate_basis_overlap",
    "raise_state",
    "lowering_check_oscillator",
    "product_term",
    "coherent_coefficients",
    "moment_check",
    "superpotential_eval",
    "morse_superpotential_closed_form",
    "morse_product_closed_form",
]

# Consecutive ratios |Q_{n+1}/Q_n| >= 1 at the tail before the expansion is
# declared non-normalizable.
_DIVERGENCE_RUN = 10


@dataclass(frozen=True, eq=False)
class GroundStateExpansion:
    """Ground-state data: Q_n(0) for n = 0..N and the normalization Lambda_0(0)."""

    Q: np.ndarray
    lambda0: float

    @property
    def n(self):
        return len(self.Q) - 1

    def coefficients(self):
        """Normalized expansion Lambda_0 Q as an ExpansionVector."""
        return ExpansionVector(self.lambda0 * self.Q)


@dataclass(frozen=True, eq=False)
class CoherentState:
    """Expansion of |z> over the energy eigenstates, truncated at N."""

    z: complex
    energy_coeffs: np.ndarray

    @property
    def n(self):
        return len(self.energy_coeffs) - 1

    def norm_sq(self):
        return float(np.sum(np.abs(self.energy_coeffs) ** 2))

    def to_json_dict(self):
        return {
            "z": {"re": self.z.real, "im": self.z.imag},
            "coeff_re": self.energy_coeffs.real.tolist(),
            "coeff_im": self.energy_coeffs.imag.tolist(),
        }


def ground_state_coefficients(model, n_terms):
    """Q_n(0) = prod_{j<n}(-c_j/d_{j+1}) and Lambda_0 = (sum Q_n^2)^(-1/2), n <= N.

    Raises DivergenceError when the tail ratios stay at or above 1, the
    numeric signature of a non-normalizable candidate (e.g. the kinetic
    chain, whose spectrum is purely continuous).
    """
    q = np.zeros(n_terms + 1)
    q[0] = 1.0
    run = 0
    for j in range(n_terms):
        d_next = model.d(j + 1)
        if d_next == 0.0:
            raise SingularityError(f"d_{j + 1} = 0: ground-state product undefined")
        ratio = -model.c(j) / d_next
        q[j + 1] = q[j] * ratio
        run = run + 1 if abs(ratio) >= 1.0 else 0
    if run >= min(_DIVERGENCE_RUN, n_terms):
        raise DivergenceError(
            f"|Q_(n+1)/Q_n| >= 1 for the last {run} steps: expansion of model "
            f"{model.label} is not normalizable")
    return GroundStateExpansion(Q=q, lambda0=1.0 / math.sqrt(float(np.sum(q ** 2))))


def ground_wavefunction(params, grid, n_terms, tail_tol=1e-6):
    """Ground-state wavefunction psi_0(x) = Lambda_0 sum_n Q_n phi_n(x) on the grid.

    Emits TruncationWarning when the last retained term still exceeds
    tail_tol times the wavefunction scale.
    """
    grid = np.asarray(grid, dtype=float)
    model = make_model(params)
    gse = ground_state_coefficients(model, n_terms)
    values = basis_series(params, gse.lambda0 * gse.Q, grid)
    last = np.zeros(n_terms + 1)
    last[n_terms] = gse.lambda0 * gse.Q[n_terms]
    tail = float(np.max(np.abs(basis_series(params, last, grid))))
    scale = float(np.max(np.abs(values)))
    if tail > tail_tol * max(scale, 1e-300):
        warnings.warn(
            f"truncated ground-state series: last term {tail:.2e} exceeds "
            f"{tail_tol:.1e} x scale {scale:.2e}; increase N", TruncationWarning,
            stacklevel=2)
    return WavefunctionGrid(grid, values)


def ground_state_closed_form(params, x):
    """Closed-form normalized ground state (oscillator and Morse only)."""
    x = np.asarray(x, dtype=float)
    if params.variant == "oscillator":
        om, l = params.omega, params.l
        norm = math.sqrt(2 * math.sqrt(om)) * math.exp(-0.5 * ln_gamma(l + 1.5))
        return norm * (math.sqrt(om) * x) ** (l + 1) * np.exp(-0.5 * om * x ** 2)
    if params.variant == "morse":
        zeta = morse_zeta(params, x)
        norm = math.sqrt(params.alpha) * math.exp(-0.5 * ln_gamma(2 * params.D))
        return norm * zeta ** params.D * np.exp(-zeta / 2.0)
    raise UnsupportedModelError(f"no closed-form bound ground state for {params.variant}")


def eigenstate_basis_overlap(params, n, m):
    """Overlap Gamma_{n,m} = <phi_n | eps_m> for the oscillator (closed form).

    Product of a Gamma-factor prefactor (assembled in log space) and a
    terminating 2F1 at argument ((lambda^2+omega)/(lambda^2-omega))^2.
    Collapses to delta_{n,m} on the lambda^2 = omega edge where the basis is
    the eigenbasis.
    """
    if params.variant != "oscillator":
        raise UnsupportedModelError(
            f"eigenstate overlaps are implemented for the oscillator only, "
            f"got {params.variant}")
    if n < 0 or m < 0:
        raise DomainError("overlap indices must be nonnegative")
    lam, om, l = params.scale, params.omega, params.l
    nu = l + 0.5
    if lam ** 2 == om:
        return 1.0 if n == m else 0.0
    tau = ((lam ** 2 + om) / (lam ** 2 - om)) ** 2
    f = hyp2f1_terminating(m, -n, -(n + m + nu), tau)
    ln_mag = (0.5 * (math.log(4 * lam * math.sqrt(om)) + ln_gamma(n + 1) + ln_gamma(m + 1)
                     - ln_gamma(n + nu + 1) - ln_gamma(m + nu + 1))
              + (l + 1) * math.log(lam * math.sqrt(om)) - math.log(2.0)
              + ln_gamma(n + m + nu + 1) - ln_gamma(n + 1) - ln_gamma(m + 1)
              + (n + m) * math.log(abs(om - lam ** 2) / 2.0)
              - (n + m + nu + 1) * math.log((om + lam ** 2) / 2.0))
    sign = (-1.0) ** m * (1.0 if om > lam ** 2 else (-1.0) ** (n + m))
    return sign * math.exp(ln_mag) * f


def _overlap_column(params, m, n_top):
    return np.array([eigenstate_basis_overlap(params, n, m) for n in range(n_top + 1)])


def raise_state(model, eigstate_m, m):
    """Raising-operator image |eps_{m+1}> from |eps_m>.

    Realizes B^dag = A^dag T^dag: re-expands the level at the shifted
    parameter eta + delta (closed-form overlaps, oscillator only), applies
    A^dag in the basis, and divides by sqrt(sum_{k<=m} eps_1(eta + k delta)).
    """
    params = model.params
    if params is None or params.variant != "oscillator":
        raise UnsupportedModelError(
            "raise_state needs the eta-shifted expansion coefficients, which the "
            "catalogue supplies for the oscillator only")
    n_top = eigstate_m.n
    claimed = _overlap_column(params, m, n_top)
    overlap = float(np.dot(eigstate_m.coeffs.real, claimed))
    if abs(abs(overlap) - 1.0) > 1e-6 * max(1.0, eigstate_m.norm()):
        raise ValueError(f"input is not the level-{m} eigenstate expansion "
                         f"(overlap {overlap:.6f})")
    u = _overlap_column(shifted(params), m, n_top)
    w = apply_Adagger(model.ladder(n_top), ExpansionVector(u))
    total = 0.0
    for k in range(m + 1):
        total += epsilon1(model, model.eta + k * model.delta)
    return ExpansionVector(w.coeffs / math.sqrt(total))


def lowering_check_oscillator(params, m, n_top):
    """Deviation of B|eps_m> = sqrt(2 m omega) |eps_{m-1}> in the basis.

    Evaluates c_n Gamma_{n,m} + d_{n+1} Gamma_{n+1,m} against
    sqrt(2 m omega) Gamma_{n,m-1}(eta + delta) and returns the l2 norm of
    the difference over n <= N (for m = 0 the target is zero: annihilation).
    """
    if params.variant != "oscillator":
        raise UnsupportedModelError("lowering check is oscillator-only")
    if m < 0:
        raise DomainError("need m >= 0")
    model = make_model(params)
    gam = _overlap_column(params, m, n_top + 1)
    if abs(gam[n_top]) > 1e-10:
        raise DivergenceError(
            f"|Gamma_(N,m)| = {abs(gam[n_top]):.2e} not below 1e-10 at N={n_top}; "
            "increase N")
    if m >= 1:
        target = math.sqrt(2 * m * params.omega) * _overlap_column(shifted(params), m - 1,
                                                                   n_top)
    else:
        target = np.zeros(n_top + 1)
    dev_sq = 0.0
    for n in range(n_top + 1):
        lhs = model.c(n) * gam[n] + model.d(n + 1) * gam[n + 1]
        dev_sq += (lhs - target[n]) ** 2
    return math.sqrt(dev_sq)


def product_term(model, n):
    """Double product-sum prod_{j<n} sum_{k=j}^{n-1} eps_1(eta + k delta); 1 at n = 0."""
    if n < 0:
        raise WindowError(f"need n >= 0, got {n}")
    if model.m_max is not None and n > model.m_max:
        raise WindowError(f"n={n} beyond bound-state window m_max={model.m_max}")
    e1 = [epsilon1(model, model.eta + k * model.delta) for k in range(n)]
    out = 1.0
    for j in range(n):
        s = math.fsum(e1[j:n])
        if s <= 0.0:
            raise WindowError(f"partial energy sum from k={j} is {s} <= 0: outside the "
                              "bound-state window")
        out *= s
    return out


def coherent_coefficients(model, z, n_terms):
    """Energy-eigenstate coefficients of the coherent state |z>.

    coeff_n = exp(-|z|^2 eps_1(eta - delta) / 2) z^n / n! sqrt(product_term(n)),
    assembled in log space so large truncations cannot overflow.
    """
    if model.m_max is not None and n_terms > model.m_max:
        raise WindowError(f"N={n_terms} beyond bound-state window m_max={model.m_max}")
    z = complex(z)
    decay = epsilon1(model, model.eta - model.delta)
    prefactor_ln = -0.5 * abs(z) ** 2 * decay
    coeffs = np.zeros(n_terms + 1, dtype=complex)
    coeffs[0] = math.exp(prefactor_ln)
    if z != 0:
        phase = z / abs(z)
        for n in range(1, n_terms + 1):
            ln_mag = (prefactor_ln + n * math.log(abs(z)) - ln_gamma(n + 1)
                      + 0.5 * math.log(product_term(model, n)))
            coeffs[n] = math.exp(ln_mag) * phase ** n
    return CoherentState(z=z, energy_coeffs=coeffs)


def moment_check(model, rho, n, nodes=96, check_nodes=64):
    """Moment condition of the coherent-state resolution of the identity.

    Compares the integral of x^n e^{-x eps_1(eta - delta)} rho(x) over
    [0, inf) with 2 (n!)^2 / product_term(n).

    Returns
    -------
    (lhs, rhs, rel_error)

    Raises QuadratureError when the two Gauss-Laguerre node counts disagree,
    and runs in report-only mode in the sense that nothing is asserted.
    """
    decay = epsilon1(model, model.eta - model.delta)
    if decay <= 0:
        raise UnsupportedModelError(
            f"moment check needs eps_1(eta - delta) > 0, got {decay} "
            f"for model {model.label}")
    lhs = exponential_moment(rho, decay, n, nodes)
    lhs_check = exponential_moment(rho, decay, n, check_nodes)
    scale = max(abs(lhs), 1e-300)
    if abs(lhs - lhs_check) > 1e-9 * scale:
        raise QuadratureError(
            f"moment integral not converged: {lhs!r} vs {lhs_check!r} at "
            f"{nodes}/{check_nodes} nodes")
    rhs = 2.0 * math.exp(2.0 * ln_gamma(n + 1)) / product_term(model, n)
    return lhs, rhs, abs(lhs - rhs) / abs(rhs)


def _finite_difference_log_derivative(params, grid, n_terms, model):
    """-psi'/(sqrt(2) psi) by 5-point centered stencils around each grid point."""
    gse = ground_state_coefficients(model, n_terms)
    coeffs = gse.lambda0 * gse.Q

    def psi(x):
        return basis_series(params, coeffs, x)

    h = 1e-2
    if params.variant != "morse":
        h = min(h, 0.25 * float(np.min(grid)))
    stencil = (psi(grid - 2 * h) - 8 * psi(grid - h) + 8 * psi(grid + h)
               - psi(grid + 2 * h)) / (12 * h)
    base = psi(grid)
    _guard_zeros(base, grid)
    return -stencil / (math.sqrt(2.0) * base)


def _guard_zeros(psi_values, grid):
    scale = float(np.max(np.abs(psi_values)))
    bad = np.abs(psi_values) < 1e-12 * scale
    if np.any(bad):
        x_bad = np.asarray(grid)[bad][0]
        raise SingularityError(f"psi_0 vanishes to working precision at x={x_bad}; "
                               "remove such points from the grid")


def superpotential_eval(params, grid, n_terms, channel="series"):
    """Superpotential W(x) reconstructed from the ladder series (or finite differences).

    The series channel evaluates

        W(x) psi_0(x) = -1/2 Lambda_0 sum_n Q_n [d_n phi_{n-1} - d_{n+1} phi_{n+1}]

    and divides by the same-truncation psi_0 series; channel="fd" instead
    differentiates psi_0 numerically as -psi_0'/(sqrt(2) psi_0).
    """
    grid = np.asarray(grid, dtype=float)
    model = make_model(params)
    if channel == "fd":
        return WavefunctionGrid(grid, _finite_difference_log_derivative(
            params, grid, n_terms, model))
    if channel != "series":
        raise ValueError(f"channel must be 'series' or 'fd', got {channel!r}")
    gse = ground_state_coefficients(model, n_terms + 1)
    q = gse.Q
    numer_coeffs = np.zeros(n_terms + 1)
    for k in range(n_terms + 1):
        up = q[k + 1] * model.d(k + 1)
        down = q[k - 1] * model.d(k) if k >= 1 else 0.0
        numer_coeffs[k] = -0.5 * (up - down)
    numer = basis_series(params, numer_coeffs, grid)
    psi = basis_series(params, q[: n_terms + 1], grid)
    _guard_zeros(psi, grid)
    return WavefunctionGrid(grid, numer / psi)


def morse_superpotential_closed_form(params, x):
    """Closed-form Morse superpotential alpha (2D - zeta(x)) / (2 sqrt(2))."""
    if params.variant != "morse":
        raise UnsupportedModelError("closed-form superpotential is Morse-only")
    zeta = morse_zeta(params, np.asarray(x, dtype=float))
    return params.alpha / (2 * math.sqrt(2.0)) * (2 * params.D - zeta)


def morse_product_closed_form(params, n):
    """Closed form (alpha^2/2)^n n! Gamma(2D-n+1)/Gamma(2D-2n+1) of product_term."""
    if params.variant != "morse":
        raise UnsupportedModelError("closed-form product term is Morse-only")
    if 2 * params.D - 2 * n + 1 <= 0:
        raise WindowError(f"n={n} outside the window: Gamma(2D-2n+1) pole")
    ln_val = (n * math.log(params.alpha ** 2 / 2.0) + ln_gamma(n + 1)
              + ln_gamma(2 * params.D - n + 1) - ln_gamma(2 * params.D - 2 * n + 1))
    return math.exp(ln_val)
