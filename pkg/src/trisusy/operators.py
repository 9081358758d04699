"""Model-agnostic tridiagonal operator algebra.

A positive semi-definite operator with matrix elements

    H[n, n] = a_n,   H[n, n+1] = H[n+1, n] = b_n

factorizes as H = A^dag A through ladder coefficients (c_n, d_n) with

    a_n = c_n^2 + d_n^2,        b_n = c_n d_{n+1},

and the supersymmetric partner H+ = A A^dag has

    a+_n = c_n^2 + d_{n+1}^2,   b+_n = c_{n+1} d_{n+1}.

Convention: d_n >= 0 with d_0 = 0, while c_n carries the sign of b_n, so a
chain and its ladder coefficients determine each other without an extra
phase channel.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DecoupledChainWarning, NegativityError, SingularityError

__all__ = [
    "TridiagonalOperator",
    "LadderCoefficients",
    "ExpansionVector",
    "recursion_polynomials",
    "factorize",
    "compose",
    "partner",
    "apply_A",
    "apply_Adagger",
]

# Relative tolerance for accepting the backward (minimal-solution) pass of
# factorize: the continued fraction must reproduce c_0^2 = a_0 - eps0.
_CF_CONSISTENCY_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal operator truncated at index n_max.

    Parameters
    ----------
    a : array_like
        Diagonal a_0..a_{n_max}.
    b : array_like
        Off-diagonal b_0..b_{n_max-1}; b_n couples indices n and n+1.
    decoupled : bool
        Set when a vanishing b_n is intentional (diagnostic chains built by
        :func:`compose`); otherwise zero off-diagonals are rejected.
    """

    a: np.ndarray
    b: np.ndarray
    decoupled: bool = False

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.ndim != 1 or b.ndim != 1 or len(b) != len(a) - 1:
            raise ValueError(f"need len(b) == len(a) - 1, got {len(a)=}, {len(b)=}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("matrix elements must be finite")
        if not self.decoupled and np.any(b == 0.0):
            n = int(np.flatnonzero(b == 0.0)[0])
            raise ValueError(f"b_{n} = 0 decouples the chain; rejected at construction")

    @property
    def n_max(self):
        return len(self.a) - 1

    def apply(self, v):
        """Matrix-vector product on the first len(v) coefficients."""
        coeffs = np.asarray(v.coeffs if isinstance(v, ExpansionVector) else v)
        k = len(coeffs) - 1
        if k > self.n_max:
            raise ValueError(f"vector of length {k + 1} exceeds operator size {self.n_max + 1}")
        out = self.a[: k + 1] * coeffs
        out[:-1] = out[:-1] + self.b[:k] * coeffs[1:]
        out[1:] = out[1:] + self.b[:k] * coeffs[:-1]
        return ExpansionVector(out)

    def to_json_dict(self):
        return {"n_max": self.n_max, "a": self.a.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_json_dict(cls, payload):
        op = cls(np.asarray(payload["a"], dtype=float),
                 np.asarray(payload["b"], dtype=float),
                 decoupled=bool(payload.get("decoupled", False)))
        if "n_max" in payload and int(payload["n_max"]) != op.n_max:
            raise ValueError(f"n_max={payload['n_max']} inconsistent with len(a)={len(op.a)}")
        return op


@dataclass(frozen=True, eq=False)
class LadderCoefficients:
    """Ladder coefficients c_0..c_{n_max} (signed) and d_0..d_{n_max} (d_0 = 0, d >= 0)."""

    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        d = np.asarray(self.d, dtype=float)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        if c.ndim != 1 or d.ndim != 1 or len(c) != len(d):
            raise ValueError("c and d must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(d))):
            raise ValueError("ladder coefficients must be finite")
        if len(d) and d[0] != 0.0:
            raise ValueError(f"d_0 must be 0, got {d[0]}")
        if np.any(d < 0.0):
            raise ValueError("d_n must be nonnegative (signs live on c_n)")

    @property
    def n_max(self):
        return len(self.c) - 1

    def to_json_dict(self):
        return {"n_max": self.n_max, "c": self.c.tolist(), "d": self.d.tolist()}

    @classmethod
    def from_json_dict(cls, payload):
        lad = cls(np.asarray(payload["c"], dtype=float), np.asarray(payload["d"], dtype=float))
        if "n_max" in payload and int(payload["n_max"]) != lad.n_max:
            raise ValueError(f"n_max={payload['n_max']} inconsistent with len(c)={len(lad.c)}")
        return lad


@dataclass(frozen=True, eq=False)
class ExpansionVector:
    """Coefficients of a state over the basis, indices 0..N."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if not np.iscomplexobj(coeffs):
            coeffs = coeffs.astype(float)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.ndim != 1:
            raise ValueError("expansion coefficients must form a 1-d array")

    @property
    def n(self):
        return len(self.coeffs) - 1

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    @classmethod
    def unit(cls, index, n):
        coeffs = np.zeros(n + 1)
        coeffs[index] = 1.0
        return cls(coeffs)


def recursion_polynomials(op, eps, n_terms):
    """Recursion polynomials P_0..P_N at energy eps.

    P_0 = 1, P_1 = (eps - a_0)/b_0 and

        P_{n+1} = [(eps - a_n) P_n - b_{n-1} P_{n-1}] / b_n.

    Simple forward evaluation; for chains whose minimal solution decays
    geometrically the values lose relative accuracy once the dominant
    solution's rounding contamination takes over (factorize compensates with
    a backward pass).
    """
    if n_terms > op.n_max:
        raise ValueError(f"N={n_terms} exceeds operator n_max={op.n_max}")
    if np.any(op.b[:n_terms] == 0.0):
        n = int(np.flatnonzero(op.b[:n_terms] == 0.0)[0])
        raise ZeroDivisionError(f"b_{n} = 0; recursion polynomials undefined")
    p = np.zeros(n_terms + 1)
    p[0] = 1.0
    if n_terms >= 1:
        p[1] = (eps - op.a[0]) / op.b[0]
    for n in range(1, n_terms):
        p[n + 1] = ((eps - op.a[n]) * p[n] - op.b[n - 1] * p[n - 1]) / op.b[n]
    return p


def _forward_csq(a, b, eps0, n_top):
    """Forward c_n^2 = -b_n P_{n+1}/P_n via the equivalent ratio recurrence.

    Returns (values, first_bad_index, failure_kind); indices past
    first_bad_index are not filled.
    """
    x = np.full(n_top, np.nan)
    csq_prev = None
    for n in range(n_top):
        csq = a[n] - eps0 - (b[n - 1] ** 2 / csq_prev if n else 0.0)
        if csq == 0.0:
            return x, n, "singular"
        if csq < 0.0:
            return x, n, "negative"
        x[n] = csq
        csq_prev = csq
    return x, n_top, None


def _backward_csq(a, b, eps0, seed):
    """Backward continued fraction c_{n-1}^2 = b_{n-1}^2 / (a_n - eps0 - c_n^2).

    Selects the recurrence solution minimal at large n; valid exactly when
    eps0 is the chain's ground energy, which the caller verifies through the
    n = 0 consistency check.
    """
    n_top = len(b)
    y = np.full(n_top, np.nan)
    y[n_top - 1] = seed
    for n in range(n_top - 1, 0, -1):
        den = a[n] - eps0 - y[n]
        if den <= 0.0:
            return None
        y[n - 1] = b[n - 1] ** 2 / den
    return y


def factorize(op, eps0, n_terms):
    """Ladder coefficients of op - eps0 from the recursion-polynomial ratios.

    Parameters
    ----------
    op : TridiagonalOperator
    eps0 : float
        Ground-state energy of the chain (models in the catalogue are
        pre-shifted so eps0 = 0); any energy at or below the ground state
        yields a valid factorization of op - eps0.
    n_terms : int
        Chain is returned through index N = n_terms, requiring
        n_terms <= op.n_max - 1 so the sign of c_N is defined.

    Returns
    -------
    LadderCoefficients
        c_n = sign(b_n) sqrt(-b_n P_{n+1}/P_n), d_{n+1} = |b_n| / |c_n|.

    Notes
    -----
    The forward ratio recurrence is backward-stable but its values are
    contaminated by the dominant recurrence solution (catastrophically so
    for oscillator-type chains, where c_n^2 can even turn negative near
    n = 40 in double precision).  A backward continued-fraction pass seeded
    above the requested window recovers the minimal solution; it is accepted
    only if it reproduces c_0^2 = a_0 - eps0, otherwise the forward values
    stand (continuum-edge chains such as the kinetic-energy model).
    """
    if n_terms > op.n_max - 1:
        raise ValueError(f"N={n_terms} needs operator rows through {n_terms + 1}, "
                         f"got n_max={op.n_max}")
    n_top = len(op.b)
    x, ok_fwd, kind = _forward_csq(op.a, op.b, eps0, n_top)

    seed = x[n_top - 1] if ok_fwd == n_top else 0.0
    y = _backward_csq(op.a, op.b, eps0, seed)
    use = None
    if y is not None:
        target = op.a[0] - eps0
        if target > 0 and abs(y[0] - target) <= _CF_CONSISTENCY_RTOL * abs(target):
            use = y
    if use is None:
        if ok_fwd <= n_terms:
            if kind == "singular":
                raise SingularityError(f"recursion polynomial vanishes at n={ok_fwd}")
            raise NegativityError(
                f"negativity at n={ok_fwd}: -b_n P_(n+1)/P_n < 0 "
                f"(operator not positive semi-definite at eps0={eps0})")
        use = x

    c = np.empty(n_terms + 1)
    d = np.zeros(n_terms + 1)
    for n in range(n_terms + 1):
        c[n] = math.copysign(math.sqrt(use[n]), op.b[n])
        if n >= 1:
            d[n] = abs(op.b[n - 1]) / math.sqrt(use[n - 1])
    return LadderCoefficients(c, d)


def compose(lad):
    """Tridiagonal operator a_n = c_n^2 + d_n^2, b_n = c_n d_{n+1}."""
    a = lad.c ** 2 + lad.d ** 2
    b = lad.c[:-1] * lad.d[1:]
    decoupled = bool(np.any(b == 0.0))
    if decoupled:
        warnings.warn("composed chain has b_n = 0 (decoupled)", DecoupledChainWarning,
                      stacklevel=2)
    return TridiagonalOperator(a, b, decoupled=decoupled)


def partner(lad):
    """Supersymmetric partner a+_n = c_n^2 + d_{n+1}^2, b+_n = c_{n+1} d_{n+1}.

    The partner needs d_{n+1}, so it is returned truncated one index lower
    than the input chain.
    """
    a_plus = lad.c[:-1] ** 2 + lad.d[1:] ** 2
    b_plus = lad.c[1:-1] * lad.d[1:-1]
    decoupled = bool(np.any(b_plus == 0.0))
    if decoupled:
        warnings.warn("partner chain has b_n = 0 (decoupled)", DecoupledChainWarning,
                      stacklevel=2)
    return TridiagonalOperator(a_plus, b_plus, decoupled=decoupled)


def apply_A(lad, v):
    """Forward-shift action (A v)_n = c_n v_n + d_{n+1} v_{n+1}.

    The last coefficient uses only the entries available below the
    truncation boundary.
    """
    coeffs = v.coeffs
    k = len(coeffs) - 1
    if k > lad.n_max:
        raise ValueError(f"vector of length {k + 1} exceeds chain size {lad.n_max + 1}")
    out = lad.c[: k + 1] * coeffs
    out[:k] = out[:k] + lad.d[1: k + 1] * coeffs[1:]
    return ExpansionVector(out)


def apply_Adagger(lad, v):
    """Adjoint action (A^dag v)_n = c_n v_n + d_n v_{n-1}.

    The component that would land on index N+1 is dropped at the truncation
    boundary.
    """
    coeffs = v.coeffs
    k = len(coeffs) - 1
    if k > lad.n_max:
        raise ValueError(f"vector of length {k + 1} exceeds chain size {lad.n_max + 1}")
    out = lad.c[: k + 1] * coeffs
    out[1:] = out[1:] + lad.d[1: k + 1] * coeffs[:-1]
    return ExpansionVector(out)
