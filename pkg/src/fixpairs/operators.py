"""Potential operators, the energy functional, and growth certificates.

A potential operator A is the gradient of a scalar functional T.  The energy

    J(u) = 0.5 * ||u||^2 - T(u),        T(u) = int_0^1 (A(s*u), u) ds

has gradient J' = I - A, so critical points of J are exactly fixed points of
A.  T is recovered from A by the Avez line integral above; operators that
ship a closed-form potential use it instead, which keeps the functional and
the gradient consistent to machine precision during descent.

Growth certificates record a sampled envelope ||A(u)|| <= c*||u||^theta + b.
Sampling cannot certify a limsup, so a certificate is evidence, not a proof;
every report carries the "sampled-envelope" kind to make that explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .space import H1Vector

__all__ = [
    "GrowthCertificate",
    "LinearOperatorSpec",
    "OddnessError",
    "PotentialOperatorSpec",
    "avez_potential",
    "fd_gradient_check",
    "functional_J",
    "gradient_J",
    "growth_fit",
    "lower_bound_J",
]

_ODDNESS_SAMPLES = 100
_ODDNESS_SEED = 20260810
_ODDNESS_TOL = 1e-10


class OddnessError(ValueError):
    """An operator flagged odd failed the sampled oddness check."""


@dataclass(frozen=True, eq=False)
class PotentialOperatorSpec:
    """An operator on coefficient vectors together with its potential data.

    apply_coeffs acts on raw coefficient arrays (the hot path); apply wraps
    it for H1Vector.  apply_batch, when given, maps an (m, n_modes) array of
    stacked inputs to stacked outputs and is used by grid-heavy checks.
    theta is the declared growth exponent in [0, 1).  Operators flagged odd
    are validated by sampling at construction rather than trusted.
    """

    n_modes: int
    apply_coeffs: Callable[[np.ndarray], np.ndarray]
    odd: bool = True
    theta: float = 0.0
    potential_coeffs: Callable[[np.ndarray], float] | None = None
    apply_batch: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = "operator"

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError("theta must lie in [0, 1)")
        if self.odd:
            _check_oddness(self)

    def apply(self, u: H1Vector) -> H1Vector:
        if u.n_modes != self.n_modes:
            raise ValueError("vector does not match operator dimension")
        return H1Vector(self.apply_coeffs(u.coeffs))

    def apply_many(self, stacked: np.ndarray) -> np.ndarray:
        if self.apply_batch is not None:
            return self.apply_batch(stacked)
        return np.stack([self.apply_coeffs(row) for row in stacked])


def _check_oddness(op: PotentialOperatorSpec) -> None:
    rng = np.random.default_rng(_ODDNESS_SEED)
    radii = np.geomspace(1e-2, 10.0, _ODDNESS_SAMPLES)
    dirs = rng.standard_normal((_ODDNESS_SAMPLES, op.n_modes))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    samples = radii[:, None] * dirs
    plus = op.apply_many(samples)
    minus = op.apply_many(-samples)
    worst = float(np.max(np.linalg.norm(plus + minus, axis=1)))
    if worst > _ODDNESS_TOL:
        raise OddnessError(
            f"operator '{op.label}' flagged odd but ||A(-u) + A(u)|| reaches {worst:.3e}"
        )
    at_zero = float(np.linalg.norm(op.apply_coeffs(np.zeros(op.n_modes))))
    if at_zero > _ODDNESS_TOL:
        raise OddnessError(f"operator '{op.label}' flagged odd but ||A(0)|| = {at_zero:.3e}")


@dataclass(frozen=True, eq=False)
class LinearOperatorSpec:
    """A linear operator as a matrix in the sine basis."""

    matrix: np.ndarray
    self_adjoint: bool = True

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix must be finite")
        if self.self_adjoint and float(np.max(np.abs(m - m.T))) > 1e-12:
            raise ValueError("matrix flagged self-adjoint but is not symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def apply(self, u: H1Vector) -> H1Vector:
        return H1Vector(self.matrix @ u.coeffs)

    def form(self, u: H1Vector, v: H1Vector) -> float:
        """The bilinear form (B u, v)."""
        return float(v.coeffs @ (self.matrix @ u.coeffs))

    @staticmethod
    def scaled_identity(scale: float, n_modes: int) -> "LinearOperatorSpec":
        return LinearOperatorSpec(matrix=scale * np.eye(n_modes))


@dataclass(frozen=True)
class GrowthCertificate:
    """Sampled envelope ||A(u)|| <= c ||u||^theta + b.

    Covers every sample taken during the fit (with slack on c); it is not a
    proof of the limsup growth condition and is labelled accordingly.
    """

    c: float
    b: float
    theta: float
    sampled_max_ratio: float
    radii_tested: tuple[float, ...]
    sample_maxima: tuple[float, ...] = ()
    kind: str = field(default="sampled-envelope")

    def bound(self, r: float) -> float:
        return self.c * r**self.theta + self.b

    def coverage_margin(self) -> float:
        """Smallest gap between the envelope and the recorded sample maxima."""
        if not self.radii_tested:
            return float("nan")
        gaps = [self.bound(r) - y for r, y in zip(self.radii_tested, self.sample_maxima)]
        return float(min(gaps))

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "b": self.b,
            "theta": self.theta,
            "sampled_max_ratio": self.sampled_max_ratio,
            "radii_tested": list(self.radii_tested),
            "sample_maxima": list(self.sample_maxima),
            "kind": self.kind,
        }


def _unit_gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def avez_potential(A: PotentialOperatorSpec, u: H1Vector, s_order: int = 16) -> float:
    """Recover the potential T(u) = int_0^1 (A(s*u), u) ds by quadrature.

    Exact for linear A (the integrand is linear in s); for sublinear power
    nonlinearities the s-integrand has an algebraic endpoint singularity and
    the default order is accurate to roughly 1e-4 relative.
    """
    if s_order < 2:
        raise ValueError("s_order must be >= 2")
    s, w = _unit_gauss(s_order)
    c = u.coeffs
    images = A.apply_many(s[:, None] * c[None, :])
    return float(w @ (images @ c))


def functional_J(
    A: PotentialOperatorSpec, u: H1Vector, s_order: int = 16, potential: str = "auto"
) -> float:
    """The energy J(u) = 0.5 ||u||^2 - T(u).

    potential="auto" uses the operator's closed-form potential when it has
    one and the Avez quadrature otherwise; "avez" and "closed" force the
    respective route.
    """
    half_sq = 0.5 * float(np.dot(u.coeffs, u.coeffs))
    if potential == "auto":
        potential = "closed" if A.potential_coeffs is not None else "avez"
    if potential == "closed":
        if A.potential_coeffs is None:
            raise ValueError("operator has no closed-form potential")
        return half_sq - float(A.potential_coeffs(u.coeffs))
    if potential == "avez":
        return half_sq - avez_potential(A, u, s_order=s_order)
    raise ValueError(f"unknown potential mode {potential!r}")


def gradient_J(A: PotentialOperatorSpec, u: H1Vector) -> H1Vector:
    """J'(u) = u - A(u); vanishes exactly at fixed points of A."""
    return H1Vector(u.coeffs - A.apply_coeffs(u.coeffs))


def fd_gradient_check(
    A: PotentialOperatorSpec, u: H1Vector, v: H1Vector, h: float
) -> float:
    """Central-difference check of the gradient along direction v.

    Returns |(J'(u), v) - (J(u + h v) - J(u - h v)) / (2 h)|.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    analytic = float(np.dot(gradient_J(A, u).coeffs, v.coeffs))
    jp = functional_J(A, H1Vector(u.coeffs + h * v.coeffs))
    jm = functional_J(A, H1Vector(u.coeffs - h * v.coeffs))
    return abs(analytic - (jp - jm) / (2.0 * h))


def lower_bound_J(cert: GrowthCertificate, r: float) -> float:
    """Coercivity bound 0.5 r^2 - c r^(theta+1) / (theta+1) - b r.

    Valid for every u whose ray {s*u : s in (0,1]} stays inside the
    certified envelope; tends to +infinity as r grows since theta < 1.
    """
    if r < 0.0:
        raise ValueError("r must be nonnegative")
    t1 = cert.theta + 1.0
    return 0.5 * r**2 - cert.c / t1 * r**t1 - cert.b * r


def growth_fit(
    A: PotentialOperatorSpec,
    radii,
    dirs_per_radius: int = 16,
    seed: int = 0,
    slack: float = 1.1,
) -> GrowthCertificate:
    """Fit a sampled growth envelope for ||A(u)||.

    Samples dirs_per_radius random directions at each radius, records the
    per-radius maxima of ||A(u)||, and picks the smallest (c, b) with
    c r^theta + b covering them (minimizing c + b over the feasible
    vertices); c then gets the slack factor.  Deterministic given the seed.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0:
        raise ValueError("radii must be nonempty")
    if np.any(radii <= 0.0) or np.any(np.diff(radii) <= 0.0):
        raise ValueError("radii must be positive and increasing")
    rng = np.random.default_rng(seed)
    maxima = np.empty(radii.size)
    for i, r in enumerate(radii):
        dirs = rng.standard_normal((dirs_per_radius, A.n_modes))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        images = A.apply_many(r * dirs)
        maxima[i] = float(np.max(np.linalg.norm(images, axis=1)))

    theta = A.theta
    powers = radii**theta
    c_fit, b_fit = _cover_fit(powers, maxima)
    c_fit *= slack
    covered = c_fit * powers + b_fit - maxima
    if np.min(covered) < -1e-9 * max(1.0, float(np.max(maxima))):
        raise AssertionError("growth fit failed to cover its own samples")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(maxima > 0.0, maxima / powers, 0.0)
    return GrowthCertificate(
        c=c_fit,
        b=b_fit,
        theta=theta,
        sampled_max_ratio=float(np.max(ratios)),
        radii_tested=tuple(float(r) for r in radii),
        sample_maxima=tuple(float(y) for y in maxima),
    )


def _cover_fit(powers: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Smallest (c, b) >= 0 with c * powers + b >= values, minimizing c + b."""

    def feasible(c: float, b: float) -> bool:
        return bool(np.all(c * powers + b >= values - 1e-12 * max(1.0, values.max(initial=0.0))))

    candidates: list[tuple[float, float]] = []
    vmax = float(values.max(initial=0.0))
    candidates.append((0.0, max(vmax, 0.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        pure = np.where(powers > 0.0, values / powers, 0.0)
    candidates.append((max(float(pure.max(initial=0.0)), 0.0), 0.0))
    n = powers.size
    for i in range(n):
        for j in range(i + 1, n):
            dp = powers[i] - powers[j]
            if dp == 0.0:
                continue
            c = (values[i] - values[j]) / dp
            b = values[i] - c * powers[i]
            if c >= 0.0 and b >= 0.0:
                candidates.append((float(c), float(b)))
    best = None
    for c, b in candidates:
        if not feasible(c, b):
            continue
        key = (c + b, b, c)
        if best is None or key < best[0]:
            best = (key, (c, b))
    if best is None:
        raise AssertionError("no feasible growth envelope found")
    return best[1]
