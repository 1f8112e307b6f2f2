"""Problem definitions: parse line-oriented config files and build the
operator, comparison operator, seeds and checker parameters they describe.

A problem file is INI-style with sections [space], [problem], [solver] and
[hypotheses]; every key is validated against the schema below and unknown
keys or sections are errors.  See the README for the full key reference.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import bvp as bvp_mod
from .models import clipped_cubic_operator, linear_operator, radial_power_operator
from .operators import LinearOperatorSpec, PotentialOperatorSpec
from .solver import SolverConfig, axis_seeds, circle_seeds
from .space import H1Vector, SpaceConfig, basis_vector

__all__ = ["ConfigError", "HypothesisParams", "ProblemSetup", "load_problem", "parse_config"]


class ConfigError(ValueError):
    """A problem configuration could not be parsed or validated."""


_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "space": {"n_modes": int, "quad_nodes": int, "n_panels": int},
    "problem": {
        "kind": str,  # power_law | cubic2d | linear2d | bvp
        "family": str,  # bvp only: sublinear | power | linear | zero
        "amplitude": float,
        "theta": float,
        "lam": float,
        "r1": float,
        "mode": str,  # one_pair | two_pair
        "radius": float,
        "n_circle_seeds": int,
        "seed_scale": float,
        "expected_pairs": int,
        "b1_scale": float,
        "b2_scale": float,
        "a_scale": float,
    },
    "solver": {
        "max_iter": int,
        "grad_tol": float,
        "armijo_c": float,
        "armijo_shrink": float,
        "init_step": float,
        "trivial_threshold": float,
        "dedup_tol": float,
        "deflation_radius": float,
        "seed": int,
    },
    "hypotheses": {
        "n_s": int,
        "n_angle": int,
        "growth_radii": str,
        "dirs_per_radius": int,
        "eigen_n": int,
        "mode_budget": int,
        "d1_nt": int,
        "d1_nu": int,
    },
}

_KINDS = ("power_law", "cubic2d", "linear2d", "bvp")
_FAMILIES = ("sublinear", "power", "linear", "zero")


@dataclass(frozen=True)
class HypothesisParams:
    n_s: int = 256
    n_angle: int = 256
    growth_radii: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0)
    dirs_per_radius: int = 16
    eigen_n: int = 1000
    mode_budget: int = 8
    d1_nt: int = 64
    d1_nu: int = 64


@dataclass(frozen=True, eq=False)
class ProblemSetup:
    name: str
    kind: str
    mode: str  # one_pair | two_pair
    space: SpaceConfig
    operator: PotentialOperatorSpec
    comparison: LinearOperatorSpec
    radius: float
    expected_pairs: int
    seeds: list[H1Vector]
    solver: SolverConfig
    hyp: HypothesisParams
    seed: int
    nonlinearity: bvp_mod.Nonlinearity | None = None
    d1_r1: float = 0.25
    raw: dict[str, dict[str, Any]] = field(default_factory=dict)

    @property
    def e_vectors(self) -> tuple[H1Vector, H1Vector]:
        """The orthonormal pair spanning the seed circle (two-pair mode)."""
        return basis_vector(1, self.space.n_modes), basis_vector(
            2, self.space.n_modes
        )


def parse_config(path: str | Path, overrides: list[str] | None = None) -> dict[str, dict[str, Any]]:
    """Read and validate a problem file into a nested {section: {key: value}} dict."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"problem file not found: {p}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(p) as fh:
            parser.read_file(fh)
    except (configparser.Error, OSError) as exc:
        raise ConfigError(f"cannot parse {p}: {exc}") from exc

    raw: dict[str, dict[str, Any]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        raw[section] = {}
        for key, value in parser.items(section):
            raw[section][key] = _convert(section, key, value)
    for item in overrides or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value: {item!r}")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        section, key = section.strip(), key.strip()
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section in override: {section!r}")
        raw.setdefault(section, {})[key] = _convert(section, key, value.strip())
    return raw


def _convert(section: str, key: str, value: str) -> Any:
    schema = _SCHEMA[section]
    if key not in schema:
        raise ConfigError(f"unknown key {key!r} in section [{section}]")
    try:
        return schema[key](value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {section}.{key}: {value!r}") from exc


def _parse_radii(text: str) -> tuple[float, ...]:
    try:
        radii = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad growth_radii: {text!r}") from exc
    if not radii or any(r <= 0 for r in radii) or any(
        b <= a for a, b in zip(radii, radii[1:])
    ):
        raise ConfigError("growth_radii must be positive and increasing")
    return radii


def load_problem(
    path: str | Path, overrides: list[str] | None = None, seed: int | None = None
) -> ProblemSetup:
    """Build a ProblemSetup from a problem file plus optional overrides."""
    raw = parse_config(path, overrides)
    prob = raw.get("problem", {})
    kind = prob.get("kind")
    if kind not in _KINDS:
        raise ConfigError(f"problem.kind must be one of {_KINDS}, got {kind!r}")

    space_kwargs = raw.get("space", {})
    try:
        space = SpaceConfig(**space_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [space] section: {exc}") from exc

    hyp_kwargs = dict(raw.get("hypotheses", {}))
    if "growth_radii" in hyp_kwargs:
        hyp_kwargs["growth_radii"] = _parse_radii(hyp_kwargs["growth_radii"])
    try:
        hyp = HypothesisParams(**hyp_kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad [hypotheses] section: {exc}") from exc

    mode = prob.get("mode", "two_pair" if kind != "power_law" else "one_pair")
    if mode not in ("one_pair", "two_pair"):
        raise ConfigError(f"problem.mode must be one_pair or two_pair, got {mode!r}")
    radius = float(prob.get("radius", 0.5))
    if radius <= 0:
        raise ConfigError("problem.radius must be positive")
    theta = float(prob.get("theta", 0.5))
    nl: bvp_mod.Nonlinearity | None = None
    d1_r1 = float(prob.get("r1", 0.25))

    try:
        if kind == "power_law":
            operator = radial_power_operator(
                amplitude=float(prob.get("amplitude", 2.0)),
                theta=theta,
                n_modes=space.n_modes,
            )
            comparison = LinearOperatorSpec.scaled_identity(
                float(prob.get("b1_scale", 1.5)), space.n_modes
            )
        elif kind == "cubic2d":
            if space.n_modes != 2:
                space = SpaceConfig(2, space.quad_nodes, space.n_panels)
            operator = clipped_cubic_operator(n_modes=2)
            comparison = LinearOperatorSpec.scaled_identity(
                float(prob.get("b2_scale", 1.5)), 2
            )
        elif kind == "linear2d":
            if space.n_modes != 2:
                space = SpaceConfig(2, space.quad_nodes, space.n_panels)
            a_scale = float(prob.get("a_scale", 2.0))
            operator = linear_operator(a_scale * np.eye(2), label=f"scaled-identity({a_scale})")
            comparison = LinearOperatorSpec.scaled_identity(
                float(prob.get("b2_scale", a_scale)), 2
            )
        else:  # bvp
            family = prob.get("family", "sublinear")
            if family not in _FAMILIES:
                raise ConfigError(
                    f"problem.family must be one of {_FAMILIES}, got {family!r}"
                )
            if family == "sublinear":
                nl = bvp_mod.sublinear_affine(r1=d1_r1, theta=theta)
            elif family == "power":
                nl = bvp_mod.power_nonlinearity(
                    amplitude=float(prob.get("amplitude", 10.0)), theta=theta
                )
                d1_r1 = float(prob.get("r1", 0.99))
            elif family == "linear":
                nl = bvp_mod.linear_nonlinearity(float(prob.get("lam", 5.0)))
            else:
                nl = bvp_mod.zero_nonlinearity()
            operator = bvp_mod.bvp_operator(nl, space)
            comparison = bvp_mod.b_matrix(nl.a1, space)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad problem parameters: {exc}") from exc

    default_pairs = 1 if mode == "one_pair" else 2
    expected_pairs = int(prob.get("expected_pairs", default_pairs))

    solver_kwargs = dict(raw.get("solver", {}))
    if seed is not None:
        solver_kwargs["seed"] = seed
    solver_kwargs.setdefault("grad_tol", 1e-8 if kind == "bvp" else 1e-10)
    try:
        solver_cfg = SolverConfig(**solver_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [solver] section: {exc}") from exc

    e1 = basis_vector(1, space.n_modes)
    if mode == "one_pair":
        seeds = axis_seeds(e1, radius)
    else:
        if space.n_modes < 2:
            raise ConfigError("two-pair mode needs at least two modes")
        e2 = basis_vector(2, space.n_modes)
        seeds = circle_seeds(e1, e2, radius, int(prob.get("n_circle_seeds", 16)))

    return ProblemSetup(
        name=Path(path).stem,
        kind=kind,
        mode=mode,
        space=space,
        operator=operator,
        comparison=comparison,
        radius=radius,
        expected_pairs=expected_pairs,
        seeds=seeds,
        solver=solver_cfg,
        hyp=hyp,
        seed=solver_cfg.seed,
        nonlinearity=nl,
        d1_r1=d1_r1,
        raw=raw,
    )
