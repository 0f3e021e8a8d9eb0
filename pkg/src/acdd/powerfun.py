"""Defense-power and attack-power function families with exact derivatives.

A closed registry of four families covers every function used by the model:

* ``polynomial``     -- sum c_i x^i, coefficients low-to-high
* ``logistic``       -- 1 / (exp(a x + b) + 1), coefficients (a, b)
* ``centered-quadratic-nu``    -- (nu x - nu/2)^2
* ``linear-minus-quadratic-nu`` -- nu x - 2 x^2

The two *-nu families additionally expose analytic derivatives in nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NotParameterized

FAMILIES = (
    "polynomial",
    "logistic",
    "centered-quadratic-nu",
    "linear-minus-quadratic-nu",
)

NU_FAMILIES = ("centered-quadratic-nu", "linear-minus-quadratic-nu")


@dataclass(frozen=True)
class PowerFunctionSpec:
    family: str
    coefficients: tuple[float, ...] = ()
    nu: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "logistic" and len(self.coefficients) != 2:
            raise ValueError("logistic needs coefficients (a, b)")
        if self.family in NU_FAMILIES and self.nu is None:
            raise ValueError(f"{self.family} requires nu")

    @property
    def has_nu(self) -> bool:
        return self.family in NU_FAMILIES

    def with_nu(self, nu: float) -> "PowerFunctionSpec":
        if not self.has_nu:
            return self
        return PowerFunctionSpec(self.family, self.coefficients, nu)

    # Unchecked evaluation: used by the integrator, whose intermediate
    # Runge-Kutta states may briefly leave [0,1].
    def value(self, x):
        if self.family == "polynomial":
            return np.polynomial.polynomial.polyval(x, self.coefficients)
        if self.family == "logistic":
            a, b = self.coefficients
            return 1.0 / (np.exp(a * np.asarray(x, dtype=float) + b) + 1.0)
        if self.family == "centered-quadratic-nu":
            return (self.nu * np.asarray(x, dtype=float) - self.nu / 2.0) ** 2
        return self.nu * np.asarray(x, dtype=float) - 2.0 * np.asarray(x, dtype=float) ** 2

    def deriv(self, x):
        if self.family == "polynomial":
            dcoef = np.polynomial.polynomial.polyder(self.coefficients) \
                if len(self.coefficients) > 1 else [0.0]
            return np.polynomial.polynomial.polyval(x, dcoef) + np.zeros_like(np.asarray(x, dtype=float))
        if self.family == "logistic":
            a, _ = self.coefficients
            v = self.value(x)
            return -a * v * (1.0 - v)
        if self.family == "centered-quadratic-nu":
            return 2.0 * self.nu ** 2 * (np.asarray(x, dtype=float) - 0.5)
        return self.nu - 4.0 * np.asarray(x, dtype=float)

    def dvalue_dnu(self, x):
        self._require_nu()
        x = np.asarray(x, dtype=float)
        if self.family == "centered-quadratic-nu":
            return 2.0 * self.nu * (x - 0.5) ** 2
        return x + np.zeros_like(x)

    def dderiv_dnu(self, x):
        self._require_nu()
        x = np.asarray(x, dtype=float)
        if self.family == "centered-quadratic-nu":
            return 4.0 * self.nu * (x - 0.5)
        return np.ones_like(x)

    def _require_nu(self):
        if not self.has_nu:
            raise NotParameterized(f"family {self.family!r} has no nu parameter")


@dataclass(frozen=True)
class AxiomReport:
    f_zero_ok: bool
    g_one_ok: bool
    positivity_violations: tuple[tuple[str, float, float], ...]

    @property
    def ok(self) -> bool:
        return self.f_zero_ok and self.g_one_ok and not self.positivity_violations


def _check_domain(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"argument outside [0, 1]: {x!r}")


def evaluate(spec: PowerFunctionSpec, x):
    """Value and exact derivative in x, for x in [0, 1]."""
    _check_domain(x)
    return np.asarray(spec.value(x), dtype=float) + 0.0, \
        np.asarray(spec.deriv(x), dtype=float) + 0.0


def evaluate_nu_derivatives(spec: PowerFunctionSpec, x):
    """Analytic (d value / d nu, d^2 value / dx dnu) at (x, spec.nu)."""
    _check_domain(x)
    return np.asarray(spec.dvalue_dnu(x), dtype=float) + 0.0, \
        np.asarray(spec.dderiv_dnu(x), dtype=float) + 0.0


def finite_difference_deriv(spec: PowerFunctionSpec, x, h: float = 1e-6):
    """Central-difference derivative, for cross-checking only."""
    return (spec.value(np.asarray(x) + h) - spec.value(np.asarray(x) - h)) / (2 * h)


def validate_axioms(f: PowerFunctionSpec, g: PowerFunctionSpec,
                    grid_size: int = 101) -> AxiomReport:
    """Advisory check of the model axioms f(0)=0, g(1)=0 and positivity.

    Violations are reported, never raised: the experiment suite deliberately
    includes axiom-violating attack functions.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    grid = np.linspace(0.0, 1.0, grid_size)
    f_zero_ok = bool(abs(float(f.value(0.0))) <= 1e-12)
    g_one_ok = bool(abs(float(g.value(1.0))) <= 1e-12)
    violations: list[tuple[str, float, float]] = []
    fv = np.asarray(f.value(grid), dtype=float)
    gv = np.asarray(g.value(grid), dtype=float)
    for x, val in zip(grid[1:], fv[1:]):          # f > 0 on (0, 1]
        if val <= 0.0:
            violations.append(("f", float(x), float(val)))
    for x, val in zip(grid[:-1], gv[:-1]):        # g > 0 on [0, 1)
        if val <= 0.0:
            violations.append(("g", float(x), float(val)))
    return AxiomReport(f_zero_ok, g_one_ok, tuple(violations))


# -- convenience constructors -------------------------------------------------

def poly(*coefficients: float) -> PowerFunctionSpec:
    return PowerFunctionSpec("polynomial", tuple(float(c) for c in coefficients))


def logistic(a: float, b: float) -> PowerFunctionSpec:
    return PowerFunctionSpec("logistic", (float(a), float(b)))


def centered_quadratic(nu: float) -> PowerFunctionSpec:
    """g(x, nu) = (nu x - nu/2)^2."""
    return PowerFunctionSpec("centered-quadratic-nu", (), float(nu))


def linear_minus_quadratic(nu: float) -> PowerFunctionSpec:
    """f(x, nu) = nu x - 2 x^2."""
    return PowerFunctionSpec("linear-minus-quadratic-nu", (), float(nu))


def from_config(obj: dict) -> PowerFunctionSpec:
    """Build a spec from the config encoding {family, coefficients?, nu?}."""
    allowed = {"family", "coefficients", "nu"}
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown power-function keys: {sorted(unknown)}")
    return PowerFunctionSpec(
        family=obj["family"],
        coefficients=tuple(float(c) for c in obj.get("coefficients", ())),
        nu=None if obj.get("nu") is None else float(obj["nu"]),
    )


def to_config(spec: PowerFunctionSpec) -> dict:
    out: dict = {"family": spec.family}
    if spec.coefficients:
        out["coefficients"] = list(spec.coefficients)
    if spec.nu is not None:
        out["nu"] = spec.nu
    return out
