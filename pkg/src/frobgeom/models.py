"""Convex potentials in dually-flat coordinates.

A model exposes its potential together with partial derivatives up to fourth
order. The ideal-gas models differentiate in closed form; user potentials
either differentiate exactly (polynomials) or fall back on finite differences.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .special_functions import polylog_exp

MAX_ORDER = 4


@dataclass(frozen=True)
class Units:
    """Constants entering the thermal wavelength; defaults are reduced units."""

    h: float = 1.0
    m: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        if min(self.h, self.m, self.k_B) <= 0.0:
            raise ValueError("h, m and k_B must be positive")

    @property
    def prefactor(self) -> float:
        """``c`` in ``lambda^-3 = c * beta^(-3/2)``."""
        return (2.0 * math.pi * self.m * self.k_B / self.h**2) ** 1.5

    def thermal_wavelength(self, beta: float) -> float:
        return self.h / math.sqrt(2.0 * math.pi * self.m * self.k_B / beta)

    def lambda_cubed(self, beta: float) -> float:
        return beta**1.5 / self.prefactor


REDUCED = Units()
# SI constants with the helium-4 atomic mass
HELIUM4_SI = Units(h=6.62607015e-34, m=6.6464731e-27, k_B=1.380649e-23)


@dataclass(frozen=True, eq=False)
class Jet:
    """Potential and its derivative tensors at one point (dense, fully symmetric)."""

    point: np.ndarray
    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    third: np.ndarray
    fourth: np.ndarray | None = None


def _sorted_indices(n: int, order: int):
    return itertools.combinations_with_replacement(range(n), order)


def _fill_symmetric(n: int, order: int, values: dict) -> np.ndarray:
    out = np.empty((n,) * order)
    for idx in itertools.product(range(n), repeat=order):
        out[idx] = values[tuple(sorted(idx))]
    return out


class PotentialModel:
    """Base class; subclasses implement ``_value`` and ``_partial``."""

    name = "potential"
    exact = True

    def __init__(self, dim: int, coordinate_names: Sequence[str] | None = None):
        self.dim = int(dim)
        if coordinate_names is None:
            coordinate_names = tuple(f"x{i + 1}" for i in range(self.dim))
        self.coordinate_names = tuple(coordinate_names)

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, dim={self.dim})"

    # domain handling
    def domain_violation(self, x: np.ndarray) -> str | None:
        """Reason the point is outside the domain, or ``None``."""
        return None

    def coords(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dim:
            raise DomainError(f"{self.name}: expected {self.dim} coordinates, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise DomainError(f"{self.name}: non-finite coordinates {x}")
        reason = self.domain_violation(x)
        if reason:
            raise DomainError(f"{self.name}: {reason}")
        return x

    def in_domain(self, x) -> bool:
        try:
            self.coords(x)
        except DomainError:
            return False
        return True

    # evaluation
    def value(self, x) -> float:
        return float(self._value(self.coords(x)))

    def partial(self, x, multi_index: Sequence[int]) -> float:
        """Mixed partial of the potential; ``multi_index`` lists coordinate slots."""
        x = self.coords(x)
        idx = tuple(int(i) for i in multi_index)
        if not 1 <= len(idx) <= MAX_ORDER:
            raise ValueError(f"derivative order must be 1..{MAX_ORDER}, got {len(idx)}")
        if any(i < 0 or i >= self.dim for i in idx):
            raise ValueError(f"multi-index {idx} out of range for dimension {self.dim}")
        return float(self._partial(x, tuple(sorted(idx))))

    def jet(self, x, order: int = MAX_ORDER) -> Jet:
        if order not in (3, 4):
            raise ValueError("jet order must be 3 or 4")
        x = self.coords(x)
        tensors = self._derivative_tables(x, order)
        n = self.dim
        grad = np.array([tensors[1][(i,)] for i in range(n)])
        return Jet(
            point=x,
            value=float(self._value(x)),
            gradient=grad,
            hessian=_fill_symmetric(n, 2, tensors[2]),
            third=_fill_symmetric(n, 3, tensors[3]),
            fourth=_fill_symmetric(n, 4, tensors[4]) if order >= 4 else None,
        )

    def _derivative_tables(self, x, order):
        return {
            k: {idx: self._partial(x, idx) for idx in _sorted_indices(self.dim, k)}
            for k in range(1, order + 1)
        }

    def _value(self, x):
        raise NotImplementedError

    def _partial(self, x, idx):
        raise NotImplementedError


class IdealGasModel(PotentialModel):
    """Free energy per volume ``lambda^-3 * f(eta)`` in coordinates ``(beta, gamma)``.

    ``f`` is ``eta`` for the classical gas and ``Li_{5/2}(eta)`` for the Bose
    gas, with ``eta = exp(-gamma)``. Each ``gamma`` derivative lowers the
    polylog order by one and flips the sign.
    """

    def __init__(self, kind: str, units: Units = REDUCED):
        if kind not in ("classical", "bose"):
            raise ValueError(f"unknown gas kind {kind!r}")
        super().__init__(2, ("beta", "gamma"))
        self.kind = kind
        self.units = units
        self.name = kind

    def domain_violation(self, x):
        beta, gamma = x
        if beta <= 0.0:
            return f"beta must be > 0, got {beta}"
        if gamma <= 0.0:
            return f"gamma must be > 0, got {gamma}"
        return None

    def beta_factor(self, beta: float, a: int) -> float:
        """``d^a/dbeta^a`` of ``c * beta^(-3/2)``."""
        coef = 1.0
        for j in range(a):
            coef *= -1.5 - j
        return self.units.prefactor * coef * beta ** (-1.5 - a)

    def gamma_factor(self, gamma: float, b: int) -> float:
        """``d^b/dgamma^b`` of ``f(exp(-gamma))``."""
        sign = -1.0 if b % 2 else 1.0
        if self.kind == "classical":
            return sign * math.exp(-gamma)
        return sign * polylog_exp(2.5 - b, gamma)

    def _value(self, x):
        return self.beta_factor(x[0], 0) * self.gamma_factor(x[1], 0)

    def _partial(self, x, idx):
        a = idx.count(0)
        return self.beta_factor(x[0], a) * self.gamma_factor(x[1], len(idx) - a)

    def _derivative_tables(self, x, order):
        B = [self.beta_factor(x[0], a) for a in range(order + 1)]
        G = [self.gamma_factor(x[1], b) for b in range(order + 1)]
        tables = {}
        for k in range(1, order + 1):
            tables[k] = {}
            for idx in _sorted_indices(2, k):
                a = idx.count(0)
                tables[k][idx] = B[a] * G[k - a]
        return tables

    def lambda_cubed(self, x) -> float:
        return self.units.lambda_cubed(float(x[0]))


def classical_ideal_gas(units: Units = REDUCED) -> IdealGasModel:
    return IdealGasModel("classical", units)


def bose_ideal_gas(units: Units = REDUCED) -> IdealGasModel:
    return IdealGasModel("bose", units)


# --- user-supplied potentials -------------------------------------------------

Box = tuple[tuple[float, float], ...]


def _box_violation(box: Box | None, x: np.ndarray) -> str | None:
    if box is None:
        return None
    for i, (lo, hi) in enumerate(box):
        if not lo <= x[i] <= hi:
            return f"coordinate x{i + 1}={x[i]} outside [{lo}, {hi}]"
    return None


class FiniteDifferencePotential(PotentialModel):
    """Wraps a scalar function; derivatives by central differences + two Richardson levels.

    The base step is ``rel_step * max(1, |x_i|)`` and grows with the derivative
    order so that truncation and rounding errors stay balanced.
    """

    exact = False
    ORDER_STEP_SCALE = {1: 1.0, 2: 2.0, 3: 8.0, 4: 16.0}

    def __init__(self, func: Callable[[np.ndarray], float], dim: int, box: Box | None = None,
                 name: str = "fd-potential", rel_step: float = 1e-3):
        super().__init__(dim)
        self.func = func
        self.box = None if box is None else tuple((float(lo), float(hi)) for lo, hi in box)
        self.name = name
        self.rel_step = rel_step

    def domain_violation(self, x):
        return _box_violation(self.box, x)

    def _value(self, x):
        return float(self.func(x))

    def _stencil(self, x, idx, steps):
        k = len(idx)
        acc = 0.0
        for signs in itertools.product((1.0, -1.0), repeat=k):
            shift = np.zeros(self.dim)
            for sgn, i in zip(signs, idx):
                shift[i] += sgn * steps[i]
            acc += math.prod(signs) * float(self.func(x + shift))
        denom = math.prod(2.0 * steps[i] for i in idx)
        return acc / denom

    def _partial(self, x, idx):
        h = self.rel_step * self.ORDER_STEP_SCALE[len(idx)] * np.maximum(1.0, np.abs(x))
        # error is even in h: eliminate the h^2 and h^4 terms
        d1, d2, d3 = (self._stencil(x, idx, h / 2**j) for j in range(3))
        r1 = (4.0 * d2 - d1) / 3.0
        r2 = (4.0 * d3 - d2) / 3.0
        return (16.0 * r2 - r1) / 15.0


@dataclass(frozen=True)
class Monomial:
    coefficient: float
    powers: tuple[int, ...]

    def __call__(self, x) -> float:
        return self.coefficient * math.prod(float(xi) ** p for xi, p in zip(x, self.powers))

    def derivative(self, x, idx) -> float:
        counts = Counter(idx)
        coef = self.coefficient
        val = 1.0
        for i, p in enumerate(self.powers):
            m = counts.get(i, 0)
            if m > p:
                return 0.0
            for j in range(m):
                coef *= p - j
            val *= float(x[i]) ** (p - m)
        return coef * val


@dataclass(frozen=True)
class SyntheticSpec:
    """Polynomial potential description: monomials plus a domain box."""

    dimension: int
    terms: tuple[Monomial, ...]
    box: Box | None = None
    derivatives: str = "exact"
    name: str = "synthetic"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        for t in self.terms:
            if len(t.powers) != self.dimension:
                raise ValueError(f"monomial {t} does not match dimension {self.dimension}")
        if self.box is not None and len(self.box) != self.dimension:
            raise ValueError("box must give one interval per coordinate")
        if self.derivatives not in ("exact", "fd"):
            raise ValueError("derivatives must be 'exact' or 'fd'")


class PolynomialPotential(PotentialModel):
    def __init__(self, spec: SyntheticSpec):
        super().__init__(spec.dimension)
        self.spec = spec
        self.name = spec.name

    def domain_violation(self, x):
        return _box_violation(self.spec.box, x)

    def _value(self, x):
        return math.fsum(t(x) for t in self.spec.terms)

    def _partial(self, x, idx):
        return math.fsum(t.derivative(x, idx) for t in self.spec.terms)


def synthetic_potential(spec: SyntheticSpec | str | Path) -> PotentialModel:
    """Build a polynomial model from a spec object, config text, or config path."""
    if isinstance(spec, Path) or (isinstance(spec, str) and "\n" not in spec and Path(spec).exists()):
        spec = load_synthetic_config(spec)
    elif isinstance(spec, str):
        spec = parse_synthetic_config(spec)
    poly = PolynomialPotential(spec)
    if spec.derivatives == "exact":
        return poly
    return FiniteDifferencePotential(poly._value, spec.dimension, spec.box, name=spec.name)


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def _parse_term(text: str, dim: int) -> Monomial:
    coef = 1.0
    powers = [0] * dim
    for raw in text.replace(" ", "").split("*"):
        if not raw:
            raise ValueError(f"malformed term {text!r}")
        m = _FACTOR.match(raw)
        if m:
            i = int(m.group(1)) - 1
            if not 0 <= i < dim:
                raise ValueError(f"variable x{i + 1} outside dimension {dim}")
            powers[i] += int(m.group(2) or 1)
        else:
            coef *= float(raw)
    return Monomial(coef, tuple(powers))


def parse_synthetic_config(text: str, name: str = "synthetic") -> SyntheticSpec:
    """Parse ``key = value`` lines.

    Keys: ``dimension``, ``box`` (``lo:hi`` per axis, comma separated),
    ``derivatives`` (``exact`` | ``fd``), ``name`` and repeated ``term``
    entries such as ``term = 0.5 * x1^2``.
    """
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        entries.append((key.lower(), value))
    opts = {k: v for k, v in entries if k != "term"}
    if "dimension" not in opts:
        raise ValueError("config must set 'dimension'")
    dim = int(opts["dimension"])
    terms = tuple(_parse_term(v, dim) for k, v in entries if k == "term")
    box = None
    if "box" in opts:
        box = tuple(
            tuple(float(b) for b in part.split(":")) for part in opts["box"].split(",")
        )
        if any(len(b) != 2 or b[0] >= b[1] for b in box):
            raise ValueError(f"bad box {opts['box']!r}")
    unknown = set(opts) - {"dimension", "box", "derivatives", "name"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return SyntheticSpec(
        dimension=dim,
        terms=terms,
        box=box,
        derivatives=opts.get("derivatives", "exact").lower(),
        name=opts.get("name", name),
    )


def load_synthetic_config(path: str | Path) -> SyntheticSpec:
    path = Path(path)
    return parse_synthetic_config(path.read_text(), name=path.stem)


def model_from_id(model_id: str, units: Units = REDUCED) -> PotentialModel:
    """Resolve ``classical`` | ``bose`` | ``synthetic:<file>``."""
    if model_id == "classical":
        return classical_ideal_gas(units)
    if model_id == "bose":
        return bose_ideal_gas(units)
    if model_id.startswith("synthetic:"):
        return synthetic_potential(Path(model_id.split(":", 1)[1]))
    raise ValueError(f"unknown model {model_id!r} (classical | bose | synthetic:<file>)")


def partials(model: PotentialModel, x, order: int, multi_index: Sequence[int] | None = None):
    """One partial (``multi_index`` given) or the full dense tensor of that order."""
    if multi_index is not None:
        if len(multi_index) != order:
            raise ValueError("multi_index length must equal order")
        return model.partial(x, multi_index)
    jet = model.jet(x, order=max(3, order))
    return {1: jet.gradient, 2: jet.hessian, 3: jet.third, 4: jet.fourth}[order]
