"""Descriptors for the six classical rank-one symmetric pairs.

Each descriptor carries the restricted-root multiplicities, the polar
Jacobians delta (group level) and delta0 (subgroup level), the radial range,
and the radial-coordinate extractor u(g). Two named parameter modes exist:

* ``paper``    -- n-dependent multiplicities with shrinking subgroup ranges
                  (endpoints like pi/(2(n-2)));
* ``standard`` -- the classical textbook multiplicities with the full
                  subgroup range.

Neither mode is trusted a priori; the haar and montecarlo modules adjudicate
them empirically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigurationError, TagMismatchError
from .linalg import Field, GroupElement, GroupKind, GroupTag


class Family(Enum):
    UNITARY = "unitary"
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"


class Curvature(Enum):
    COMPACT = "compact"
    NONCOMPACT = "noncompact"


class Mode(Enum):
    PAPER = "paper"
    STANDARD = "standard"


_FAMILY_SHORT = {Family.UNITARY: "su", Family.ORTHOGONAL: "so",
                 Family.SYMPLECTIC: "sp"}


@dataclass(frozen=True)
class PairDescriptor:
    """One symmetric pair at a fixed size parameter n (the.source's n).

    ``m_alpha_override`` replaces the sin-power of the group-level Jacobian;
    it exists so that deliberately wrong exponents can be fed to the
    Monte-Carlo adjudicator as negative controls.
    """

    family: Family
    curvature: Curvature
    n: int
    mode: Mode = Mode.STANDARD
    m_alpha_override: int | None = None

    def __post_init__(self):
        # Descriptor-level minimum; the n >= 3 (paper) / n >= 2 (standard)
        # floors are enforced where they bind: q0_end and product densities.
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")

    # -- naming -------------------------------------------------------------

    @property
    def name(self) -> str:
        return f"{_FAMILY_SHORT[self.family]}-{self.curvature.value}"

    @staticmethod
    def from_name(name: str, n: int, mode: Mode | str = Mode.STANDARD,
                  m_alpha_override: int | None = None) -> "PairDescriptor":
        try:
            fam_s, curv_s = name.split("-")
            family = {v: k for k, v in _FAMILY_SHORT.items()}[fam_s]
            curvature = Curvature(curv_s)
        except (ValueError, KeyError):
            raise ConfigurationError(f"unknown pair name {name!r}") from None
        if isinstance(mode, str):
            mode = Mode(mode)
        return PairDescriptor(family, curvature, n, mode, m_alpha_override)

    # -- basic structure ----------------------------------------------------

    @property
    def is_compact(self) -> bool:
        return self.curvature is Curvature.COMPACT

    @property
    def field(self) -> Field:
        return {Family.UNITARY: Field.COMPLEX,
                Family.ORTHOGONAL: Field.REAL,
                Family.SYMPLECTIC: Field.QUATERNION}[self.family]

    @property
    def group_dim(self) -> int:
        return self.n + 1

    @property
    def group_tag(self) -> GroupTag:
        kind = {
            (Family.UNITARY, True): GroupKind.SU,
            (Family.UNITARY, False): GroupKind.SU_NC,
            (Family.ORTHOGONAL, True): GroupKind.SO,
            (Family.ORTHOGONAL, False): GroupKind.SO_NC,
            (Family.SYMPLECTIC, True): GroupKind.SP,
            (Family.SYMPLECTIC, False): GroupKind.SP_NC,
        }[(self.family, self.is_compact)]
        return GroupTag(kind, self.group_dim)

    # -- multiplicities and Jacobian data ------------------------------------

    @property
    def multiplicities(self) -> tuple[int, int]:
        """(m_alpha, m_2alpha) for the group-level Jacobian delta."""
        n = self.n
        if self.family is Family.UNITARY:
            m = (2 * (n - 1), 1)  # identical in both modes
        elif self.family is Family.ORTHOGONAL:
            m = (n - 1, 0)
        elif self.mode is Mode.PAPER:
            m = (8 * (n - 1), 2)
        else:
            m = (4 * (n - 1), 3)
        if self.m_alpha_override is not None:
            m = (self.m_alpha_override, m[1])
        return m

    @property
    def delta0_exponents(self) -> tuple[int, int]:
        """(sin, sin 2t) powers of the subgroup-pair Jacobian delta0."""
        n = self.n
        if self.family is Family.UNITARY:
            return (2 * (n - 2), 1)
        if self.family is Family.ORTHOGONAL:
            return (n - 2, 0)
        if self.mode is Mode.PAPER:
            return (8 * (n - 2), 2)
        return (4 * (n - 2), 3)

    @property
    def q0_end(self) -> float:
        """Upper endpoint of the subgroup radial range (domain of delta0)."""
        if self.mode is Mode.STANDARD:
            # Full range of u = a1 - a2 cos(t); the |sin 2t| factor of delta0
            # keeps the Jacobian nonnegative past pi/2.
            return math.pi
        if self.n < 3:
            raise ConfigurationError(
                f"paper mode q0_end requires n >= 3, got n={self.n}")
        divisor = {Family.UNITARY: 2 * (self.n - 2),
                   Family.ORTHOGONAL: self.n - 2,
                   Family.SYMPLECTIC: 8 * (self.n - 2)}[self.family]
        return math.pi / divisor

    @property
    def radial_range(self) -> float:
        """Upper endpoint of the class parameter t (group level)."""
        if not self.is_compact:
            return math.inf
        return math.pi if self.family is Family.ORTHOGONAL else math.pi / 2

    def validate_t(self, t: float, what: str = "t") -> float:
        t = float(t)
        if not 0.0 <= t <= self.radial_range:
            raise ConfigurationError(
                f"{what}={t} outside radial range [0, {self.radial_range}] of {self.name}")
        return t


@dataclass(frozen=True)
class SphericalClass:
    """A double coset K exp(tH) K, identified by its radial parameter."""

    pair: PairDescriptor
    t: float

    def __post_init__(self):
        self.pair.validate_t(self.t)


# ---------------------------------------------------------------------------
# Jacobians
# ---------------------------------------------------------------------------

def delta(pair: PairDescriptor, t: float) -> float:
    """Group-level polar Jacobian at radial coordinate t.

    Compact pairs: sin(t)^m_alpha * sin(2t)^m_2alpha; noncompact pairs use
    sinh. Vanishes at t=0 and is positive on the open interior.
    """
    pair.validate_t(t)
    ma, m2 = pair.multiplicities
    if pair.is_compact:
        return math.sin(t) ** ma * math.sin(2 * t) ** m2
    return math.sinh(t) ** ma * math.sinh(2 * t) ** m2


def delta0(pair: PairDescriptor, t: float) -> float:
    """Subgroup-pair Jacobian on [0, q0_end].

    Always the compact (sin) form: the subgroup pair is compact for both
    curvatures. The 2t factor enters through its absolute value so the
    standard-mode range [0, pi] keeps the Jacobian nonnegative.
    """
    t = float(t)
    if not 0.0 <= t <= pair.q0_end + 1e-15:
        raise ConfigurationError(
            f"t={t} outside subgroup range [0, {pair.q0_end}] of {pair.name}")
    a, b = pair.delta0_exponents
    return math.sin(t) ** a * abs(math.sin(2 * t)) ** b


# ---------------------------------------------------------------------------
# the radial statistic
# ---------------------------------------------------------------------------

def radial_u(pair: PairDescriptor, g: GroupElement) -> float:
    """The invariant separating spherical classes.

    Unitary family: modulus of the (1,1) entry; orthogonal: the signed entry
    itself; symplectic: its quaternion norm. Equals cos t (compact) or
    cosh t (noncompact) on radial elements.
    """
    if g.group != pair.group_tag:
        raise TagMismatchError(f"element tagged {g.group}, pair expects {pair.group_tag}")
    e = g.matrix.entry(0, 0)
    if pair.family is Family.UNITARY:
        return abs(e)
    if pair.family is Family.ORTHOGONAL:
        return float(e)
    return e.norm()


def radial_codomain(pair: PairDescriptor) -> tuple[float, float]:
    """Closed interval the radial statistic lives in."""
    if not pair.is_compact:
        return (1.0, math.inf)
    if pair.family is Family.ORTHOGONAL:
        return (-1.0, 1.0)
    return (0.0, 1.0)


PAIR_NAMES = tuple(f"{s}-{c.value}" for s in ("su", "so", "sp")
                   for c in (Curvature.COMPACT, Curvature.NONCOMPACT))
