"""Charted pairs: affine charts with SNC divisors, points, and morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .ideal import IdealPresentation, radical_membership
from .poly import Polynomial


class DegenerateMorphismError(ValueError):
    """A divisor variable pulls back to the zero polynomial."""


@dataclass(frozen=True)
class ChartedPair:
    """An affine chart with a subset of coordinates cutting the divisor."""

    variables: tuple[str, ...]
    divisor_vars: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate chart variables")
        extra = set(self.divisor_vars) - set(self.variables)
        if extra:
            raise ValueError(f"divisor variables {extra} not in chart")
        # Keep divisor variables in chart order for determinism.
        object.__setattr__(
            self,
            "divisor_vars",
            tuple(v for v in self.variables if v in set(self.divisor_vars)),
        )

    @property
    def free_vars(self) -> tuple[str, ...]:
        d = set(self.divisor_vars)
        return tuple(v for v in self.variables if v not in d)

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def divisor_product(self) -> Polynomial:
        p = Polynomial.constant(1, self.variables)
        for v in self.divisor_vars:
            p = p * Polynomial.variable(v, self.variables)
        return p


@dataclass(frozen=True)
class RationalPoint:
    coordinates: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coordinates", tuple(Fraction(c) for c in self.coordinates)
        )

    def __len__(self):
        return len(self.coordinates)


class MorphismOfPairs:
    """Source and target charts plus one polynomial per target variable."""

    def __init__(
        self,
        source: ChartedPair,
        target: ChartedPair,
        components: Mapping[str, Polynomial],
    ):
        if set(components) != set(target.variables):
            raise ValueError("components must cover exactly the target variables")
        for name, p in components.items():
            if p.ambient != source.variables:
                raise ValueError(
                    f"component {name!r} has ambient {p.ambient}, "
                    f"expected {source.variables}"
                )
        self.source = source
        self.target = target
        self.components = {v: components[v] for v in target.variables}

    def component(self, target_var: str) -> Polynomial:
        return self.components[target_var]

    def component_list(self) -> list[Polynomial]:
        return [self.components[v] for v in self.target.variables]

    def pullback(self, f: Polynomial) -> Polynomial:
        """Substitute the components into a polynomial in target variables."""
        return f.substitute(self.components)

    def with_empty_target_divisor(self) -> "MorphismOfPairs":
        return MorphismOfPairs(
            self.source,
            ChartedPair(self.target.variables, ()),
            self.components,
        )

    def __repr__(self):
        parts = ", ".join(f"{v}={p}" for v, p in self.components.items())
        return f"MorphismOfPairs({parts})"


def stratum_of_point(chart: ChartedPair, point: RationalPoint) -> tuple[str, ...]:
    """The divisor variables vanishing at the point; its size is the s of
    the s-point."""
    if len(point) != len(chart.variables):
        raise ValueError("point length does not match chart")
    coords = dict(zip(chart.variables, point.coordinates))
    return tuple(v for v in chart.divisor_vars if coords[v] == 0)


def validate_pair_condition(phi: MorphismOfPairs) -> tuple[bool, list[str]]:
    """Each divisorial component must vanish only on the source divisor.

    Over the algebraic closure this is the containment of the reduced
    preimage of the target divisor in the source divisor.
    """
    diagnostics: list[str] = []
    u_prod = phi.source.divisor_product()
    ok = True
    for x in phi.target.divisor_vars:
        comp = phi.components[x]
        if comp.is_zero():
            raise DegenerateMorphismError(
                f"divisor variable {x!r} pulls back to zero"
            )
        if not radical_membership(u_prod, IdealPresentation([comp], phi.source.variables)):
            ok = False
            diagnostics.append(
                f"pullback of {x!r} vanishes outside the source divisor: {comp}"
            )
    return ok, diagnostics


def preimage_equality_check(phi: MorphismOfPairs) -> bool:
    """Whether the reduced preimage of the target divisor equals the source
    divisor (given that the pair condition already holds)."""
    ok, _ = validate_pair_condition(phi)
    if not ok:
        return False
    pullback_product = Polynomial.constant(1, phi.source.variables)
    for x in phi.target.divisor_vars:
        pullback_product = pullback_product * phi.components[x]
    for u in phi.source.divisor_vars:
        u_ideal = IdealPresentation(
            [Polynomial.variable(u, phi.source.variables)], phi.source.variables
        )
        if not radical_membership(pullback_product, u_ideal):
            return False
    return True
