"""Combinatorial principalization of monomial ideals by coordinate
blowups, and the monomialisation driver for monomial morphisms onto a
surface."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .blowup import BlowupNode, BlowupTree
from .chart import ChartedPair, MorphismOfPairs, RationalPoint
from .classify import is_monomial_morphism_at, is_quasi_prepared, top_fitting_ideal
from .ideal import IdealPresentation, PrincipalMonomialCertificate, is_principal_monomial_at
from .poly import Monomial, Polynomial


class DepthLimitError(RuntimeError):
    """Blowup tree exceeded the configured depth cap."""


class TerminationMeasureError(AssertionError):
    """The termination measure failed to decrease on a blowup step."""


class NonMonomialInputError(ValueError):
    """Input outside the monomial subclass handled combinatorially."""


@dataclass
class MonomialIdeal:
    """Minimal monomial generators (an antichain under divisibility) over a
    fixed variable tuple."""

    variables: tuple[str, ...]
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def from_exponents(
        cls, variables: Sequence[str], exponents: Sequence[Sequence[int]]
    ) -> "MonomialIdeal":
        return cls(tuple(variables), _antichain(tuple(map(tuple, exponents))))

    def is_principal(self) -> bool:
        return len(self.generators) <= 1

    def incomparable_pairs(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        out = []
        g = self.generators
        for i in range(len(g)):
            for j in range(i + 1, len(g)):
                out.append((g[i], g[j]))
        return out

    def transform(self, distinguished: str, absorbed: Sequence[str]) -> "MonomialIdeal":
        """Blowup chart action: the distinguished exponent absorbs the
        exponents of the other center variables."""
        c = self.variables.index(distinguished)
        idx = [self.variables.index(v) for v in absorbed]
        new = []
        for e in self.generators:
            e = list(e)
            e[c] += sum(e[i] for i in idx)
            new.append(tuple(e))
        return MonomialIdeal.from_exponents(self.variables, new)

    def content(self) -> tuple[int, ...]:
        if not self.generators:
            raise ValueError("zero monomial ideal")
        out = list(self.generators[0])
        for e in self.generators[1:]:
            out = [min(a, b) for a, b in zip(out, e)]
        return tuple(out)


def _antichain(gens: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    uniq = sorted(set(gens))
    keep = []
    for g in uniq:
        if any(h != g and all(a <= b for a, b in zip(h, g)) for h in uniq):
            continue
        keep.append(g)
    return tuple(keep)


# ---------------------------------------------------------------------------
# Center selection and the termination measure


def _difference(g: Sequence[int], h: Sequence[int]) -> list[int]:
    return [a - b for a, b in zip(g, h)]


def _pair_key(d: Sequence[int]) -> tuple[int, int]:
    """Euclidean weight of an incomparable difference vector.

    With a the largest positive entry and b the largest magnitude of a
    negative entry, the key is (a + b, number of entries attaining a or
    -b).  Blowing up the center pairing an entry at a with one at -b
    replaces that entry by a value strictly inside (-b, a), so in each
    chart the replaced entry leaves its extremal class and never joins
    the other one: the key strictly lex-decreases unless the pair turns
    comparable.
    """
    a = max(x for x in d if x > 0)
    b = max(-x for x in d if x < 0)
    crowd = sum(1 for x in d if x == a or x == -b)
    return (a + b, crowd)


def _target_pair(ideal: MonomialIdeal) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The incomparable generator pair attacked next: minimal Euclidean
    weight, canonical tiebreak."""
    pairs = ideal.incomparable_pairs()
    assert pairs, "principal ideal needs no center"
    return min(pairs, key=lambda gh: (_pair_key(_difference(*gh)), gh))


def choose_center(ideal: MonomialIdeal, divisor_vars: Sequence[str]) -> tuple[str, str]:
    """Codimension-two center resolving the target pair.

    For the target pair with difference vector d, take the coordinate of
    maximal positive difference against the coordinate of maximal
    negative difference (the pair's largest non-principality defect,
    ties to the earliest variable).  The pair's Euclidean weight drops
    in every chart, and a comparable pair stays comparable under the
    chart transforms, which makes the strategy terminate.
    """
    g, h = _target_pair(ideal)
    d = _difference(g, h)
    divisor = set(divisor_vars)
    pos = [k for k, x in enumerate(d) if x > 0]
    neg = [k for k, x in enumerate(d) if x < 0]
    assert pos and neg, "comparable pair selected as center target"
    for k in pos + neg:
        if ideal.variables[k] not in divisor:
            raise NonMonomialInputError(
                f"generators differ on non-divisor variable {ideal.variables[k]!r}"
            )
    i = min(pos, key=lambda k: (-d[k], k))
    j = min(neg, key=lambda k: (d[k], k))
    return ideal.variables[i], ideal.variables[j]


def termination_measure(ideal: MonomialIdeal) -> tuple:
    """Well-founded measure: (number of incomparable generator pairs,
    minimal Euclidean weight of a pair difference).  Principal ideals
    measure (0,).

    The pair count never increases (comparability of a generator pair is
    preserved by the monotone chart transforms), and the attacked pair
    either turns comparable or strictly drops its weight, so the minimal
    weight falls whenever the count does not.
    """
    pairs = ideal.incomparable_pairs()
    if not pairs:
        return (0,)
    return (
        len(pairs),
        min(_pair_key(_difference(g, h)) for g, h in pairs),
    )


# ---------------------------------------------------------------------------
# Principalization


def goward_principalize(
    ideal: MonomialIdeal,
    chart: ChartedPair,
    max_depth: int = 64,
) -> BlowupTree:
    """Blow up codimension-two coordinate centers until the transform of
    the ideal is principal in every chart.

    The termination measure must strictly decrease on every non-principal
    child; a violation raises TerminationMeasureError.
    """
    if ideal.variables != chart.variables:
        raise ValueError("ideal variables must match the chart")
    divisor = set(chart.divisor_vars)
    for e in ideal.generators:
        for v, x in zip(ideal.variables, e):
            if x and v not in divisor:
                raise NonMonomialInputError(
                    f"generator exponent on non-divisor variable {v!r}"
                )
    tree = BlowupTree(chart)
    tree.root.payload = ideal
    _certify_if_principal(tree.root)
    worklist = [(tree.root, 0)]
    while worklist:
        node, depth = worklist.pop()
        current: MonomialIdeal = node.payload
        if current.is_principal():
            continue
        if depth >= max_depth:
            raise DepthLimitError(f"blowup depth exceeded {max_depth}")
        ci, cj = choose_center(current, node.chart.divisor_vars)
        before = termination_measure(current)
        children = tree.expand(node, (ci, cj))
        # expand() returns one child per center variable, in center order.
        for child, distinguished in zip(children, (ci, cj)):
            absorbed = [v for v in (ci, cj) if v != distinguished]
            transformed = current.transform(distinguished, absorbed)
            child.payload = transformed
            if not transformed.is_principal():
                after = termination_measure(transformed)
                if not after < before:
                    raise TerminationMeasureError(
                        f"measure did not decrease: {before} -> {after} "
                        f"(center {ci},{cj})"
                    )
                worklist.append((child, depth + 1))
            else:
                _certify_if_principal(child)
    return tree


def _certify_if_principal(node: BlowupNode):
    ideal: MonomialIdeal = node.payload
    if not ideal.is_principal():
        return
    gen = ideal.generators[0] if ideal.generators else (0,) * len(ideal.variables)
    node.payload = ideal
    node.certificate = PrincipalMonomialCertificate(
        Monomial(gen), Polynomial.constant(1, ideal.variables)
    )


# ---------------------------------------------------------------------------
# Monomialisation driver


@dataclass
class LeafCertificate:
    principal: PrincipalMonomialCertificate
    exponent_matrix: list[tuple[int, ...]]


def monomial_ideal_from_presentation(
    I: IdealPresentation, chart: ChartedPair
) -> MonomialIdeal:
    """Extract the monomial ideal of single-term generators; a nonzero
    constant generator yields the unit ideal."""
    exps = []
    for g in I.generators:
        if len(g.terms) != 1:
            raise NonMonomialInputError(f"generator {g} is not a single term")
        ((e, _),) = g.terms.items()
        exps.append(e)
    if not exps:
        raise ValueError("zero ideal cannot be principalized")
    return MonomialIdeal.from_exponents(chart.variables, exps)


def transformed_morphism_at_leaf(phi: MorphismOfPairs, leaf: BlowupNode) -> MorphismOfPairs:
    comps = {x: p.substitute(leaf.substitution) for x, p in phi.components.items()}
    return MorphismOfPairs(leaf.chart, phi.target, comps)


def _sample_leaf_points(
    chart: ChartedPair, rng: random.Random, count: int = 5
) -> list[RationalPoint]:
    pts = [RationalPoint((Fraction(0),) * len(chart.variables))]
    divisor = list(chart.divisor_vars)
    for _ in range(count):
        if divisor:
            vanish = set(rng.sample(divisor, rng.randint(1, len(divisor))))
        else:
            vanish = set()
        coords = tuple(
            Fraction(0) if v in vanish else Fraction(rng.randint(1, 5))
            for v in chart.variables
        )
        pts.append(RationalPoint(coords))
    return pts


def monomialize_monomial_morphism(
    phi: MorphismOfPairs,
    max_depth: int = 64,
    seed: int = 0,
    samples: int = 5,
) -> BlowupTree:
    """Principalize the top log-Fitting ideal of a monomial morphism onto a
    surface by coordinate blowups, certifying every leaf strongly prepared
    and monomial of full exponent rank."""
    if len(phi.target.variables) != 2:
        raise ValueError("driver requires a surface target")
    for x, p in phi.components.items():
        if len(p.terms) != 1:
            raise NonMonomialInputError(
                f"component {x!r} is not monomial; the general pipeline is "
                "out of scope"
            )
    ok, diags = is_quasi_prepared(phi)
    if not ok:
        raise ValueError("not quasi-prepared: " + "; ".join(diags))

    fitting = top_fitting_ideal(phi)
    ideal = monomial_ideal_from_presentation(fitting, phi.source)
    tree = goward_principalize(ideal, phi.source, max_depth=max_depth)

    rng = random.Random(seed)
    for leaf in tree.leaves():
        leaf_phi = transformed_morphism_at_leaf(phi, leaf)
        leaf_ideal: MonomialIdeal = leaf.payload
        assert leaf_ideal.is_principal()
        # Independent re-verification of the principal certificate.
        fitting_leaf = top_fitting_ideal(leaf_phi)
        pts = _sample_leaf_points(leaf.chart, rng, count=samples)
        matrices = []
        for pt in pts:
            cert = is_principal_monomial_at(
                fitting_leaf, pt.coordinates, leaf.chart.divisor_vars
            )
            if cert is None:
                raise AssertionError(
                    f"leaf failed the principal monomial re-check at {pt}"
                )
            matrix = is_monomial_morphism_at(leaf_phi, pt)
            if matrix is None:
                raise AssertionError(f"leaf not monomial at {pt}")
            matrices.append(matrix)
        leaf.certificate = LeafCertificate(
            is_principal_monomial_at(
                fitting_leaf,
                (Fraction(0),) * len(leaf.chart.variables),
                leaf.chart.divisor_vars,
            ),
            matrices[0],
        )
    return tree
