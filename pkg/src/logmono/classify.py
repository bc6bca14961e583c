"""Classification predicates for morphisms of pairs: singular locus,
quasi-prepared, strongly prepared (semantic and syntactic), monomial
morphisms, and log-rank-adapted verification."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .chart import (
    MorphismOfPairs,
    RationalPoint,
    preimage_equality_check,
    stratum_of_point,
)
from .fitting import log_fitting_ideal
from .ideal import (
    IdealPresentation,
    PrincipalMonomialCertificate,
    ideal_membership,
    is_principal_monomial_at,
    radical_membership,
)
from .logdiff import _det
from .rank import JacobianMatrix, log_rank_at_point
from .poly import Monomial, Polynomial


@dataclass
class StronglyPreparedCertificate:
    """Witness that the components match one of the three normal forms."""

    case_tag: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    multiplicity: int
    series_coefficients: dict[int, Fraction]  # P as a polynomial in one monomial
    z_designation: str  # "divisorial" or "free"


@dataclass
class DivisorFiltration:
    """Nested SNC divisor levels, outermost first."""

    levels: list[tuple[str, ...]]

    def validate(self, divisor_vars: Sequence[str]):
        prev = None
        for level in self.levels:
            s = set(level)
            if not s <= set(divisor_vars):
                raise ValueError(f"filtration level {level} not inside the divisor")
            if prev is not None and not s <= prev:
                raise ValueError("filtration levels are not nested")
            prev = s


def singular_locus_ideal(phi: MorphismOfPairs) -> IdealPresentation:
    """Ideal of maximal minors of the Jacobian (requires n >= N)."""
    n = len(phi.source.variables)
    N = len(phi.target.variables)
    if n < N:
        raise ValueError("source dimension below target dimension")
    jac = JacobianMatrix(phi)
    gens = []
    for cols in combinations(range(n), N):
        minor = _det([[jac.entries[i][j] for j in cols] for i in range(N)])
        if not minor.is_zero():
            gens.append(minor)
    return IdealPresentation(gens, phi.source.variables)


def is_quasi_prepared(phi: MorphismOfPairs) -> tuple[bool, list[str]]:
    """Singular locus inside the divisor, and reduced divisor preimage
    equal to the divisor."""
    diagnostics = []
    sing = singular_locus_ideal(phi)
    u_prod = phi.source.divisor_product()
    if not radical_membership(u_prod, sing):
        diagnostics.append("singular locus not contained in the divisor")
    if not preimage_equality_check(phi):
        diagnostics.append("divisor preimage does not equal the source divisor")
    return (not diagnostics), diagnostics


def top_fitting_ideal(phi: MorphismOfPairs) -> IdealPresentation:
    """The log-Fitting ideal at top form degree (the target dimension)."""
    N = len(phi.target.variables)
    return log_fitting_ideal(phi, N)


def is_strongly_prepared_at(
    phi: MorphismOfPairs, a: RationalPoint
) -> Optional[PrincipalMonomialCertificate]:
    """Semantic test: the top log-Fitting ideal is locally principal
    monomial at the point.  Requires a surface target and quasi-prepared."""
    if len(phi.target.variables) != 2:
        raise ValueError("strongly prepared is defined for surface targets only")
    ok, diags = is_quasi_prepared(phi)
    if not ok:
        raise ValueError("morphism is not quasi-prepared: " + "; ".join(diags))
    F = top_fitting_ideal(phi)
    if F.is_zero_ideal():
        return None
    return is_principal_monomial_at(F, a.coordinates, phi.source.divisor_vars)


# ---------------------------------------------------------------------------
# Syntactic normal-form matcher


def _as_constant_times_monomial(p: Polynomial) -> Optional[tuple[Fraction, Monomial]]:
    if len(p.terms) != 1:
        return None
    ((exps, c),) = p.terms.items()
    return c, Monomial(exps)


def _divisor_exponents(
    p_exps: tuple[int, ...], ambient: tuple[str, ...], divisor: Sequence[str]
) -> Optional[tuple[int, ...]]:
    """Exponents restricted to the divisor block; None if a free variable
    occurs."""
    div = list(divisor)
    out = [0] * len(div)
    for v, e in zip(ambient, p_exps):
        if e == 0:
            continue
        if v in div:
            out[div.index(v)] = e
        else:
            return None
    return tuple(out)


def _wedge_is_zero(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(
        a[i] * b[j] - a[j] * b[i] == 0
        for i in range(len(a))
        for j in range(i + 1, len(a))
    )


def _match_first_component(
    x1: Polynomial, ambient: tuple[str, ...], stratum: Sequence[str]
) -> Optional[tuple[int, tuple[int, ...]]]:
    """Recognize c*(u^alpha)^m with gcd(alpha)=1 and alpha positive on the
    whole stratum.  Returns (m, alpha)."""
    cm = _as_constant_times_monomial(x1)
    if cm is None:
        return None
    _, mono = cm
    e = _divisor_exponents(mono.exponents, ambient, stratum)
    if e is None or any(x == 0 for x in e) or not e:
        return None
    m = 0
    for x in e:
        m = gcd(m, x)
    if m == 0:
        return None
    alpha = tuple(x // m for x in e)
    return m, alpha


def _split_series_part(
    z: Polynomial, ambient: tuple[str, ...], stratum: Sequence[str], alpha: tuple[int, ...]
) -> tuple[dict[int, Fraction], Polynomial]:
    """Split z into P(u^alpha) plus a remainder.

    Terms whose exponents are a non-negative integer multiple of alpha on
    the stratum (and zero elsewhere) belong to P.
    """
    series: dict[int, Fraction] = {}
    rem_terms = {}
    for exps, c in z.terms.items():
        de = _divisor_exponents(exps, ambient, stratum)
        j = None
        if de is not None:
            if all(x == 0 for x in de):
                j = 0
            else:
                ratios = {x // a for x, a in zip(de, alpha) if a > 0}
                if len(ratios) == 1:
                    jj = ratios.pop()
                    if de == tuple(jj * a for a in alpha):
                        j = jj
        if j is not None:
            series[j] = series.get(j, Fraction(0)) + c
        else:
            rem_terms[exps] = c
    return series, Polynomial(rem_terms, ambient)


def match_spm_template(
    phi: MorphismOfPairs, a: RationalPoint
) -> Optional[StronglyPreparedCertificate]:
    """Syntactic matcher against the three strongly-prepared normal forms.

    Recognizes presentations already in normal form; a None verdict does
    not preclude strong preparedness after a coordinate change.
    """
    if len(phi.target.variables) != 2:
        return None
    stratum = stratum_of_point(phi.source, a)
    ambient = phi.source.variables
    target_div = list(phi.target.divisor_vars)
    target_free = list(phi.target.free_vars)
    k = len(stratum)
    comps = phi.components

    # Case 3: both targets divisorial, both components pure monomials.
    if len(target_div) == 2 and k >= 2:
        cm1 = _as_constant_times_monomial(comps[target_div[0]])
        cm2 = _as_constant_times_monomial(comps[target_div[1]])
        if cm1 and cm2:
            e1 = _divisor_exponents(cm1[1].exponents, ambient, stratum)
            e2 = _divisor_exponents(cm2[1].exponents, ambient, stratum)
            if (
                e1 is not None
                and e2 is not None
                and any(e1)
                and any(e2)
                and all(x + y > 0 for x, y in zip(e1, e2))
                and any(x > 0 and y > 0 and i != j
                        for i, x in enumerate(e1) for j, y in enumerate(e2))
            ):
                return StronglyPreparedCertificate(3, e1, e2, 1, {}, "divisorial")

    # Cases 1 and 2: x1 divisorial in normal form, z the other component.
    orderings = []
    if len(target_div) == 1:
        orderings.append((target_div[0], target_free[0], "free"))
    elif len(target_div) == 2:
        orderings.append((target_div[0], target_div[1], "divisorial"))
        orderings.append((target_div[1], target_div[0], "divisorial"))
    for x1_name, z_name, z_kind in orderings:
        first = _match_first_component(comps[x1_name], ambient, stratum)
        if first is None:
            continue
        m, alpha = first
        series, rem = _split_series_part(comps[z_name], ambient, stratum, alpha)
        if rem.is_zero():
            continue
        if len(rem.terms) != 1:
            continue
        ((exps, _),) = rem.terms.items()
        beta = _divisor_exponents(exps, ambient, stratum)
        if beta is not None:
            # Case 2: remainder is a pure divisor monomial not proportional
            # to alpha.
            if k >= 2 and not _wedge_is_zero(alpha, beta):
                return StronglyPreparedCertificate(2, alpha, beta, m, series, z_kind)
            continue
        # Case 1: remainder is u^beta * (one free variable, exponent 1).
        free_part = {
            v: e
            for v, e in zip(ambient, exps)
            if e and v not in stratum
        }
        if len(free_part) == 1 and set(free_part.values()) == {1}:
            (free_v,) = free_part
            if free_v in phi.source.free_vars:
                beta = tuple(
                    e for v, e in zip(ambient, exps) if v in stratum
                )
                if k >= 1:
                    return StronglyPreparedCertificate(1, alpha, beta, m, series, z_kind)
    return None


def is_monomial_morphism_at(
    phi: MorphismOfPairs, a: RationalPoint
) -> Optional[list[tuple[int, ...]]]:
    """Exponent matrix if every component is unit-times-monomial at the
    point and the matrix has full target rank; None otherwise."""
    rows = []
    for x in phi.target.variables:
        p = phi.components[x]
        if p.is_zero():
            return None
        content = p.monomial_content()
        residual = p.divide_by_monomial(content)
        if residual.evaluate(a.coordinates) == 0:
            return None
        rows.append(content.exponents)
    N = len(phi.target.variables)
    if _integer_matrix_rank(rows) != N:
        return None
    return rows


def _integer_matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    from .rank import rational_matrix_rank

    return rational_matrix_rank([[Fraction(x) for x in r] for r in rows])


# ---------------------------------------------------------------------------
# Log-rank adapted verification


def _sample_stratum_points(
    chart_vars: tuple[str, ...],
    zero_vars: set[str],
    nonzero_vars: set[str],
    rng: random.Random,
    count: int,
) -> list[RationalPoint]:
    pts = []
    for _ in range(count):
        coords = []
        for v in chart_vars:
            if v in zero_vars:
                coords.append(Fraction(0))
            elif v in nonzero_vars:
                coords.append(Fraction(rng.randint(1, 7), rng.randint(1, 3)))
            else:
                coords.append(Fraction(rng.randint(-5, 5)))
        pts.append(RationalPoint(tuple(coords)))
    return pts


def is_log_rank_adapted_at(
    phi: MorphismOfPairs,
    a: RationalPoint,
    filtration: DivisorFiltration,
    target_stratum_ideal: IdealPresentation,
    seed: int = 0,
    samples: int = 5,
) -> tuple[bool, list[str]]:
    """Verify the two log-rank-adapted conditions on supplied data.

    Condition (1): the first r components are distinct free variables and,
    unless r equals the target dimension, component r+1 is a divisor
    monomial generating the pullback of the supplied target stratum ideal.
    Condition (2): on each sampled filtration stratum the log-rank is
    exactly min(n, N) minus the level index.
    """
    filtration.validate(phi.source.divisor_vars)
    diagnostics: list[str] = []
    n = len(phi.source.variables)
    N = len(phi.target.variables)
    phi0 = phi.with_empty_target_divisor()
    r = log_rank_at_point(phi0, a)

    comps = phi.component_list()
    free = set(phi.source.free_vars)
    seen = set()
    for i in range(r):
        p = comps[i]
        cm = _as_constant_times_monomial(p)
        ok = (
            cm is not None
            and cm[0] == 1
            and cm[1].degree == 1
            and next(
                v for v, e in zip(phi.source.variables, cm[1].exponents) if e
            )
            in free
        )
        if not ok:
            diagnostics.append(f"component {i + 1} is not a free source variable")
            continue
        v = next(v for v, e in zip(phi.source.variables, cm[1].exponents) if e)
        if v in seen:
            diagnostics.append(f"component {i + 1} repeats the variable {v}")
        seen.add(v)

    if r < N:
        p = comps[r]
        cm = _as_constant_times_monomial(p)
        if cm is None or _divisor_exponents(
            cm[1].exponents, phi.source.variables, phi.source.divisor_vars
        ) is None:
            diagnostics.append(
                f"component {r + 1} is not a monomial in divisor variables"
            )
        else:
            pulled = [phi.pullback(g) for g in target_stratum_ideal.generators]
            pulled_ideal = IdealPresentation(pulled, phi.source.variables)
            comp_ideal = IdealPresentation([p], phi.source.variables)
            if not (
                all(ideal_membership(g, comp_ideal) for g in pulled)
                and all(
                    ideal_membership(g, pulled_ideal)
                    for g in comp_ideal.generators
                )
            ):
                diagnostics.append(
                    "pullback of the target stratum ideal is not generated "
                    f"by component {r + 1}"
                )

    rng = random.Random(seed)
    expected_base = min(n, N)
    for idx, level in enumerate(filtration.levels):
        k = idx + 1
        next_level = (
            set(filtration.levels[idx + 1]) if idx + 1 < len(filtration.levels) else set()
        )
        boundary = [v for v in level if v not in next_level]
        if not boundary:
            continue
        for w in boundary:
            pts = _sample_stratum_points(
                phi.source.variables,
                {w},
                (set(phi.source.divisor_vars) - {w}) | set(phi.source.free_vars),
                rng,
                samples,
            )
            for pt in pts:
                lr = log_rank_at_point(phi, pt)
                if lr != expected_base - k:
                    diagnostics.append(
                        f"log-rank {lr} on stratum of {w} at level {k}, "
                        f"expected {expected_base - k}"
                    )
                    break
    return (not diagnostics), diagnostics
