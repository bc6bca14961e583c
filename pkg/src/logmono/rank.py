"""Rank invariants: pointwise rank, geometric rank, log-rank, and the
image-dimension computation through elimination ideals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .chart import ChartedPair, MorphismOfPairs, RationalPoint
from .ideal import IdealPresentation, dimension, elimination
from .logdiff import log_jacobian
from .poly import Polynomial, exact_divide, grevlex_key


class JacobianMatrix:
    """Rows per target variable, columns per source variable."""

    def __init__(self, phi: MorphismOfPairs):
        self.phi = phi
        self.entries = [
            [
                phi.components[x].partial_derivative(v)
                for v in phi.source.variables
            ]
            for x in phi.target.variables
        ]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.phi.source.variables)


def rational_matrix_rank(rows: list[list[Fraction]]) -> int:
    """Gaussian elimination over the rationals."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        pv = m[row][col]
        for r in range(row + 1, len(m)):
            if m[r][col] != 0:
                f = m[r][col] / pv
                for c in range(col, ncols):
                    m[r][c] -= f * m[row][c]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def _poly_pivot_key(p: Polynomial):
    # Lowest total degree first, then canonical term order for determinism.
    return (
        p.total_degree,
        tuple(sorted(p.terms.keys(), key=grevlex_key)),
        tuple(p.terms[e] for e in sorted(p.terms.keys(), key=grevlex_key)),
    )


def symbolic_matrix_rank(rows: list[list[Polynomial]]) -> int:
    """Rank over the fraction field via Bareiss fraction-free elimination.

    Pivots are chosen by lowest total degree (then canonical tiebreak);
    all divisions are exact.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    amb = m[0][0].ambient
    prev = Polynomial.constant(1, amb)
    rank = 0
    rows_left = list(range(len(m)))
    cols_left = list(range(len(m[0])))
    while rows_left and cols_left:
        candidates = [
            (r, c) for r in rows_left for c in cols_left if not m[r][c].is_zero()
        ]
        if not candidates:
            break
        pr, pc = min(candidates, key=lambda rc: (_poly_pivot_key(m[rc[0]][rc[1]]), rc))
        pivot = m[pr][pc]
        rank += 1
        rows_left.remove(pr)
        cols_left.remove(pc)
        for r in rows_left:
            for c in cols_left:
                num = m[r][c] * pivot - m[r][pc] * m[pr][c]
                q = exact_divide(num, prev)
                assert q is not None, "Bareiss division must be exact"
                m[r][c] = q
            m[r][pc] = Polynomial.zero(amb)
        prev = pivot
    return rank


def rank_at_point(phi: MorphismOfPairs, a: RationalPoint) -> int:
    jac = JacobianMatrix(phi)
    pt = a.coordinates
    return rational_matrix_rank(
        [[e.evaluate(pt) for e in row] for row in jac.entries]
    )


def geometric_rank(phi: MorphismOfPairs) -> int:
    return symbolic_matrix_rank(JacobianMatrix(phi).entries)


def log_rank_at_point(phi: MorphismOfPairs, a: RationalPoint) -> int:
    lj = log_jacobian(phi)
    pt = a.coordinates
    return rational_matrix_rank(
        [[e.evaluate(pt) for e in row] for row in lj.entries]
    )


def restrict_morphism(phi: MorphismOfPairs, D: Sequence[str]) -> MorphismOfPairs:
    """Restrict to the stratum where the variables in D vanish."""
    D = tuple(D)
    for v in D:
        if v not in phi.source.divisor_vars:
            raise ValueError(f"{v!r} is not a source divisor variable")
    remaining = tuple(v for v in phi.source.variables if v not in set(D))
    sub = {}
    for v in phi.source.variables:
        if v in set(D):
            sub[v] = Polynomial.zero(remaining)
        else:
            sub[v] = Polynomial.variable(v, remaining)
    new_source = ChartedPair(
        remaining, tuple(v for v in phi.source.divisor_vars if v not in set(D))
    )
    comps = {x: p.substitute(sub) for x, p in phi.components.items()}
    return MorphismOfPairs(new_source, phi.target, comps)


def restricted_geometric_rank(phi: MorphismOfPairs, D: Sequence[str]) -> int:
    if not D:
        return geometric_rank(phi)
    return geometric_rank(restrict_morphism(phi, D))


def graph_ideal(phi: MorphismOfPairs) -> tuple[IdealPresentation, tuple[str, ...]]:
    """Ideal of the graph in source x target coordinates.

    Target variables are renamed when they collide with source names.
    Returns the ideal and the (possibly renamed) target variable tuple.
    """
    src = phi.source.variables
    tgt = []
    for x in phi.target.variables:
        name = x
        while name in src or name in tgt:
            name = name + "_img"
        tgt.append(name)
    tgt = tuple(tgt)
    amb = src + tgt
    gens = []
    for new, old in zip(tgt, phi.target.variables):
        g = Polynomial.variable(new, amb) - phi.components[old].extend_ambient(amb)
        gens.append(g)
    return IdealPresentation(gens, amb), tgt


def image_closure_dimension(phi: MorphismOfPairs) -> int:
    """Dimension of the Zariski closure of the image, by eliminating the
    source variables from the graph ideal."""
    gideal, tgt = graph_ideal(phi)
    return dimension(elimination(gideal, tgt))
