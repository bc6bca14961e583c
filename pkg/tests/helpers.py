"""Shared corpus builders and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import gcd

from logmono.chart import ChartedPair, MorphismOfPairs, RationalPoint
from logmono.classify import is_quasi_prepared
from logmono.poly import Polynomial


def P(expr: str, ambient) -> Polynomial:
    from logmono.frontend import parse_expression

    return parse_expression(expr, tuple(ambient))


def random_sparse_poly(amb, rng, max_terms=2, max_deg=3, min_deg=0):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            e = tuple(rng.randint(0, max_deg) for _ in amb)
            if min_deg <= sum(e) <= max_deg:
                break
        terms[e] = terms.get(e, 0) + Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return Polynomial(terms, tuple(amb))


def origin(chart: ChartedPair) -> RationalPoint:
    return RationalPoint((Fraction(0),) * len(chart.variables))


# ---------------------------------------------------------------------------
# Quasi-prepared corpus in and around the three surface normal forms


def _series(rng, amb, alpha, max_j=2):
    """A polynomial P(u^alpha) with small support and no constant term."""
    out = Polynomial.zero(amb)
    for j in range(1, max_j + 1):
        if rng.random() < 0.6:
            c = Fraction(rng.choice([-2, -1, 1, 2]))
            mono = {tuple(j * a for a in alpha) + (0,) * (len(amb) - len(alpha)): c}
            out = out + Polynomial(mono, amb)
    return out


def _monomial(amb, exps, coeff=1):
    return Polynomial({tuple(exps): Fraction(coeff)}, tuple(amb))


def normal_form_corpus(rng=None, count=54):
    """Quasi-prepared surface morphisms: the three normal forms plus a few
    quasi-prepared morphisms outside them.  Returns (phi, point) pairs."""
    rng = rng or random.Random(7)
    out = []
    while len(out) < count:
        kind = rng.choice(["case1", "case2", "case3", "offform"])
        if kind == "case1":
            src = ChartedPair(("u1", "u2", "v1"), ("u1", "u2"))
            tgt = ChartedPair(("x1", "y1"), ("x1",))
            amb = src.variables
            while True:
                alpha = (rng.randint(1, 3), rng.randint(1, 3))
                if gcd(*alpha) == 1:
                    break
            m = rng.randint(1, 2)
            beta = (rng.randint(0, 3), rng.randint(0, 3))
            x1 = _monomial(amb, (alpha[0] * m, alpha[1] * m, 0))
            y1 = _series(rng, amb, alpha) + _monomial(amb, beta + (1,))
            phi = MorphismOfPairs(src, tgt, {"x1": x1, "y1": y1})
        elif kind == "case2":
            src = ChartedPair(("u1", "u2"), ("u1", "u2"))
            tgt = ChartedPair(("x1", "y1"), ("x1",))
            amb = src.variables
            while True:
                alpha = (rng.randint(1, 3), rng.randint(1, 3))
                if gcd(*alpha) == 1:
                    break
            m = rng.randint(1, 2)
            while True:
                beta = (rng.randint(0, 4), rng.randint(0, 4))
                if alpha[0] * beta[1] - alpha[1] * beta[0] != 0:
                    break
            x1 = _monomial(amb, (alpha[0] * m, alpha[1] * m))
            y1 = _series(rng, amb, alpha) + _monomial(amb, beta)
            phi = MorphismOfPairs(src, tgt, {"x1": x1, "y1": y1})
        elif kind == "case3":
            src = ChartedPair(("u1", "u2", "u3"), ("u1", "u2", "u3"))
            tgt = ChartedPair(("x1", "x2"), ("x1", "x2"))
            amb = src.variables
            a = (rng.randint(1, 3), rng.randint(0, 3), 0)
            b = (0, rng.randint(0, 3), rng.randint(1, 3))
            if all(x + y == 0 for x, y in zip(a[1:2], b[1:2])):
                continue
            x1 = _monomial(amb, a)
            x2 = _monomial(amb, b)
            phi = MorphismOfPairs(src, tgt, {"x1": x1, "x2": x2})
        else:
            # Quasi-prepared but with a two-term remainder: outside the
            # syntactic normal forms.
            src = ChartedPair(("u1", "u2"), ("u1", "u2"))
            tgt = ChartedPair(("x1", "y1"), ("x1",))
            amb = src.variables
            x1 = _monomial(amb, (2, 2))
            y1 = (
                _monomial(amb, (1, 1))
                + _monomial(amb, (rng.randint(2, 4), rng.randint(3, 4)))
                + _monomial(amb, (rng.randint(3, 4), rng.randint(2, 4)))
            )
            phi = MorphismOfPairs(src, tgt, {"x1": x1, "y1": y1})
        ok, _ = is_quasi_prepared(phi)
        if ok:
            out.append((phi, origin(phi.source)))
    return out


# ---------------------------------------------------------------------------
# Corpus with empty target divisor, for the log-rank / restricted-rank law


def empty_divisor_corpus(rng=None, count=30):
    rng = rng or random.Random(11)
    out = []
    for _ in range(count):
        src = ChartedPair(("u1", "u2", "v1"), ("u1", "u2"))
        tgt = ChartedPair(("x1", "x2"), ())
        comps = {
            x: random_sparse_poly(src.variables, rng, max_terms=2, max_deg=3, min_deg=1)
            for x in tgt.variables
        }
        out.append(MorphismOfPairs(src, tgt, comps))
    return out


def strata(chart: ChartedPair):
    div = chart.divisor_vars
    for size in range(len(div) + 1):
        for D in combinations(div, size):
            yield D


def random_stratum_point(chart: ChartedPair, D, rng) -> RationalPoint:
    zero = set(D)
    coords = tuple(
        Fraction(0) if v in zero else Fraction(rng.randint(1, 9), rng.randint(1, 4))
        for v in chart.variables
    )
    return RationalPoint(coords)


# ---------------------------------------------------------------------------
# Monomial morphisms onto a surface, for the monomialisation driver


def monomial_surface_corpus(rng=None, count=25):
    rng = rng or random.Random(23)
    out = []
    while len(out) < count:
        src = ChartedPair(("u1", "u2", "v1"), ("u1", "u2"))
        tgt = ChartedPair(("x1", "y1"), ("x1",))
        amb = src.variables
        a = (rng.randint(1, 4), rng.randint(1, 4), 0)
        e = rng.choice([0, 1])
        b = (rng.randint(0, 4), rng.randint(0, 4), e)
        if e == 0 and a[0] * b[1] - a[1] * b[0] == 0:
            continue
        if e == 0 and b[0] + b[1] == 0:
            continue
        phi = MorphismOfPairs(
            src, tgt, {"x1": _monomial(amb, a), "y1": _monomial(amb, b)}
        )
        ok, _ = is_quasi_prepared(phi)
        if ok:
            out.append(phi)
    return out


# ---------------------------------------------------------------------------
# Random plain morphisms for the rank = image-dimension law


def rank_law_corpus(rng=None, count=100):
    """Sparse random morphisms (n, N <= 3, degree <= 3); term counts are
    kept small so the graph-ideal eliminations stay desk-scale."""
    rng = rng or random.Random(42)
    out = []
    for _ in range(count):
        n = rng.randint(1, 3)
        N = rng.randint(1, 3)
        max_terms = 2 if max(n, N) == 3 else 3
        src = ChartedPair(tuple(f"w{k}" for k in range(n)), ())
        tgt = ChartedPair(tuple(f"x{k}" for k in range(N)), ())
        comps = {
            x: random_sparse_poly(src.variables, rng, max_terms=max_terms)
            for x in tgt.variables
        }
        out.append(MorphismOfPairs(src, tgt, comps))
    return out


# ---------------------------------------------------------------------------
# Degree-bounded linear-algebra membership oracle


def _monomials_up_to(nvars, degree):
    if nvars == 1:
        return [(d,) for d in range(degree + 1)]
    out = []
    for d in range(degree + 1):
        for first in range(d + 1):
            for rest in _monomials_up_to(nvars - 1, d - first):
                if sum(rest) == d - first:
                    out.append((first,) + rest)
    return sorted(set(out))


def _solve_consistent(rows, rhs):
    """Whether the rational system rows*x = rhs has a solution."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        pv = m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col] / pv
                for c in range(col, ncols + 1):
                    m[r][c] -= f * m[row][c]
        row += 1
    return all(r[-1] == 0 for r in m[row:])


def linear_membership_oracle(f, gens, bound):
    """Whether f = sum h_i g_i with deg h_i <= bound, by solving the
    coefficient-matching linear system over the rationals."""
    amb = f.ambient
    nvars = len(amb)
    cofactor_monos = _monomials_up_to(nvars, bound)
    max_out = bound + max((g.total_degree for g in gens), default=0)
    out_monos = _monomials_up_to(nvars, max(max_out, f.total_degree))
    index = {e: i for i, e in enumerate(out_monos)}
    cols = []
    for g in gens:
        for m in cofactor_monos:
            col = [Fraction(0)] * len(out_monos)
            for e, c in g.terms.items():
                tgt = tuple(a + b for a, b in zip(e, m))
                if tgt in index:
                    col[index[tgt]] += c
                else:
                    break
            else:
                cols.append(col)
                continue
            cols.append(None)
    keep = [c for c in cols if c is not None]
    rows = list(map(list, zip(*keep))) if keep else [[] for _ in out_monos]
    rhs = [f.terms.get(e, Fraction(0)) for e in out_monos]
    if not keep:
        return all(b == 0 for b in rhs)
    return _solve_consistent(rows, rhs)
