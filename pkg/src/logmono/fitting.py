"""Log-Fitting ideals of a morphism of pairs, computed chart-wise.

The ideal at form degree k is generated by all coefficients of the
pullbacks of the target log basis k-forms.  Indexing convention: the
artifact exposes the form degree k directly; the top ideal (k equal to
the target dimension) is the one whose local principality characterizes
strongly prepared morphisms.
"""

from __future__ import annotations

from itertools import combinations

from .chart import MorphismOfPairs
from .ideal import IdealPresentation, contains_one, radical_membership
from .logdiff import pullback_basis_form


def log_fitting_ideal(phi: MorphismOfPairs, k: int) -> IdealPresentation:
    n = len(phi.source.variables)
    N = len(phi.target.variables)
    if not 1 <= k <= min(n, N):
        raise ValueError(f"form degree {k} out of range 1..{min(n, N)}")
    gens = []
    div = phi.target.divisor_vars
    free = phi.target.free_vars
    for l in range(0, k + 1):
        for I in combinations(div, l):
            for J in combinations(free, k - l):
                form = pullback_basis_form(phi, I, J)
                gens.extend(form.coefficients.values())
    return IdealPresentation(gens, phi.source.variables)


def fitting_vanishing_in_divisor(phi: MorphismOfPairs, k: int) -> bool:
    """Whether the vanishing locus of the degree-k log-Fitting ideal is
    contained in the source divisor."""
    F = log_fitting_ideal(phi, k)
    if not F.is_zero_ideal() and contains_one(F):
        return True
    return radical_membership(phi.source.divisor_product(), F)
