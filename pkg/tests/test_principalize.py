import random

import pytest

from logmono.chart import ChartedPair, MorphismOfPairs
from logmono.classify import top_fitting_ideal
from logmono.ideal import is_principal_monomial_at
from logmono.principalize import (
    MonomialIdeal,
    NonMonomialInputError,
    choose_center,
    goward_principalize,
    monomial_ideal_from_presentation,
    monomialize_monomial_morphism,
    termination_measure,
    transformed_morphism_at_leaf,
)

from helpers import P, origin
from test_fitting import surface_case3


UV = ChartedPair(("u", "v"), ("u", "v"))


class TestMonomialIdeal:
    def test_antichain_reduction(self):
        I = MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (3, 1), (2, 0)])
        assert I.generators == ((2, 0),)
        assert I.is_principal()

    def test_incomparable_pairs(self):
        I = MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)])
        assert I.incomparable_pairs() == [((0, 3), (2, 0))]

    def test_transform(self):
        I = MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)])
        J = I.transform("u", ["v"])
        assert J.generators == ((2, 0),)
        K = I.transform("v", ["u"])
        assert K.generators == ((0, 3), (2, 2))

    def test_extraction_from_presentation(self):
        amb = ("u", "v")
        from logmono.ideal import IdealPresentation

        pres = IdealPresentation([P("2*u^2", amb), P("3*v^3", amb)], amb)
        I = monomial_ideal_from_presentation(pres, UV)
        assert I.generators == ((0, 3), (2, 0))
        with pytest.raises(NonMonomialInputError):
            monomial_ideal_from_presentation(
                IdealPresentation([P("u + v", amb)], amb), UV
            )


class TestCenterChoice:
    def test_center_targets_extremal_coordinates(self):
        I = MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)])
        assert choose_center(I, ("u", "v")) == ("v", "u")

    def test_non_divisor_support_rejected(self):
        I = MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)])
        with pytest.raises(NonMonomialInputError):
            choose_center(I, ("u",))

    def test_measure_is_well_founded_base_case(self):
        assert termination_measure(
            MonomialIdeal.from_exponents(("u",), [(2,)])
        ) == (0,)


class TestPrincipalize:
    def test_already_principal_gives_empty_tree(self):
        tree = goward_principalize(
            MonomialIdeal.from_exponents(("u", "v"), [(2, 0)]), UV
        )
        assert tree.depth() == 0 and tree.step_count() == 0
        cert = tree.root.certificate
        assert cert.generator_monomial.exponents == (2, 0)

    def test_two_variables_one_step(self):
        tree = goward_principalize(
            MonomialIdeal.from_exponents(("u", "v"), [(1, 0), (0, 1)]), UV
        )
        assert tree.depth() == 1
        leaves = sorted(l.payload.generators for l in tree.leaves())
        assert leaves == [((0, 1),), ((1, 0),)]

    def test_u2_v3_regression_tree(self):
        tree = goward_principalize(
            MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)]), UV
        )
        assert tree.depth() == 3
        assert [l.payload.generators for l in tree.leaves()] == [
            ((0, 3),),
            ((3, 6),),
            ((6, 2),),
            ((2, 0),),
        ]
        for leaf in tree.leaves():
            cert = leaf.certificate
            assert cert.generator_monomial.exponents == leaf.payload.generators[0]

    def test_non_divisor_generator_rejected(self):
        chart = ChartedPair(("u", "v"), ("u",))
        with pytest.raises(NonMonomialInputError):
            goward_principalize(
                MonomialIdeal.from_exponents(("u", "v"), [(2, 0), (0, 3)]), chart
            )

    def test_leaf_certificates_reverify(self):
        rng = random.Random(2)
        chart = ChartedPair(("u", "v", "w"), ("u", "v", "w"))
        for _ in range(20):
            gens = [
                tuple(rng.randint(0, 4) for _ in range(3)) for _ in range(3)
            ]
            if all(sum(g) == 0 for g in gens):
                continue
            I = MonomialIdeal.from_exponents(chart.variables, gens)
            tree = goward_principalize(I, chart)
            for leaf in tree.leaves():
                assert leaf.payload.is_principal()
                assert leaf.certificate is not None


class TestMonomializeDriver:
    def test_unit_fitting_gives_empty_tree(self):
        tree = monomialize_monomial_morphism(surface_case3())
        assert tree.depth() == 0
        cert = tree.root.certificate
        assert cert.exponent_matrix == [(1, 2, 0), (0, 3, 4)]

    def test_coordinate_projection_toy(self):
        src = ChartedPair(("u1", "u2"), ("u1", "u2"))
        tgt = ChartedPair(("x", "y"), ("x", "y"))
        amb = src.variables
        phi = MorphismOfPairs(src, tgt, {"x": P("u1", amb), "y": P("u2", amb)})
        tree = monomialize_monomial_morphism(phi)
        assert tree.depth() == 0

    def test_unit_minor_monomial_pair(self):
        src = ChartedPair(("u1", "u2"), ("u1", "u2"))
        tgt = ChartedPair(("x", "y"), ("x", "y"))
        amb = src.variables
        phi = MorphismOfPairs(
            src, tgt, {"x": P("u1*u2", amb), "y": P("u1^2*u2", amb)}
        )
        F = top_fitting_ideal(phi)
        assert F.basis()[0].is_constant()
        tree = monomialize_monomial_morphism(phi)
        assert tree.depth() == 0

    def test_non_monomial_component_rejected(self):
        src = ChartedPair(("u1", "u2", "v1"), ("u1", "u2"))
        tgt = ChartedPair(("x1", "y1"), ("x1",))
        amb = src.variables
        phi = MorphismOfPairs(
            src, tgt,
            {"x1": P("u1^2*u2^2", amb), "y1": P("u1*u2 + u1^3*u2^3*v1", amb)},
        )
        with pytest.raises(NonMonomialInputError):
            monomialize_monomial_morphism(phi)

    def test_leaf_fitting_stays_principal(self):
        src = ChartedPair(("u1", "u2", "v1"), ("u1", "u2"))
        tgt = ChartedPair(("x1", "y1"), ("x1",))
        amb = src.variables
        phi = MorphismOfPairs(
            src, tgt, {"x1": P("u1^3*u2", amb), "y1": P("u1*u2^2*v1", amb)}
        )
        tree = monomialize_monomial_morphism(phi)
        for leaf in tree.leaves():
            leaf_phi = transformed_morphism_at_leaf(phi, leaf)
            F = top_fitting_ideal(leaf_phi)
            cert = is_principal_monomial_at(
                F, origin(leaf.chart).coordinates, leaf.chart.divisor_vars
            )
            assert cert is not None
