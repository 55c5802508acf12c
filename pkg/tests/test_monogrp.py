"""Presentation validation, component groups, lattice actions, character blocks."""

from fractions import Fraction

import numpy as np
import pytest

from edtorus.monogrp import (
    MonomialGroupPresentation,
    PresentationError,
    append_character_block,
    character_lattice_action,
    component_group,
    monomial_mul,
    natural_rep,
    perm_compose,
    perm_inverse,
    validate,
)
from edtorus.pipeline import sln_case, so_case


def frac(n, d=1):
    return Fraction(n, d)


class TestConventions:
    def test_action_convention(self, sl2_normalizer):
        # (sigma, c) sends coordinate v_{sigma^-1(i)} to position i scaled by c_i:
        # the swap with coefficient (0, 1/2) squares to the coefficient vector
        # (1/2, 1/2), which is the torus point -1 acting through weights (1, -1)
        g = sl2_normalizer.generators[0]
        sq = monomial_mul(g, g)
        assert sq[0] == (0, 1)
        assert sq[1] == (frac(1, 2), frac(1, 2))

    def test_compose_inverse(self):
        p1, p2 = (1, 2, 0), (0, 2, 1)
        comp = perm_compose(p1, p2)
        assert comp == tuple(p1[p2[i]] for i in range(3))
        assert perm_compose(p1, perm_inverse(p1)) == (0, 1, 2)


class TestValidate:
    def test_sl2_normalizer(self, sl2_normalizer):
        report = validate(sl2_normalizer)
        assert report.ok
        assert report.component_order == 2
        assert [m.to_rows() for m in report.induced_matrices] == [[[-1]]]
        assert not report.split_witness  # the literal swap closes to order 4
        group = component_group(sl2_normalizer)
        g = group.class_of(sl2_normalizer.generators[0])
        assert group.table[g][g] == group.identity

    def test_no_induced_action(self):
        P = MonomialGroupPresentation(
            p=2,
            torus_rank=1,
            root_of_unity_exponent=1,
            weights=((1,), (2,)),
            generators=(((1, 0), (frac(0), frac(0))),),
        )
        report = validate(P)
        assert not report.ok
        assert report.error == "NO_INDUCED_ACTION"

    def test_not_p_group(self):
        P = MonomialGroupPresentation(
            p=2,
            torus_rank=1,
            root_of_unity_exponent=1,
            weights=((1,), (1,), (1,)),
            generators=(((1, 2, 0), (frac(0), frac(0), frac(0))),),
        )
        report = validate(P)
        assert not report.ok
        assert report.error == "NOT_P_GROUP"

    def test_rank_deficient(self):
        P = MonomialGroupPresentation(
            p=2,
            torus_rank=2,
            root_of_unity_exponent=1,
            weights=((1, 0), (-1, 0)),
            generators=(),
        )
        report = validate(P)
        assert not report.ok
        assert report.error == "RANK_DEFICIENT"

    def test_split_witness_for_permutation_lifts(self, sl3_three_cycle):
        assert validate(sl3_three_cycle).split_witness

    def test_limit_exceeded(self, sl3_three_cycle):
        report = validate(sl3_three_cycle, cap=2)
        assert not report.ok
        assert report.error == "LIMIT_EXCEEDED"

    def test_coefficient_denominator_must_divide_e(self):
        with pytest.raises(PresentationError):
            MonomialGroupPresentation(
                p=2,
                torus_rank=1,
                root_of_unity_exponent=2,
                weights=((1,), (-1,)),
                generators=(((1, 0), (frac(0), frac(1, 3))),),
            )


class TestComponentGroup:
    def test_sl3_order(self, sl3_three_cycle):
        assert component_group(sl3_three_cycle).order == 3

    def test_no_generators(self, weight_two_line):
        assert component_group(weight_two_line).order == 1

    def test_so4_order(self, so4_presentation):
        group = component_group(so4_presentation)
        assert group.order == 4
        assert group.is_abelian()
        assert sorted(group.orders) == [1, 2, 2, 2]

    @pytest.mark.parametrize(
        "maker",
        [
            lambda: sln_case(3, 3).presentation,
            lambda: sln_case(8, 2).presentation,
            lambda: so_case(2).presentation,
            lambda: sln_case(10, 2).presentation,  # order 256
        ],
    )
    def test_associativity_and_p_power_orders(self, maker):
        P = maker()
        group = component_group(P)
        table = np.array(group.table, dtype=np.int32)
        n = len(table)
        left = table[table[:, :, None], np.arange(n)[None, None, :]]
        right = table[np.arange(n)[:, None, None], table[None, :, :]]
        assert np.array_equal(left, right)
        for o in group.orders:
            while o % P.p == 0:
                o //= P.p
            assert o == 1

    def test_homomorphism_to_lattice_matrices(self, sl3_three_cycle):
        report = validate(sl3_three_cycle)
        group = component_group(sl3_three_cycle)
        A = report.induced_matrices[0]
        # the induced map factors through the component group: A^3 = identity
        assert (A @ A @ A).is_identity()
        assert group.orders[group.class_of(sl3_three_cycle.generators[0])] == 3

    def test_representative_invariance(self):
        base = sln_case(6, 3).presentation
        # feed the generators in the opposite order and pre-multiply one
        # coefficient by a torsion-image vector (here: the zero class shift
        # coming from a torus point of order 3 through the weights)
        shifted = []
        for perm, coeff in reversed(base.generators):
            shifted.append((perm, coeff))
        P2 = MonomialGroupPresentation(
            p=base.p,
            torus_rank=base.torus_rank,
            root_of_unity_exponent=3,
            weights=base.weights,
            generators=tuple(shifted),
        )
        g1 = component_group(base)
        g2 = component_group(P2)
        assert g1.order == g2.order
        assert sorted(g1.orders) == sorted(g2.orders)

    def test_torsion_shifted_representative_same_class(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        perm, coeff = sl3_three_cycle.generators[0]
        # a torus point of exact order 3 acts through the weights as the
        # coefficient vector (1/3, 1/3, 1/3) scaled by each line weight
        shift = (frac(1, 3), frac(0), frac(2, 3))  # weights (1,0),(0,1),(-1,-1) at s=(1/3, 0)
        shifted_coeff = tuple((a + b) % 1 for a, b in zip(coeff, shift))
        assert group.class_of((perm, shifted_coeff)) == group.class_of((perm, coeff))

    def test_class_equality_matches_torsion_membership(self, sl2_normalizer):
        from itertools import product as iproduct

        from edtorus.zlat import torsion_image_membership

        group = component_group(sl2_normalizer)
        W = sl2_normalizer.weight_matrix()
        perm, base = sl2_normalizer.generators[0]
        cls = group.class_of((perm, base))
        for a, b in iproduct(range(2), repeat=2):
            shift = (frac(a, 2), frac(b, 2))
            coeff = tuple((x + y) % 1 for x, y in zip(base, shift))
            if torsion_image_membership(shift, W):
                assert group.class_of((perm, coeff)) == cls
            else:
                # a coefficient outside the torsion image is a different
                # extension element, not a member of the presented group
                with pytest.raises(ValueError):
                    group.class_of((perm, coeff))


class TestCharacterLattice:
    def test_sl3_lattice(self, sl3_three_cycle):
        L = character_lattice_action(sl3_three_cycle)
        assert L.rank == 2
        assert L.order == 3

    def test_so4_lattice(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        assert L.rank == 2
        assert L.order == 4

    def test_trivial_generators(self, weight_two_line):
        L = character_lattice_action(weight_two_line)
        assert L.order == 1


class TestCharacterBlocks:
    def test_trivial_character(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        chi = tuple(frac(0) for _ in range(group.order))
        R = append_character_block(natural_rep(sl3_three_cycle), chi)
        assert R.dim == 4
        assert R.blocks[-1].weights == ((0, 0),)
        assert R.blocks[-1].gen_coeffs == ((frac(0),),)

    def test_order_three_character(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        g = group.class_of(sl3_three_cycle.generators[0])
        chi = [frac(0)] * group.order
        chi[g] = frac(1, 3)
        chi[group.table[g][g]] = frac(2, 3)
        R = append_character_block(natural_rep(sl3_three_cycle), tuple(chi))
        assert R.blocks[-1].gen_coeffs == ((frac(1, 3),),)

    def test_not_a_character(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        bogus = [frac(0)] * group.order
        bogus[1] = frac(1, 2)  # 1/2 is not additive on a group of order 3
        with pytest.raises(PresentationError) as err:
            append_character_block(natural_rep(sl3_three_cycle), tuple(bogus))
        assert err.value.code == "NOT_A_CHARACTER"

    def test_characters_enumeration(self, so4_presentation):
        group = component_group(so4_presentation)
        chars = group.characters()
        assert len(chars) == 4
        for chi in chars:
            for i in range(4):
                for j in range(4):
                    assert (chi[i] + chi[j]) % 1 == chi[group.table[i][j]]


class TestAbelianDecomposition:
    @pytest.mark.parametrize("maker,expected", [
        (lambda: sln_case(3, 3).presentation, (3,)),
        (lambda: sln_case(4, 2).presentation, (2, 2)),
        (lambda: so_case(2).presentation, (2, 2, 2, 2)),
    ])
    def test_invariant_factors(self, maker, expected):
        group = component_group(maker())
        _, orders, coords = group.abelian_decomposition()
        assert tuple(sorted(orders)) == tuple(sorted(expected))
        assert len(coords) == group.order
