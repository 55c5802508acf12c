"""Generic stabilizer engine against hand computations and the field oracle."""

from fractions import Fraction

import pytest

from edtorus.monogrp import (
    MonomialGroupPresentation,
    append_character_block,
    component_group,
    natural_rep,
)
from edtorus.oracle import ff_stabilizer
from edtorus.pipeline import sln_case, so_case
from edtorus.stab import (
    StabError,
    generic_stabilizer,
    is_p_faithful,
    is_p_generically_free,
)


def frac(n, d=1):
    return Fraction(n, d)


class TestGenericStabilizer:
    def test_sl2_normalizer_free(self, sl2_normalizer):
        report = generic_stabilizer(sl2_normalizer)
        assert report.torus_part.is_trivial
        assert len(report.component_image) == 1
        assert report.p_generically_free
        assert report.p_rank == 0

    def test_sl3_three_cycle(self, sl3_three_cycle):
        report = generic_stabilizer(sl3_three_cycle)
        assert report.torus_part.is_trivial
        group = component_group(sl3_three_cycle)
        assert report.component_image == tuple(range(group.order))  # whole Z/3
        assert report.p_rank == 1
        assert not report.p_generically_free

    def test_weight_two_line(self, weight_two_line):
        report = generic_stabilizer(weight_two_line)
        assert report.torus_part.invariant_factors == (2,)
        assert len(report.component_image) == 1
        assert report.p_rank is None  # not 2-faithful
        with pytest.raises(StabError) as err:
            report.require_p_rank()
        assert err.value.code == "NOT_P_FAITHFUL_FOR_RANK"

    def test_rank_deficient_rep_refused(self, sl3_three_cycle):
        from edtorus.monogrp import MonomialRep, RepBlock

        zero_block = RepBlock(
            weights=((0, 0),),
            gen_perms=((0,),),
            gen_coeffs=((Fraction(0),),),
        )
        rep = MonomialRep(presentation=sl3_three_cycle, blocks=(zero_block,))
        with pytest.raises(StabError) as err:
            generic_stabilizer(sl3_three_cycle, rep)
        assert err.value.code == "RANK_DEFICIENT_WEIGHTS"

    def test_so4_paired_signs_only(self, so4_presentation):
        # of the four classes only the identity and the simultaneous x/y swap
        # fix a generic point; the plain transposition needs x1 y1 = x2 y2.
        report = generic_stabilizer(so4_presentation)
        assert report.torus_part.is_trivial
        assert len(report.component_image) == 2
        assert report.p_rank == 1
        group = component_group(so4_presentation)
        sign_class = group.class_of(so4_presentation.generators[0])
        assert report.component_image == tuple(sorted([group.identity, sign_class]))
        # independent arbiter: exhaustive stabilizer enumeration over two fields
        for q in (5, 13):
            ff = ff_stabilizer(so4_presentation, q=q, trials=30, seed=1)
            assert ff.min_order == report.stabilizer_order == 2

    def test_so8_rank_two(self):
        P = so_case(2).presentation
        report = generic_stabilizer(P)
        assert len(report.component_image) == 4
        assert report.p_rank == 2
        ff = ff_stabilizer(P, trials=30, seed=0)
        assert ff.min_order == 4

    def test_subgroup_and_determinism(self):
        P = sln_case(6, 3).presentation
        group = component_group(P)
        first = generic_stabilizer(P)
        second = generic_stabilizer(P)
        assert first == second
        assert group.is_subgroup(first.component_image)
        # reversing the generator list must give the same invariant data
        P2 = MonomialGroupPresentation(
            p=P.p,
            torus_rank=P.torus_rank,
            root_of_unity_exponent=P.root_of_unity_exponent,
            weights=P.weights,
            generators=tuple(reversed(P.generators)),
        )
        other = generic_stabilizer(P2)
        assert len(other.component_image) == len(first.component_image)
        assert other.torus_part == first.torus_part
        assert other.p_rank == first.p_rank

    def test_coefficient_representative_independence(self, sl3_three_cycle):
        # shift the generator coefficient by a torus torsion value: same group,
        # same classes, identical stabilizer report
        perm, coeff = sl3_three_cycle.generators[0]
        shift = (Fraction(1, 3), Fraction(0), Fraction(2, 3))
        shifted = tuple((a + b) % 1 for a, b in zip(coeff, shift))
        P2 = MonomialGroupPresentation(
            p=3,
            torus_rank=2,
            root_of_unity_exponent=3,
            weights=sl3_three_cycle.weights,
            generators=((perm, shifted),),
        )
        assert generic_stabilizer(P2).component_image == generic_stabilizer(sl3_three_cycle).component_image


class TestPFaithful:
    def test_weight_two_parity(self, weight_two_line):
        ok, witness = is_p_faithful(weight_two_line)
        assert not ok and "mu_2" in witness
        P3 = MonomialGroupPresentation(
            p=3,
            torus_rank=1,
            root_of_unity_exponent=1,
            weights=((2,),),
            generators=(),
        )
        assert is_p_faithful(P3).ok

    def test_sl3_natural(self, sl3_three_cycle):
        assert is_p_faithful(sl3_three_cycle).ok

    def test_kernel_class_detected(self, sl3_three_cycle):
        # a block seeing only the trivial character of the component group
        # leaves the whole 3-cycle class acting trivially on nothing new;
        # dropping the natural block makes the torus action rank deficient
        group = component_group(sl3_three_cycle)
        chi = tuple(frac(0) for _ in range(group.order))
        rep = append_character_block(natural_rep(sl3_three_cycle), chi)
        assert is_p_faithful(sl3_three_cycle, rep).ok  # natural block still faithful


class TestPGenericallyFree:
    def test_sl3_natural_not_free(self, sl3_three_cycle):
        ok, witness = is_p_generically_free(sl3_three_cycle)
        assert not ok
        assert "class" in witness

    def test_sl3_with_faithful_character_block(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        g = group.class_of(sl3_three_cycle.generators[0])
        chi = [frac(0)] * group.order
        chi[g] = frac(1, 3)
        chi[group.table[g][g]] = frac(2, 3)
        rep = append_character_block(natural_rep(sl3_three_cycle), tuple(chi))
        assert is_p_generically_free(sl3_three_cycle, rep).ok

    def test_sl2_normalizer_free_with_oracle(self, sl2_normalizer):
        assert is_p_generically_free(sl2_normalizer).ok
        ff = ff_stabilizer(sl2_normalizer, q=5, trials=50, seed=0)
        assert ff.min_order == 1


class TestMonotonicity:
    def test_appending_blocks_shrinks_image(self, sl3_three_cycle):
        group = component_group(sl3_three_cycle)
        base = generic_stabilizer(sl3_three_cycle)
        trivial_chi = tuple(frac(0) for _ in range(group.order))
        rep1 = append_character_block(natural_rep(sl3_three_cycle), trivial_chi)
        same = generic_stabilizer(sl3_three_cycle, rep1)
        assert set(same.component_image) <= set(base.component_image)
        assert same.component_image == base.component_image  # trivial character: no shrink
        g = group.class_of(sl3_three_cycle.generators[0])
        chi = [frac(0)] * group.order
        chi[g] = frac(1, 3)
        chi[group.table[g][g]] = frac(2, 3)
        rep2 = append_character_block(natural_rep(sl3_three_cycle), tuple(chi))
        smaller = generic_stabilizer(sl3_three_cycle, rep2)
        assert set(smaller.component_image) < set(base.component_image)

    def test_order_agreement_with_oracle(self, sl3_three_cycle):
        report = generic_stabilizer(sl3_three_cycle)
        ff = ff_stabilizer(sl3_three_cycle, q=7, trials=50, seed=0)
        assert ff.min_order == report.stabilizer_order == 3
