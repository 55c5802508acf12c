"""Brute-force oracles: determinism, modulus handling, and frozen counts."""

import pytest

from edtorus.monogrp import character_lattice_action, natural_rep
from edtorus.oracle import (
    OracleError,
    choose_modulus,
    ff_stabilizer,
    required_torsion,
    sylow_abelian_bound_check,
    symrank_bruteforce,
)
from edtorus.pipeline import build_generically_free_extension


class TestFFStabilizer:
    def test_sl3_over_f7(self, sl3_three_cycle):
        report = ff_stabilizer(sl3_three_cycle, q=7, trials=50, seed=0)
        assert report.min_order == 3
        assert report.min_torus_order == 1
        assert len(report.min_component_image) == 3

    def test_sl2_normalizer_over_f5(self, sl2_normalizer):
        report = ff_stabilizer(sl2_normalizer, q=5, trials=50, seed=0)
        assert report.min_order == 1
        assert report.min_component_image == (0,)

    def test_weight_two_line_over_f5(self, weight_two_line):
        # the squaring kernel {1, -1} inside F_5* has order two
        report = ff_stabilizer(weight_two_line, q=5, trials=10, seed=0)
        assert report.min_order == 2
        assert report.min_torus_order == 2

    def test_deterministic_given_seed(self, sl3_three_cycle):
        a = ff_stabilizer(sl3_three_cycle, q=7, trials=20, seed=11)
        b = ff_stabilizer(sl3_three_cycle, q=7, trials=20, seed=11)
        assert a == b

    def test_bad_modulus(self, sl3_three_cycle):
        ext = build_generically_free_extension(sl3_three_cycle, natural_rep(sl3_three_cycle))
        # the appended character has denominator 3, so q = 1 (mod 3) is forced
        assert required_torsion(sl3_three_cycle, ext.rep) == 3
        with pytest.raises(OracleError) as err:
            ff_stabilizer(sl3_three_cycle, ext.rep, q=5, trials=5)
        assert err.value.code == "BAD_MODULUS"
        assert choose_modulus(sl3_three_cycle, ext.rep) == 7

    def test_budget(self, sl3_three_cycle):
        with pytest.raises(OracleError) as err:
            ff_stabilizer(sl3_three_cycle, q=7, trials=5, budget=10)
        assert err.value.code == "BUDGET_EXCEEDED"

    def test_nonprime_q_rejected(self, sl3_three_cycle):
        with pytest.raises(OracleError):
            ff_stabilizer(sl3_three_cycle, q=9, trials=5)


class TestSymrankBruteforce:
    def test_negation(self, negation_lattice):
        assert symrank_bruteforce(negation_lattice, 2, 3) == 2

    def test_trivial_rank_two(self):
        from edtorus.symrank import FLattice

        L = FLattice(rank=2, matrices=(((1, 0), (0, 1)),))
        assert symrank_bruteforce(L, 5, 1) == 2

    def test_so4_lattice(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        assert symrank_bruteforce(L, 2, 2) == 4


class TestSylowAbelianBound:
    def test_4_2_with_witness(self):
        report = sylow_abelian_bound_check(4, 2)
        assert report.max_order == 4 == 2 ** (4 // 2)
        assert report.passed
        assert len(report.witness) == 4

    def test_6_2(self):
        report = sylow_abelian_bound_check(6, 2)
        assert report.max_order == 8
        assert report.passed

    def test_3_3(self):
        report = sylow_abelian_bound_check(3, 3)
        assert report.max_order == 3
        assert report.passed

    def test_witness_is_abelian_subgroup(self):
        report = sylow_abelian_bound_check(6, 2)
        elems = set(report.witness)

        def mul(a, b):
            return tuple(a[x] for x in b)

        for a in elems:
            for b in elems:
                assert mul(a, b) in elems
                assert mul(a, b) == mul(b, a)

    def test_budget_cap(self):
        with pytest.raises(OracleError):
            sylow_abelian_bound_check(10, 2)
