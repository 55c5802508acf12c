"""Symmetric p-rank search, lower bounds, and minimal faithful dimension."""

import random

import pytest

from edtorus.monogrp import character_lattice_action, natural_rep
from edtorus.oracle import symrank_bruteforce
from edtorus.pipeline import sln_case
from edtorus.symrank import (
    EtaError,
    FLattice,
    eta_bounds,
    perm_lower_bound,
    symrank,
)


def trivial_lattice(d):
    ident = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    return FLattice(rank=d, matrices=(ident,))


def closure_lattice(d, gens):
    ident = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    mats = {ident}
    frontier = [ident]

    def mul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)) for i in range(d)
        )

    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = mul(a, g)
                if c not in mats:
                    mats.add(c)
                    nxt.append(c)
        frontier = nxt
    return FLattice(rank=d, matrices=tuple(sorted(mats)))


class TestSymrankValues:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_trivial_group(self, d):
        res = symrank(trivial_lattice(d), 2, B=1)
        assert res.value == d
        assert res.status == "EXACT"

    def test_negation(self, negation_lattice):
        res = symrank(negation_lattice, 2, B=3)
        assert res.value == 2
        assert res.status == "EXACT"
        assert symrank_bruteforce(negation_lattice, 2, 3) == 2

    def test_sl3_lattice(self, sl3_three_cycle):
        L = character_lattice_action(sl3_three_cycle)
        res = symrank(L, 3)
        assert res.value == 3 and res.status == "EXACT"

    def test_so4_lattice(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        res = symrank(L, 2)
        assert res.value == 4 and res.status == "EXACT"
        assert symrank_bruteforce(L, 2, 2) == 4

    def test_sl4_lattice(self):
        L = character_lattice_action(sln_case(4, 2).presentation)
        res = symrank(L, 2)
        assert res.value == 4 and res.status == "EXACT"

    def test_witness_properties(self, so4_presentation):
        from edtorus.zlat import sublattice_p_index

        L = character_lattice_action(so4_presentation)
        res = symrank(L, 2)
        assert len(res.witness) == res.value
        vecs = set(res.witness)
        for v in res.witness:
            assert set(L.orbit(v)) <= vecs
        assert sublattice_p_index(res.witness, L.rank, 2) == 0

    def test_upper_only_status(self):
        # plus/minus the identity on Z^2: orbits are +/- pairs and two of them
        # can span with odd index, so the minimum is 4 while the certified
        # lower bound is only max(rank, p log_p 2) = 2
        neg = closure_lattice(2, [((-1, 0), (0, -1))])
        res = symrank(neg, 2, B=2)
        assert res.value == 4
        assert res.status == "UPPER_ONLY"
        assert res.lower_bound_used == 2


class TestBudgets:
    def test_node_budget(self, so4_presentation):
        from edtorus.symrank import SearchBudgetExceeded

        L = character_lattice_action(so4_presentation)
        with pytest.raises(SearchBudgetExceeded):
            symrank(L, 2, node_budget=1)

    def test_box_budget(self, so4_presentation):
        from edtorus.symrank import SearchBudgetExceeded

        L = character_lattice_action(so4_presentation)
        with pytest.raises(SearchBudgetExceeded):
            symrank(L, 2, B=3, box_budget=10)


class TestPermLowerBound:
    def test_sl3(self, sl3_three_cycle):
        L = character_lattice_action(sl3_three_cycle)
        bound = perm_lower_bound(L, 3)
        assert bound.hypotheses_ok and bound.value == 3

    def test_so4(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        bound = perm_lower_bound(L, 2)
        assert bound.hypotheses_ok and bound.value == 4

    def test_trivial_rank_bound(self):
        bound = perm_lower_bound(trivial_lattice(3), 5)
        assert bound.hypotheses_ok and bound.value == 3

    def test_nonabelian_flagged(self):
        L = character_lattice_action(sln_case(6, 2).presentation)
        bound = perm_lower_bound(L, 2)
        assert not bound.hypotheses_ok
        assert bound.value == L.rank

    def test_wrong_prime_flagged(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        bound = perm_lower_bound(L, 3)
        assert not bound.hypotheses_ok


class TestMonotonicity:
    def test_nested_groups_sl4(self):
        # trivial < single double transposition < Klein subgroup.  For the
        # middle group (I + A) has rank-one image, so a fixed vector plus one
        # 2-orbit never spans: the minimum is already 4 (bruteforce agrees).
        single = closure_lattice(3, [((0, 1, -1), (1, 0, -1), (0, 0, -1))])
        klein = character_lattice_action(sln_case(4, 2).presentation)
        values = [
            symrank(trivial_lattice(3), 2).value,
            symrank(single, 2).value,
            symrank(klein, 2).value,
        ]
        assert values == [3, 4, 4]
        assert symrank_bruteforce(single, 2, 2) == 4
        assert values == sorted(values)


CATALOG = [
    ("id1", 1, []),
    ("neg1", 1, [((-1,),)]),
    ("id2", 2, []),
    ("neg2", 2, [((-1, 0), (0, -1))]),
    ("swap", 2, [((0, 1), (1, 0))]),
    ("rot4", 2, [((0, -1), (1, 0))]),
    ("diag", 2, [((1, 0), (0, -1))]),
    ("klein", 2, [((0, 1), (1, 0)), ((-1, 0), (0, -1))]),
]


class TestAgainstBruteforce:
    def test_twenty_seeded_instances(self):
        rng = random.Random(20240809)
        conjugators = [
            ((1, 0), (0, 1)),
            ((1, 1), (0, 1)),
            ((1, 0), (1, 1)),
            ((1, -1), (0, 1)),
        ]
        checked = 0
        for seed in range(20):
            name, d, gens = CATALOG[rng.randrange(len(CATALOG))]
            if d == 2:
                U = conjugators[rng.randrange(len(conjugators))]
                Uinv = ((U[1][1], -U[0][1]), (-U[1][0], U[0][0]))  # det 1 inverses

                def conj(a):
                    def mul(x, y):
                        return tuple(
                            tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2))
                            for i in range(2)
                        )

                    return mul(mul(U, a), Uinv)

                gens = [conj(g) for g in gens]
            L = closure_lattice(d, gens)
            got = symrank(L, 2, B=3).value
            expect = symrank_bruteforce(L, 2, 3)
            assert got == expect, f"seed {seed} ({name}): {got} != {expect}"
            checked += 1
        assert checked == 20


class TestEta:
    def test_sl3_exact(self, sl3_three_cycle):
        res = eta_bounds(sl3_three_cycle, natural_rep(sl3_three_cycle))
        assert res.exact == 3
        assert res.split_witness

    def test_so4_exact(self, so4_presentation):
        res = eta_bounds(so4_presentation, natural_rep(so4_presentation))
        assert res.exact == 4

    def test_interval_without_v(self, sl2_normalizer):
        res = eta_bounds(sl2_normalizer, None)
        assert res.exact is None
        assert res.lower == 2
        assert res.upper is None

    def test_v_not_p_faithful(self, weight_two_line):
        with pytest.raises(EtaError) as err:
            eta_bounds(weight_two_line, natural_rep(weight_two_line))
        assert err.value.code == "V_NOT_P_FAITHFUL"

    def test_value_never_below_perm_bound(self, so4_presentation):
        L = character_lattice_action(so4_presentation)
        res = symrank(L, 2)
        bound = perm_lower_bound(L, 2)
        assert bound.hypotheses_ok
        assert res.value >= bound.value
