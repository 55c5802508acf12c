"""Shared fixture presentations used across the suite."""

from fractions import Fraction

import pytest

from edtorus.monogrp import MonomialGroupPresentation


def frac(n, d=1):
    return Fraction(n, d)


@pytest.fixture
def sl2_normalizer():
    """Rank-1 torus with the swap generator lifted with a half coefficient."""
    return MonomialGroupPresentation(
        p=2,
        torus_rank=1,
        root_of_unity_exponent=2,
        weights=((1,), (-1,)),
        generators=(((1, 0), (frac(0), frac(1, 2))),),
    )


@pytest.fixture
def sl3_three_cycle():
    """Preimage of a 3-cycle inside the rank-2 torus normalizer."""
    return MonomialGroupPresentation(
        p=3,
        torus_rank=2,
        root_of_unity_exponent=1,
        weights=((1, 0), (0, 1), (-1, -1)),
        generators=(((1, 2, 0), (frac(0), frac(0), frac(0))),),
    )


@pytest.fixture
def weight_two_line():
    """One line of weight 2 on a rank-1 torus; the squaring kernel is mu_2."""
    return MonomialGroupPresentation(
        p=2,
        torus_rank=1,
        root_of_unity_exponent=1,
        weights=((2,),),
        generators=(),
    )


@pytest.fixture
def so4_presentation():
    from edtorus.pipeline import so_case

    return so_case(1).presentation


@pytest.fixture
def negation_lattice():
    from edtorus.symrank import FLattice

    return FLattice(rank=1, matrices=(((1,),), ((-1,),)))
