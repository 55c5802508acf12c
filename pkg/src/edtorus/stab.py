"""Generic stabilizers of monomial representations.

For a point with all coordinates nonzero and multiplicatively independent,
the stabilizer splits into a torus part (the kernel of the torus action) and
a set of component classes that can be corrected back onto the point by a
torus element.  The class test is the cycle criterion implemented here:

    a class (sigma, c) fixes a generic point up to the torus iff for every
    basis vector u of the saturated kernel K of the transposed weight matrix,
    (i) u is constant on every cycle of sigma, and (ii) <u, c> = 0 in Q/Z.

Multiplying the fixed-point equations around a cycle of sigma cancels the
generic coordinates; what remains is exactly the solvability of the torus
correction: condition (i) says the obstruction character is torus-trivial on
the generic part, condition (ii) kills the root-of-unity residue.  The
finite-field module provides the independent brute-force check.
"""

from __future__ import annotations

from typing import NamedTuple

from . import zlat
from .monogrp import (
    ComponentGroup,
    MonomialGroupPresentation,
    MonomialRep,
    check_rep_compatible,
    component_group,
    natural_rep,
    perm_cycles,
)
from .zlat import FiniteAbelianStructure, mod1


class StabError(Exception):
    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)


class StabilizerReport(NamedTuple):
    torus_part: FiniteAbelianStructure
    component_image: tuple[int, ...]  # sorted class indices forming pi(S)
    p_rank: int | None  # None when the representation is not p-faithful
    p_faithful: bool
    p_generically_free: bool

    @property
    def stabilizer_order(self) -> int:
        return self.torus_part.torsion_order * len(self.component_image)

    def require_p_rank(self) -> int:
        if self.p_rank is None:
            raise StabError(
                "NOT_P_FAITHFUL_FOR_RANK",
                "p-rank of the stabilizer is only defined for p-faithful representations",
            )
        return self.p_rank


class Witnessed(NamedTuple):
    ok: bool
    witness: str | None


def _kernel_constraints(R: MonomialRep) -> list[tuple[int, ...]]:
    """Basis of the saturated kernel of the transposed weight matrix."""
    return zlat.integer_kernel_basis(R.weight_matrix().transpose())


def _class_passes(perm, coeff, kernel_basis) -> bool:
    cycles = perm_cycles(perm)
    for u in kernel_basis:
        for cyc in cycles:
            first = u[cyc[0]]
            if any(u[i] != first for i in cyc[1:]):
                return False
        if mod1(sum(ui * ci for ui, ci in zip(u, coeff))) != 0:
            return False
    return True


def _torus_part(R: MonomialRep) -> FiniteAbelianStructure:
    structure = zlat.cokernel_structure(R.weight_matrix().transpose())
    if structure.free_rank > 0:
        raise StabError(
            "RANK_DEFICIENT_WEIGHTS",
            "weights span a proper sublattice: the torus stabilizer is infinite",
        )
    return structure


def _kernel_classes(group: ComponentGroup, R: MonomialRep) -> list[int]:
    """Nontrivial classes acting trivially on R (p-power kernel witnesses)."""
    actions = group.rep_actions(R)
    W = R.weight_matrix()
    ident = tuple(range(R.dim))
    found = []
    for idx, (perm, coeff) in enumerate(actions):
        if idx == group.identity or perm != ident:
            continue
        if zlat.torsion_image_membership([mod1(-c) for c in coeff], W):
            found.append(idx)
    return found


def is_p_faithful(P: MonomialGroupPresentation, R: MonomialRep | None = None) -> Witnessed:
    """Is the kernel of the representation finite of order prime to p?"""
    if R is None:
        R = natural_rep(P)
    check_rep_compatible(P, R)
    dec = zlat.smith_normal_form(R.weight_matrix().transpose())
    if dec.rank < P.torus_rank:
        return Witnessed(False, "torus kernel is infinite (weights span a proper subspace)")
    index = 1
    for d in dec.invariant_factors:
        if d != 0:
            index *= d
    if index % P.p == 0:
        return Witnessed(False, f"mu_{P.p} inside the torus acts trivially (lattice index {index})")
    group = component_group(P)
    kernel = _kernel_classes(group, R)
    if kernel:
        return Witnessed(False, f"component class {kernel[0]} acts trivially")
    return Witnessed(True, None)


def generic_stabilizer(P: MonomialGroupPresentation, R: MonomialRep | None = None) -> StabilizerReport:
    """Stabilizer of a point in general position, reported exactly."""
    if R is None:
        R = natural_rep(P)
    check_rep_compatible(P, R)
    torus_part = _torus_part(R)
    group = component_group(P)
    kernel_basis = _kernel_constraints(R)
    actions = group.rep_actions(R)
    image = tuple(
        sorted(
            idx
            for idx, (perm, coeff) in enumerate(actions)
            if _class_passes(perm, coeff, kernel_basis)
        )
    )
    assert group.is_subgroup(image), "cycle criterion must cut out a subgroup"
    faithful = is_p_faithful(P, R)
    prank = group.elementary_rank(image, P.p) if faithful.ok else None
    free = faithful.ok and len(image) == 1
    return StabilizerReport(
        torus_part=torus_part,
        component_image=image,
        p_rank=prank,
        p_faithful=faithful.ok,
        p_generically_free=free,
    )


def is_p_generically_free(P: MonomialGroupPresentation, R: MonomialRep | None = None) -> Witnessed:
    """Is the stabilizer of a generic point finite of order prime to p?"""
    if R is None:
        R = natural_rep(P)
    faithful = is_p_faithful(P, R)
    if not faithful.ok:
        return Witnessed(False, faithful.witness)
    report = generic_stabilizer(P, R)
    if len(report.component_image) > 1:
        group = component_group(P)
        nontrivial = next(i for i in report.component_image if i != group.identity)
        return Witnessed(False, f"component class {nontrivial} fixes a generic point")
    return Witnessed(True, None)
