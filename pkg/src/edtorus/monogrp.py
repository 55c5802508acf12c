"""Monomial group presentations and their component groups.

A presentation encodes an extension of a finite p-group by a split torus of
rank d: the torus acts on a list of m lines through integer weight vectors,
and finitely many monomial generators act by permuting the lines and scaling
them by roots of unity (recorded as fractions modulo 1).  Semantics are fixed
over a field containing a primitive e-th root of unity for every coefficient
denominator e in play, with characteristic prime to them.

Conventions (asserted in tests):
  * weights are column vectors in Z^d; a torus point acts on line i through
    the character of weight w_i;
  * a finite generator (sigma, c) sends coordinate v_{sigma^-1(i)} to
    position i scaled by the root of unity with exponent c_i, so that
    (g1*g2) = (sigma1 sigma2, c1 + sigma1.c2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import zlat
from .zlat import IntMatrix, mod1

Perm = tuple[int, ...]
Coeff = tuple[Fraction, ...]

DEFAULT_ELEMENT_CAP = 10**6


class PresentationError(Exception):
    """A presentation violates one of its structural invariants."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}" if detail else code)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_compose(p1: Perm, p2: Perm) -> Perm:
    """p1 after p2 (apply p2 first)."""
    return tuple(p1[x] for x in p2)


def monomial_mul(a: tuple[Perm, Coeff], b: tuple[Perm, Coeff]) -> tuple[Perm, Coeff]:
    """Product of monomial maps: (s1,c1)(s2,c2) = (s1 s2, c1 + s1.c2)."""
    p1, c1 = a
    p2, c2 = b
    inv1 = perm_inverse(p1)
    coeff = tuple(mod1(c1[i] + c2[inv1[i]]) for i in range(len(c1)))
    return perm_compose(p1, p2), coeff


def perm_cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = p[start]
        while j != start:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def perm_sign(p: Perm) -> int:
    return -1 if (len(p) - len(perm_cycles(p))) % 2 else 1


@dataclass(frozen=True)
class MonomialGroupPresentation:
    p: int
    torus_rank: int
    root_of_unity_exponent: int
    weights: tuple[tuple[int, ...], ...]
    generators: tuple[tuple[Perm, Coeff], ...]
    split_claim: bool | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise PresentationError("BAD_INPUT", f"p = {self.p} is not prime")
        if self.torus_rank < 0:
            raise PresentationError("BAD_INPUT", "negative torus rank")
        e = self.root_of_unity_exponent
        if e < 1:
            raise PresentationError("BAD_INPUT", "root_of_unity_exponent must be >= 1")
        m = len(self.weights)
        for w in self.weights:
            if len(w) != self.torus_rank:
                raise PresentationError("BAD_INPUT", "weight length must equal torus rank")
        for perm, coeff in self.generators:
            if sorted(perm) != list(range(m)):
                raise PresentationError("BAD_INPUT", "generator permutation is not a permutation of the lines")
            if len(coeff) != m:
                raise PresentationError("BAD_INPUT", "generator coefficient length mismatch")
            for c in coeff:
                if mod1(c) != c:
                    raise PresentationError("BAD_INPUT", "coefficients must be reduced modulo 1")
                if e % c.denominator != 0:
                    raise PresentationError(
                        "BAD_INPUT",
                        f"coefficient denominator {c.denominator} does not divide e = {e}",
                    )

    @property
    def num_lines(self) -> int:
        return len(self.weights)

    def weight_matrix(self) -> IntMatrix:
        """m x d matrix whose rows are the line weights."""
        return IntMatrix.from_rows([list(w) for w in self.weights])


@dataclass(frozen=True)
class RepBlock:
    """One monomial block of a representation: weights plus generator actions."""

    weights: tuple[tuple[int, ...], ...]
    gen_perms: tuple[Perm, ...]
    gen_coeffs: tuple[Coeff, ...]

    @property
    def dim(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class MonomialRep:
    presentation: MonomialGroupPresentation
    blocks: tuple[RepBlock, ...]

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    @property
    def weights(self) -> tuple[tuple[int, ...], ...]:
        out: list[tuple[int, ...]] = []
        for b in self.blocks:
            out.extend(b.weights)
        return tuple(out)

    def weight_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows([list(w) for w in self.weights])

    def generator_action(self, j: int) -> tuple[Perm, Coeff]:
        """Action of presentation generator j on all lines of the rep."""
        perm: list[int] = []
        coeff: list[Fraction] = []
        offset = 0
        for b in self.blocks:
            perm.extend(offset + x for x in b.gen_perms[j])
            coeff.extend(b.gen_coeffs[j])
            offset += b.dim
        return tuple(perm), tuple(coeff)

    def identity_action(self) -> tuple[Perm, Coeff]:
        n = self.dim
        return tuple(range(n)), tuple(Fraction(0) for _ in range(n))


def natural_rep(P: MonomialGroupPresentation) -> MonomialRep:
    """The defining representation carried by the presentation itself."""
    block = RepBlock(
        weights=P.weights,
        gen_perms=tuple(g[0] for g in P.generators),
        gen_coeffs=tuple(g[1] for g in P.generators),
    )
    return MonomialRep(presentation=P, blocks=(block,))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: str | None
    detail: str
    induced_matrices: tuple[IntMatrix, ...]
    component_order: int | None
    split_witness: bool
    diagnostics: tuple[str, ...]


class _CoeffCanon:
    """Canonical forms for coefficient vectors modulo the torus torsion image.

    Two coefficient vectors describe the same coset of the torus exactly when
    their difference lies in the image of (Q/Z)^d under the weight rows.  All
    vectors in play have denominators dividing e, so the quotient is by a
    full-rank integer lattice once scaled by e.
    """

    def __init__(self, P: MonomialGroupPresentation):
        m, d = P.num_lines, P.torus_rank
        self.e = P.root_of_unity_exponent
        self.m = m
        W = P.weight_matrix()
        dec = zlat.smith_normal_form(W)
        self.rank = dec.rank
        if m == 0:
            self.hnf = []
            return
        uinv = zlat.unimodular_inverse(dec.U)
        basis = []
        for i in range(m):
            col = uinv.column(i)
            scale = 1 if i < self.rank else self.e
            basis.append([scale * x for x in col])
        self.hnf = zlat.hermite_normal_form(basis, m)
        assert len(self.hnf) == m, "torsion-image lattice must have full rank"

    def canon(self, coeff: Coeff) -> tuple[int, ...]:
        scaled = []
        for c in coeff:
            num = c.numerator * (self.e // c.denominator)
            scaled.append(num % self.e)
        if not scaled:
            return ()
        return zlat.reduce_mod_row_lattice(scaled, self.hnf)

    def is_torsion_image(self, coeff: Coeff) -> bool:
        return all(x == 0 for x in self.canon(coeff))


@dataclass
class GroupElement:
    perm: Perm
    coeff: Coeff  # first representative found in breadth-first order
    word: tuple[int, ...]  # generator indices whose ordered product is this class


class ComponentGroup:
    """Finite quotient of the presented group by its torus, fully enumerated.

    Elements are stored in deterministic breadth-first order (lexicographic
    tie-break inside each level); element 0 is the identity.
    """

    def __init__(self, P: MonomialGroupPresentation, elements, index, canon):
        self.presentation = P
        self.elements: list[GroupElement] = elements
        self._index = index
        self._canon = canon
        self.identity = 0
        n = len(elements)
        self.table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                prod = monomial_mul(
                    (elements[i].perm, elements[i].coeff),
                    (elements[j].perm, elements[j].coeff),
                )
                self.table[i][j] = self._lookup(prod)
        self.orders = [self._order(i) for i in range(n)]
        self._rep_actions: dict[MonomialRep, list[tuple[Perm, Coeff]]] = {}

    def _lookup(self, pair: tuple[Perm, Coeff]) -> int:
        key = (pair[0], self._canon.canon(pair[1]))
        try:
            return self._index[key]
        except KeyError:
            raise ValueError("monomial pair is not an element of the presented group") from None

    def class_of(self, pair: tuple[Perm, Coeff]) -> int:
        """Class index of a literal monomial pair (perm, coefficients)."""
        return self._lookup(pair)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def _order(self, i: int) -> int:
        n = 1
        x = i
        while x != self.identity:
            x = self.table[x][i]
            n += 1
        return n

    def inverse(self, i: int) -> int:
        row = self.table[i]
        return row.index(self.identity)

    def is_abelian(self) -> bool:
        n = len(self.elements)
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i))

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse(i), -k)
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][i]
        return acc

    def subgroup_closure(self, indices) -> tuple[int, ...]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = sorted(set(indices))
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def is_subgroup(self, indices) -> bool:
        s = set(indices)
        if self.identity not in s:
            return False
        return all(self.table[i][j] in s for i in s for j in s)

    def rep_actions(self, R: MonomialRep) -> list[tuple[Perm, Coeff]]:
        """Action of each class representative on all lines of R."""
        cached = self._rep_actions.get(R)
        if cached is not None:
            return cached
        gens = [R.generator_action(j) for j in range(len(self.presentation.generators))]
        out = []
        for el in self.elements:
            act = R.identity_action()
            for j in el.word:
                act = monomial_mul(act, gens[j])
            out.append(act)
        self._rep_actions[R] = out
        return out

    # -- abelian structure ---------------------------------------------------

    def abelian_decomposition(self, indices=None):
        """Cyclic decomposition of an abelian subgroup.

        Returns (basis_indices, factor_orders, coords) where the subgroup is
        the internal direct sum of the cyclic groups generated by the basis
        elements, factor_orders is the divisibility chain of their orders, and
        coords maps each subgroup element index to its exponent tuple.
        """
        members = self.subgroup_closure(indices if indices is not None else range(len(self)))
        for i in members:
            for j in members:
                if self.table[i][j] != self.table[j][i]:
                    raise ValueError("subgroup is not abelian")
        hs = list(members)
        pos = {h: t for t, h in enumerate(hs)}
        s = len(hs)
        if s == 1:
            return (), (), {self.identity: ()}
        # exponent-vector representative per element plus relation vectors
        vec = {self.identity: tuple([0] * s)}
        queue = [self.identity]
        relations = []
        while queue:
            x = queue.pop(0)
            vx = vec[x]
            for t, h in enumerate(hs):
                y = self.table[x][h]
                cand = list(vx)
                cand[t] += 1
                if y in vec:
                    relations.append([a - b for a, b in zip(cand, vec[y])])
                else:
                    vec[y] = tuple(cand)
                    queue.append(y)
        rel_matrix = IntMatrix.from_rows(relations).transpose()  # columns are relations
        dec = zlat.smith_normal_form(rel_matrix)
        assert dec.rank == s, "relation lattice of a finite group has full rank"
        uinv = zlat.unimodular_inverse(dec.U)
        basis = []
        orders = []
        for i in range(s):
            d = dec.invariant_factors[i]
            if d == 1:
                continue
            col = uinv.column(i)
            g = self.identity
            for t, exp in enumerate(col):
                g = self.table[g][self.power(hs[t], exp % self.orders[hs[t]])]
            basis.append(g)
            orders.append(d)
        coords = {}
        for expo in itertools.product(*[range(d) for d in orders]):
            g = self.identity
            for b, k in zip(basis, expo):
                g = self.table[g][self.power(b, k)]
            coords[g] = expo
        assert len(coords) == len(members), "decomposition must enumerate the subgroup"
        return tuple(basis), tuple(orders), coords

    def characters(self):
        """All homomorphisms of an abelian group to Q/Z, as value tuples.

        Each character is a tuple chi with chi[i] the value on element i.
        Ordered lexicographically by the defining exponent tuple.
        """
        basis, orders, coords = self.abelian_decomposition()
        out = []
        for a in itertools.product(*[range(d) for d in orders]):
            values = [Fraction(0)] * len(self.elements)
            for g, expo in coords.items():
                values[g] = mod1(
                    sum(Fraction(ai * bi, di) for ai, bi, di in zip(a, expo, orders))
                    if orders
                    else Fraction(0)
                )
            out.append(tuple(values))
        return out

    def elementary_rank(self, indices, p: int) -> int:
        """Largest r with an elementary abelian p-subgroup of rank r inside."""
        members = set(indices)
        order_p = [i for i in sorted(members) if i != self.identity and self.orders[i] == p]
        best = 0

        # candidates must commute pairwise; filter progressively
        def commuting(cands: list[int], g: int) -> list[int]:
            return [h for h in cands if self.table[h][g] == self.table[g][h]]

        def dfs(span: set[int], cands: list[int], depth: int):
            nonlocal best
            best = max(best, depth)
            if depth + len(cands) <= best:
                return
            for idx, g in enumerate(cands):
                if g in span:
                    continue
                new_span = set(self.subgroup_closure(list(span) + [g]))
                dfs(new_span, commuting(cands[idx + 1 :], g), depth + 1)

        dfs({self.identity}, order_p, 0)
        return best


def _induced_matrix(P: MonomialGroupPresentation, perm: Perm) -> IntMatrix:
    """The unique A in GL_d(Z) with w_{perm(i)} = A w_i, if it exists."""
    d = P.torus_rank
    Wcols = P.weight_matrix().transpose()  # d x m, columns are weights
    dec = zlat.smith_normal_form(Wcols)
    if dec.rank < d:
        raise PresentationError("RANK_DEFICIENT", "weights span a proper subspace")
    m = P.num_lines
    target = IntMatrix.from_rows(
        [[P.weights[perm[i]][r] for i in range(m)] for r in range(d)]
    )  # d x m with columns w_{perm(i)}
    B = target @ dec.V
    c_rows = [[0] * d for _ in range(d)]
    for i in range(d):
        di = dec.D.at(i, i)
        for r in range(d):
            val = B.at(r, i)
            if val % di != 0:
                raise PresentationError(
                    "NO_INDUCED_ACTION", "no integral matrix maps the weights onto their images"
                )
            c_rows[r][i] = val // di
    for j in range(d, m):
        for r in range(d):
            if B.at(r, j) != 0:
                raise PresentationError(
                    "NO_INDUCED_ACTION", "weight images violate the defining relations"
                )
    A = IntMatrix.from_rows(c_rows) @ dec.U
    # must be an exact solution and unimodular
    for i in range(m):
        if A.apply(P.weights[i]) != tuple(P.weights[perm[i]]):
            raise PresentationError("NO_INDUCED_ACTION", "no integral matrix maps the weights onto their images")
    prod = 1
    for f in zlat.smith_normal_form(A).invariant_factors:
        prod *= f
    if prod != 1:
        raise PresentationError("NO_INDUCED_ACTION", "induced matrix is not unimodular")
    return A


def _bfs_component_group(
    P: MonomialGroupPresentation, canon: _CoeffCanon, cap: int
) -> tuple[list[GroupElement], dict]:
    m = P.num_lines
    ident = GroupElement(
        perm=tuple(range(m)), coeff=tuple(Fraction(0) for _ in range(m)), word=()
    )
    elements = [ident]
    index = {(ident.perm, canon.canon(ident.coeff)): 0}
    level = [0]
    gens = [(g[0], g[1]) for g in P.generators]
    while level:
        fresh: list[GroupElement] = []
        fresh_keys: dict = {}
        for idx in level:
            el = elements[idx]
            for j, gen in enumerate(gens):
                perm, coeff = monomial_mul((el.perm, el.coeff), gen)
                key = (perm, canon.canon(coeff))
                if key in index or key in fresh_keys:
                    continue
                fresh_keys[key] = GroupElement(perm=perm, coeff=coeff, word=el.word + (j,))
        ordered = sorted(fresh_keys.items(), key=lambda kv: kv[0])
        level = []
        for key, el in ordered:
            if len(elements) >= cap:
                raise PresentationError(
                    "LIMIT_EXCEEDED", f"component group exceeds the cap of {cap} elements"
                )
            index[key] = len(elements)
            level.append(len(elements))
            elements.append(el)
    return elements, index


def _literal_closure_size(P: MonomialGroupPresentation, cap: int) -> int | None:
    """Order of the group generated by the literal monomial pairs, or None past cap."""
    m = P.num_lines
    ident = (tuple(range(m)), tuple(Fraction(0) for _ in range(m)))
    seen = {ident}
    frontier = [ident]
    gens = list(P.generators)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = monomial_mul(x, g)
                if y not in seen:
                    if len(seen) >= cap:
                        return None
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


@lru_cache(maxsize=None)
def validate(P: MonomialGroupPresentation, cap: int = DEFAULT_ELEMENT_CAP) -> ValidationReport:
    """Certify that the presentation realizes a torus-by-p-group extension."""
    diagnostics: list[str] = []

    def failure(code: str, detail: str) -> ValidationReport:
        return ValidationReport(
            ok=False,
            error=code,
            detail=detail,
            induced_matrices=(),
            component_order=None,
            split_witness=False,
            diagnostics=tuple(diagnostics),
        )

    W = P.weight_matrix()
    if zlat.smith_normal_form(W).rank < P.torus_rank:
        return failure("RANK_DEFICIENT", "weights span rank < torus rank; the torus would act with infinite kernel")

    try:
        matrices = tuple(_induced_matrix(P, perm) for perm, _ in P.generators)
    except PresentationError as exc:
        return failure(exc.code, exc.detail)

    canon = _CoeffCanon(P)
    try:
        elements, _ = _bfs_component_group(P, canon, cap)
    except PresentationError as exc:
        return failure(exc.code, exc.detail)

    order = len(elements)
    n = order
    while n % P.p == 0:
        n //= P.p
    if n != 1:
        return failure("NOT_P_GROUP", f"component group order {order} is not a power of {P.p}")

    split_witness = False
    literal = _literal_closure_size(P, cap)
    if literal is None:
        diagnostics.append("literal generator closure exceeded the cap; split witness unknown")
    else:
        split_witness = literal == order
    if P.split_claim is True and not split_witness:
        diagnostics.append("split claim rejected: literal generators do not close up to a complement")
    if P.split_claim is False and split_witness:
        diagnostics.append("presentation claims non-split but a splitting witness exists")

    return ValidationReport(
        ok=True,
        error=None,
        detail="",
        induced_matrices=matrices,
        component_order=order,
        split_witness=split_witness,
        diagnostics=tuple(diagnostics),
    )


def ensure_valid(P: MonomialGroupPresentation, cap: int = DEFAULT_ELEMENT_CAP) -> ValidationReport:
    report = validate(P, cap)
    if not report.ok:
        raise PresentationError(report.error or "INVALID", report.detail)
    return report


_GROUP_CACHE: dict[tuple, ComponentGroup] = {}


def component_group(P: MonomialGroupPresentation, cap: int = DEFAULT_ELEMENT_CAP) -> ComponentGroup:
    """Complete enumeration of the component group with multiplication table."""
    key = (P, cap)
    got = _GROUP_CACHE.get(key)
    if got is not None:
        return got
    ensure_valid(P, cap)
    canon = _CoeffCanon(P)
    elements, index = _bfs_component_group(P, canon, cap)
    group = ComponentGroup(P, elements, index, canon)
    _GROUP_CACHE[key] = group
    return group


def character_lattice_action(P: MonomialGroupPresentation, cap: int = DEFAULT_ELEMENT_CAP):
    """The rank-d lattice together with the finite matrix group induced on it."""
    from .symrank import FLattice

    report = ensure_valid(P, cap)
    mats = {m_as_tuple(A) for A in report.induced_matrices}
    d = P.torus_rank
    ident = m_as_tuple(IntMatrix.identity(d))
    closure = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for b in mats:
                c = m_as_tuple(IntMatrix.from_rows(a) @ IntMatrix.from_rows(b))
                if c not in closure:
                    if len(closure) >= cap:
                        raise PresentationError("LIMIT_EXCEEDED", "matrix group closure exceeded the cap")
                    closure.add(c)
                    nxt.append(c)
        frontier = nxt
    group_order = component_group(P, cap).order
    assert group_order % len(closure) == 0, "lattice action order must divide the component order"
    return FLattice(rank=d, matrices=tuple(sorted(closure)))


def m_as_tuple(A: IntMatrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(A.row(i)) for i in range(A.rows))


def append_character_block(R: MonomialRep, chi) -> MonomialRep:
    """Append the one-dimensional block on which the group acts by chi.

    chi is a tuple of fractions indexed by component-group element, verified
    to be a homomorphism against the multiplication table.  The new block has
    weight zero, so the torus acts trivially on it.
    """
    P = R.presentation
    group = component_group(P)
    n = len(group.elements)
    if len(chi) != n:
        raise PresentationError("NOT_A_CHARACTER", "character must assign a value to every class")
    if mod1(chi[group.identity]) != 0:
        raise PresentationError("NOT_A_CHARACTER", "character must vanish on the identity")
    for i in range(n):
        for j in range(n):
            if mod1(chi[i] + chi[j]) != mod1(chi[group.table[i][j]]):
                raise PresentationError("NOT_A_CHARACTER", "values do not respect the multiplication table")
    gen_values = []
    for perm, coeff in P.generators:
        cls = group.class_of((perm, coeff))
        gen_values.append((mod1(chi[cls]),))
    d = P.torus_rank
    block = RepBlock(
        weights=((0,) * d,),
        gen_perms=tuple((0,) for _ in P.generators),
        gen_coeffs=tuple(gen_values),
    )
    return MonomialRep(presentation=P, blocks=R.blocks + (block,))


def check_rep_compatible(P: MonomialGroupPresentation, R: MonomialRep) -> None:
    """Every block must transform by the same induced lattice matrices as the
    defining representation."""
    if R.presentation != P:
        raise PresentationError("BAD_INPUT", "representation belongs to a different presentation")
    report = ensure_valid(P)
    for b, block in enumerate(R.blocks):
        for j, A in enumerate(report.induced_matrices):
            perm = block.gen_perms[j]
            if sorted(perm) != list(range(block.dim)):
                raise PresentationError("BAD_INPUT", f"block {b}: generator {j} is not a permutation")
            if len(block.gen_coeffs[j]) != block.dim:
                raise PresentationError("BAD_INPUT", f"block {b}: coefficient length mismatch")
            for i in range(block.dim):
                if A.apply(block.weights[i]) != tuple(block.weights[perm[i]]):
                    raise PresentationError(
                        "BAD_INPUT",
                        f"block {b}: weights are not permuted compatibly with the torus action",
                    )
