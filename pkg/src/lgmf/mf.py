"""Matrix factorisations with explicit variable bookkeeping.

An MFObject is a finite-rank Z2-graded free module over a joint ring
with an odd differential d satisfying d^2 = (V - W) id.  The ring
carries three kinds of variables: source-facing, target-facing and
internal (middle variables of composites are kept, never split off).

Morphisms come in several kinds sharing one interface:

* MatrixMorphism    - honest polynomial block matrices,
* SubstMorphism     - blocks preceded by a variable collapse/renaming
                      (unit absorption, reorderings),
* ResidueMorphism   - blocks are residues of numerator matrices against
                      the Jacobian sequence of an internal potential
                      (the adjunction counits),
* CompositeMorphism / SumMorphism - formal composites and sums.

All of them can be applied to elements, composed, and differentiated by
the delta differential; delta stays within the kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .groebner import GroebnerBasis, order_key
from .jacobi import Potential
from .residue import ResidueCalculator
from .ring import DEGREE_ANY, INHOMOGENEOUS, Polynomial, PolyRing, RingError

Blocks = list[list[Polynomial]]


class MFError(Exception):
    pass


@dataclass(frozen=True)
class Generator:
    parity: int
    qdeg: Fraction | None = None
    label: object = None


def coerce_into(p: Polynomial, ring: PolyRing) -> Polynomial:
    """Re-express p in `ring`; error if p uses variables missing from it."""
    if p.ring == ring:
        return p
    for name in p.variables_used():
        if not ring.has(name):
            raise MFError(f"polynomial {p.to_text()} uses foreign variable {name}")
    out: dict[tuple[int, ...], Fraction] = {}
    pos = {n: ring.index(n) for n in p.ring.names() if ring.has(n)}
    names = p.ring.names()
    for e, c in p.terms.items():
        ne = [0] * ring.arity
        for i, k in enumerate(e):
            if k:
                ne[pos[names[i]]] = k
        out[tuple(ne)] = c
    return Polynomial(ring, out)


def mat_mul(a: Blocks, b: Blocks, ring: PolyRing) -> Blocks:
    rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        arow = a[i]
        for k in range(mid):
            av = arow[k]
            if av.is_zero():
                continue
            brow = b[k]
            for j in range(cols):
                if not brow[j].is_zero():
                    out[i][j] = out[i][j] + av * brow[j]
    return out


def mat_add(a: Blocks, b: Blocks) -> Blocks:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Blocks, c) -> Blocks:
    return [[x.scale(c) for x in row] for row in a]


def mat_lift(a: Blocks, ring: PolyRing) -> Blocks:
    return [[x.in_ring(ring) for x in row] for row in a]


def mat_identity(n: int, ring: PolyRing) -> Blocks:
    return [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]


def mat_zero(rows: int, cols: int, ring: PolyRing) -> Blocks:
    return [[ring.zero() for _ in range(cols)] for _ in range(rows)]


class MFObject:
    def __init__(
        self,
        ring: PolyRing,
        src_vars: Sequence[str],
        tgt_vars: Sequence[str],
        W_src: Polynomial,
        V_tgt: Polynomial,
        gens: Sequence[Generator],
        d: Blocks,
        graded: bool = False,
    ):
        self.ring = ring
        self.src_vars = tuple(src_vars)
        self.tgt_vars = tuple(tgt_vars)
        self.W_src = W_src.in_ring(ring)
        self.V_tgt = V_tgt.in_ring(ring)
        self.gens = tuple(gens)
        self.d = [[e.in_ring(ring) for e in row] for row in d]
        self.graded = graded

    # -- bookkeeping ---------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.gens)

    @property
    def internal_vars(self) -> tuple[str, ...]:
        facing = set(self.src_vars) | set(self.tgt_vars)
        return tuple(n for n in self.ring.names() if n not in facing)

    def potential_difference(self) -> Polynomial:
        return self.V_tgt - self.W_src

    def parities(self) -> list[int]:
        return [g.parity for g in self.gens]

    def gen_index(self, label) -> int:
        for i, g in enumerate(self.gens):
            if g.label == label:
                return i
        raise MFError(f"no generator labelled {label!r}")

    def zero_element(self) -> list[Polynomial]:
        return [self.ring.zero() for _ in self.gens]

    def basis_element(self, i: int, coeff: Polynomial | None = None) -> list[Polynomial]:
        v = self.zero_element()
        v[i] = coeff.in_ring(self.ring) if coeff is not None else self.ring.one()
        return v

    def apply_d(self, v: list[Polynomial]) -> list[Polynomial]:
        out = self.zero_element()
        for j, c in enumerate(v):
            if c.is_zero():
                continue
            c = c.in_ring(self.ring)
            for i in range(self.rank):
                if not self.d[i][j].is_zero():
                    out[i] = out[i] + self.d[i][j] * c
        return out

    def rename(self, mapping: dict[str, str]) -> "MFObject":
        """Injective variable renaming; the new names must be fresh."""
        for old, new in mapping.items():
            if self.ring.has(new) and new != old:
                raise MFError(f"rename target {new} already present")
        new_vars = []
        from .ring import Variable

        for v in self.ring.variables:
            if v.name in mapping:
                new_vars.append(Variable(mapping[v.name], v.weight, v.base or v.name))
            else:
                new_vars.append(v)
        ring = PolyRing(new_vars)
        mp = lambda n: mapping.get(n, n)
        return MFObject(
            ring,
            [mp(n) for n in self.src_vars],
            [mp(n) for n in self.tgt_vars],
            self.W_src.rename(mapping, ring),
            self.V_tgt.rename(mapping, ring),
            self.gens,
            [[e.rename(mapping, ring) for e in row] for row in self.d],
            graded=self.graded,
        )

    def with_ring(self, ring: PolyRing) -> "MFObject":
        return MFObject(ring, self.src_vars, self.tgt_vars, self.W_src, self.V_tgt,
                        self.gens, self.d, graded=self.graded)

    def __repr__(self):
        return (f"MF(rank {self.rank}, {list(self.src_vars)} -> {list(self.tgt_vars)}, "
                f"W={self.W_src.to_text()}, V={self.V_tgt.to_text()})")


# -- structural checks ------------------------------------------------------


def weight_lattice(weights: list[Fraction]) -> tuple[int, int]:
    """The subgroup <weights> of Q as (num, den): it equals (num/den) Z."""
    if not weights:
        return (1, 1)  # G_0 = Z
    den = 1
    for w in weights:
        den = den * w.denominator // __import__("math").gcd(den, w.denominator)
    num = 0
    for w in weights:
        num = __import__("math").gcd(num, int(w * den))
    return (num, den)


def check_mf(x: MFObject) -> list[str]:
    """All invariant violations, as human-readable strings; [] means valid."""
    problems: list[str] = []
    n = x.rank
    if any(len(row) != n for row in x.d) or len(x.d) != n:
        return [f"differential is not {n}x{n}"]
    for i in range(n):
        for j in range(n):
            e = x.d[i][j]
            if e.is_zero():
                continue
            if (x.gens[i].parity + x.gens[j].parity) % 2 == 0:
                problems.append(f"even entry d[{i}][{j}] = {e.to_text()}")
    target = x.potential_difference()
    sq = mat_mul(x.d, x.d, x.ring)
    for i in range(n):
        for j in range(n):
            want = target if i == j else x.ring.zero()
            if sq[i][j] != want:
                problems.append(
                    f"d^2[{i}][{j}] = {sq[i][j].to_text()} differs from "
                    f"{'V-W' if i == j else '0'}"
                )
    if x.graded:
        if not x.ring.is_weighted():
            problems.append("graded object over unweighted ring")
            return problems
        for i in range(n):
            for j in range(n):
                e = x.d[i][j]
                if e.is_zero():
                    continue
                deg = e.q_degree()
                want = 1 + x.gens[j].qdeg - x.gens[i].qdeg
                if deg is INHOMOGENEOUS or deg != want:
                    problems.append(
                        f"entry d[{i}][{j}] has q-degree {deg}, expected {want}"
                    )
    return problems


def lattice_warnings(x: MFObject) -> list[str]:
    """Condition (iv): generator degrees must lie in parity + <weights>."""
    if not x.graded:
        return []
    facing = [x.ring.weight(nm) for nm in (*x.src_vars, *x.tgt_vars)]
    num, den = weight_lattice(facing)
    out = []
    for i, g in enumerate(x.gens):
        q = g.qdeg - g.parity
        if num == 0:
            ok = q == 0
        else:
            ok = (q * den / num).denominator == 1
        if not ok:
            out.append(f"generator {i} degree {g.qdeg} outside parity coset of lattice")
    return out


# -- elementary constructions -----------------------------------------------


def rank1(potential: Potential, f: Polynomial, g: Polynomial,
          as_target: bool = True, q0: Fraction | None = None) -> MFObject:
    """The rank-one factorisation (f | g) of W = f*g, as 0 -> W or W -> 0."""
    ring = potential.ring
    W = potential.W
    if f * g != W:
        raise MFError("f*g differs from the potential")
    graded = potential.graded
    qdeg0 = None
    qdeg1 = None
    if graded:
        qdeg0 = Fraction(q0) if q0 is not None else Fraction(0)
        qdeg1 = qdeg0 + 1 - f.q_degree()
    gens = [Generator(0, qdeg0, "e0"), Generator(1, qdeg1, "e1")]
    d = [[ring.zero(), g], [f, ring.zero()]]
    if as_target:
        return MFObject(ring, [], ring.names(), ring.zero(), W, gens, d, graded)
    return MFObject(ring, ring.names(), [], W, ring.zero(), gens, d, graded)


def shift(x: MFObject, k: int = 1) -> MFObject:
    """[k]: flip parities k times and scale d by (-1)^k; [2] is the identity."""
    if k % 2 == 0:
        return x
    gens = [Generator(1 - g.parity, g.qdeg, g.label) for g in x.gens]
    return MFObject(x.ring, x.src_vars, x.tgt_vars, x.W_src, x.V_tgt, gens,
                    mat_scale(x.d, -1), graded=x.graded)


def q_shift(x: MFObject, q) -> MFObject:
    """{q}: shift all generator q-degrees by q."""
    if not x.graded:
        raise MFError("q_shift needs a graded object")
    q = Fraction(q)
    if q == 0:
        return x
    gens = [Generator(g.parity, g.qdeg + q, g.label) for g in x.gens]
    return MFObject(x.ring, x.src_vars, x.tgt_vars, x.W_src, x.V_tgt, gens, x.d,
                    graded=x.graded)


def dual(x: MFObject) -> MFObject:
    """X^vee with d(phi) = (-1)^{|phi|+1} phi o d_X, in the dual basis."""
    n = x.rank
    gens = [Generator(g.parity, -g.qdeg if g.qdeg is not None else None,
                      ("dual", g.label)) for g in x.gens]
    d = [[x.d[j][i].scale((-1) ** (x.gens[j].parity + 1)) for j in range(n)]
         for i in range(n)]
    return MFObject(x.ring, x.tgt_vars, x.src_vars, x.V_tgt, x.W_src, gens, d,
                    graded=x.graded)


def left_adjoint(x: MFObject, target_charge: Fraction | None = None) -> MFObject:
    """dagger X = X^vee [m] {c(V)/3},  m the number of target variables."""
    out = shift(dual(x), len(x.tgt_vars))
    if x.graded:
        out = q_shift(out, -(target_charge if target_charge is not None
                             else _charge_of(x, x.tgt_vars)))
    return out


def right_adjoint(x: MFObject, source_charge: Fraction | None = None) -> MFObject:
    """X dagger = X^vee [n] {c(W)/3},  n the number of source variables."""
    out = shift(dual(x), len(x.src_vars))
    if x.graded:
        out = q_shift(out, -(source_charge if source_charge is not None
                             else _charge_of(x, x.src_vars)))
    return out


def _charge_of(x: MFObject, names: tuple[str, ...]) -> Fraction:
    return sum((1 - x.ring.weight(n) for n in names), Fraction(0))


def _pair_order(left: MFObject, right: MFObject) -> list[tuple[int, int]]:
    # block order from the displayed decomposition: even = L0R0 + L1R1,
    # odd = L0R1 + L1R0, left slot major
    pairs = [(a, b) for a in range(left.rank) for b in range(right.rank)]
    pairs.sort(key=lambda ab: (
        (left.gens[ab[0]].parity + right.gens[ab[1]].parity) % 2,
        left.gens[ab[0]].parity, ab[0], ab[1],
    ))
    return pairs


def _tensor_gens(left: MFObject, right: MFObject,
                 pairs: list[tuple[int, int]]) -> list[Generator]:
    gens = []
    for a, b in pairs:
        ga, gb = left.gens[a], right.gens[b]
        q = ga.qdeg + gb.qdeg if ga.qdeg is not None and gb.qdeg is not None else None
        gens.append(Generator((ga.parity + gb.parity) % 2, q, (ga.label, gb.label)))
    return gens


def _tensor_d(left: MFObject, right: MFObject, ring: PolyRing,
              pairs: list[tuple[int, int]]) -> Blocks:
    idx = {ab: i for i, ab in enumerate(pairs)}
    n = len(pairs)
    d = mat_zero(n, n, ring)
    dl = mat_lift(left.d, ring)
    dr = mat_lift(right.d, ring)
    for (a, b), j in idx.items():
        for i in range(left.rank):
            if not dl[i][a].is_zero():
                d[idx[(i, b)]][j] = d[idx[(i, b)]][j] + dl[i][a]
        sign = -1 if left.gens[a].parity else 1
        for i in range(right.rank):
            if not dr[i][b].is_zero():
                d[idx[(a, i)]][j] = d[idx[(a, i)]][j] + dr[i][b].scale(sign)
    return d


def tensor_horizontal(y: MFObject, x: MFObject) -> MFObject:
    """Y (x) X: the composite 1-morphism "first X, then Y".

    Requires the glue to be literal: X's target variables and potential
    coincide with Y's source ones, and no other variable names clash.
    The middle variables stay internal to the result.
    """
    if x.tgt_vars != y.src_vars:
        raise MFError(f"middle contexts differ: {x.tgt_vars} vs {y.src_vars}")
    overlap = (set(x.ring.names()) & set(y.ring.names())) - set(x.tgt_vars)
    if overlap:
        raise MFError(f"variable clash outside the middle: {sorted(overlap)}")
    ring = x.ring.union(y.ring)
    if x.V_tgt.in_ring(ring) != y.W_src.in_ring(ring):
        raise MFError("middle potentials differ")
    pairs = _pair_order(y, x)
    obj = MFObject(
        ring, x.src_vars, y.tgt_vars,
        x.W_src.in_ring(ring), y.V_tgt.in_ring(ring),
        _tensor_gens(y, x, pairs), _tensor_d(y, x, ring, pairs),
        graded=x.graded and y.graded,
    )
    obj.tensor_pairs = pairs  # type: ignore[attr-defined]
    obj.tensor_factors = (y, x)  # type: ignore[attr-defined]
    return obj


def compose(y: MFObject, x: MFObject) -> MFObject:
    """tensor_horizontal with tracked renaming of Y onto X's target context."""
    y2, _ = glue_rename(y, x)
    return tensor_horizontal(y2, x)


def glue_rename(y: MFObject, x: MFObject) -> tuple[MFObject, dict[str, str]]:
    """Rename Y so that its source context becomes X's target context."""
    if len(y.src_vars) != len(x.tgt_vars):
        raise MFError("cannot glue: source/target arities differ")
    mapping = dict(zip(y.src_vars, x.tgt_vars))
    taken = set(x.ring.names()) | set(x.tgt_vars)
    for n in y.ring.names():
        if n in mapping:
            continue
        new = n
        while new in taken or (new in y.ring.names() and new != n) or new in mapping.values():
            new = new + "'"
        mapping[n] = new
        taken.add(new)
    y2 = y.rename({k: v for k, v in mapping.items() if k != v})
    return y2, mapping


def external_product(x: MFObject, y: MFObject) -> MFObject:
    """X (box) Y over disjoint variable contexts; potentials add."""
    clash = set(x.ring.names()) & set(y.ring.names())
    if clash:
        raise MFError(f"external product needs disjoint contexts: {sorted(clash)}")
    ring = x.ring.union(y.ring)
    pairs = _pair_order(x, y)
    obj = MFObject(
        ring,
        tuple(x.src_vars) + tuple(y.src_vars),
        tuple(x.tgt_vars) + tuple(y.tgt_vars),
        x.W_src.in_ring(ring) + y.W_src.in_ring(ring),
        x.V_tgt.in_ring(ring) + y.V_tgt.in_ring(ring),
        _tensor_gens(x, y, pairs), _tensor_d(x, y, ring, pairs),
        graded=x.graded and y.graded,
    )
    obj.tensor_pairs = pairs  # type: ignore[attr-defined]
    obj.tensor_factors = (x, y)  # type: ignore[attr-defined]
    return obj


# -- morphisms ---------------------------------------------------------------


class Morphism:
    """Common interface: apply to elements, compose, differentiate."""

    src: MFObject
    tgt: MFObject
    parity: int
    qdeg: Fraction | None

    def apply(self, v: list[Polynomial]) -> list[Polynomial]:
        raise NotImplementedError

    def then(self, g: "Morphism") -> "Morphism":
        return CompositeMorphism([g, self])

    def delta(self) -> "Morphism":
        d_t = MatrixMorphism(self.tgt, self.tgt, self.tgt.d, parity=1)
        d_s = MatrixMorphism(self.src, self.src, self.src.d, parity=1)
        sign = -1 if self.parity == 0 else 1  # -(-1)^{|f|}
        return SumMorphism([
            (Fraction(1), CompositeMorphism([d_t, self])),
            (Fraction(sign), CompositeMorphism([self, d_s])),
        ])

    def to_matrix(self) -> "MatrixMorphism":
        """Columns = images of generators; valid for outer-linear composites."""
        cols = [self.apply(self.src.basis_element(j)) for j in range(self.src.rank)]
        blocks = [[cols[j][i] for j in range(self.src.rank)]
                  for i in range(self.tgt.rank)]
        return MatrixMorphism(self.src, self.tgt, blocks, self.parity, self.qdeg)


class MatrixMorphism(Morphism):
    def __init__(self, src: MFObject, tgt: MFObject, blocks: Blocks,
                 parity: int = 0, qdeg: Fraction | None = None):
        self.src = src
        self.tgt = tgt
        self.ring = src.ring.union(tgt.ring)
        self.blocks = mat_lift(blocks, self.ring)
        self.parity = parity
        self.qdeg = qdeg

    def apply(self, v):
        out = [self.ring.zero() for _ in range(self.tgt.rank)]
        for j, c in enumerate(v):
            if c.is_zero():
                continue
            c = c.in_ring(self.ring)
            for i in range(self.tgt.rank):
                if not self.blocks[i][j].is_zero():
                    out[i] = out[i] + self.blocks[i][j] * c
        return [coerce_into(p, self.tgt.ring) for p in out]

    def delta(self) -> "MatrixMorphism":
        ring = self.ring
        a = mat_mul(mat_lift(self.tgt.d, ring), self.blocks, ring)
        b = mat_mul(self.blocks, mat_lift(self.src.d, ring), ring)
        sign = -1 if self.parity == 0 else 1
        return MatrixMorphism(self.src, self.tgt, mat_add(a, mat_scale(b, sign)),
                              1 - self.parity,
                              None if self.qdeg is None else self.qdeg + 1)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.blocks for e in row)

    def scale(self, c) -> "MatrixMorphism":
        return MatrixMorphism(self.src, self.tgt, mat_scale(self.blocks, c),
                              self.parity, self.qdeg)

    def add(self, other: "MatrixMorphism") -> "MatrixMorphism":
        if other.src is not self.src and other.src.gens != self.src.gens:
            raise MFError("cannot add morphisms with different sources")
        return MatrixMorphism(self.src, self.tgt,
                              mat_add(self.blocks, mat_lift(other.blocks, self.ring)),
                              self.parity, self.qdeg)

    def transpose_dual(self) -> "MatrixMorphism":
        """The dual morphism between dual objects (even morphisms only)."""
        if self.parity != 0:
            raise MFError("dual morphism implemented for even morphisms")
        blocks = [[self.blocks[j][i] for j in range(self.tgt.rank)]
                  for i in range(self.src.rank)]
        return MatrixMorphism(dual(self.tgt), dual(self.src), blocks, 0, self.qdeg)


class SubstMorphism(Morphism):
    """blocks after a variable-to-variable substitution of coefficients."""

    def __init__(self, src: MFObject, tgt: MFObject, subst: dict[str, str],
                 blocks: Blocks, parity: int = 0, qdeg: Fraction | None = None):
        self.src = src
        self.tgt = tgt
        self.subst = dict(subst)
        self.blocks = mat_lift(blocks, tgt.ring)
        self.parity = parity
        self.qdeg = qdeg

    def _move(self, p: Polynomial) -> Polynomial:
        q = p.rename(self.subst, _subst_ring(p.ring, self.subst, self.tgt.ring))
        return coerce_into(q, self.tgt.ring)

    def apply(self, v):
        ring = self.tgt.ring
        out = [ring.zero() for _ in range(self.tgt.rank)]
        for j, c in enumerate(v):
            if c.is_zero():
                continue
            c = self._move(c)
            for i in range(self.tgt.rank):
                if not self.blocks[i][j].is_zero():
                    out[i] = out[i] + self.blocks[i][j] * c
        return out

    def delta(self) -> "SubstMorphism":
        ring = self.tgt.ring
        a = mat_mul(mat_lift(self.tgt.d, ring), self.blocks, ring)
        moved_d = [[self._move(e) for e in row] for row in self.src.d]
        b = mat_mul(self.blocks, moved_d, ring)
        sign = -1 if self.parity == 0 else 1
        return SubstMorphism(self.src, self.tgt, self.subst,
                             mat_add(a, mat_scale(b, sign)), 1 - self.parity,
                             None if self.qdeg is None else self.qdeg + 1)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.blocks for e in row)


def _subst_ring(src_ring: PolyRing, subst: dict[str, str], tgt_ring: PolyRing) -> PolyRing:
    # smallest ring containing the substituted image
    from .ring import Variable

    out = list(tgt_ring.variables)
    have = {v.name for v in out}
    for v in src_ring.variables:
        name = subst.get(v.name, v.name)
        if name not in have:
            out.append(Variable(name, v.weight, v.base))
            have.add(name)
    return PolyRing(out)


class ResidueMorphism(Morphism):
    """Entries are residues of numerators against an internal Jacobian ideal.

    apply(sum_j p_j gen_j)_i = Res[ sum_j p_j * numer[i][j] ] with the residue
    taken in the variables of `elim_potential`; all other variables spectate.
    """

    def __init__(self, src: MFObject, tgt: MFObject, elim_potential: Potential,
                 numer: Blocks, parity: int = 0, qdeg: Fraction | None = None):
        self.src = src
        self.tgt = tgt
        self.elim = elim_potential
        self.ring = src.ring.union(tgt.ring).union(elim_potential.ring)
        self.numer = mat_lift(numer, self.ring)
        self.parity = parity
        self.qdeg = qdeg
        self._calc = ResidueCalculator(elim_potential) if elim_potential.arity else None
        self._gb: GroebnerBasis | None = None

    def apply(self, v):
        out = []
        for i in range(self.tgt.rank):
            acc = self.ring.zero()
            for j, c in enumerate(v):
                if c.is_zero() or self.numer[i][j].is_zero():
                    continue
                acc = acc + c.in_ring(self.ring) * self.numer[i][j]
            if self._calc is not None:
                acc = self._calc.eliminate(acc)
            out.append(coerce_into(acc, self.tgt.ring))
        return out

    def delta(self) -> "ResidueMorphism":
        ring = self.ring
        a = mat_mul(mat_lift(self.tgt.d, ring), self.numer, ring)
        b = mat_mul(self.numer, mat_lift(self.src.d, ring), ring)
        sign = -1 if self.parity == 0 else 1
        return ResidueMorphism(self.src, self.tgt, self.elim,
                               mat_add(a, mat_scale(b, sign)), 1 - self.parity,
                               None if self.qdeg is None else self.qdeg + 1)

    def is_zero(self) -> bool:
        """Zero as a map on all elements, by ideal membership of numerators.

        p -> Res[p * N] vanishes for every p iff N lies in the Jacobian ideal
        (nondegeneracy of the residue pairing).
        """
        if self._calc is None:
            return all(e.is_zero() for row in self.numer for e in row)
        gb = self._mixed_groebner()
        return all(gb.normal_form(e).is_zero() for row in self.numer for e in row)

    def _mixed_groebner(self) -> GroebnerBasis:
        if self._gb is None:
            gens = [g.in_ring(self.ring) for g in self.elim.jacobian()]
            blocks = tuple(self.ring.index(n) for n in self.elim.ring.names())
            self._gb = GroebnerBasis(gens, blocks=blocks)
        return self._gb


class CompositeMorphism(Morphism):
    """Composition; `parts` are applied right to left."""

    def __init__(self, parts: Sequence[Morphism]):
        parts = list(parts)
        for late, early in zip(parts, parts[1:]):
            if late.src.gens != early.tgt.gens:
                raise MFError("composite stages do not match")
        self.parts = parts
        self.src = parts[-1].src
        self.tgt = parts[0].tgt
        self.parity = sum(p.parity for p in parts) % 2
        qs = [p.qdeg for p in parts]
        self.qdeg = None if any(q is None for q in qs) else sum(qs, Fraction(0))

    def apply(self, v):
        for p in reversed(self.parts):
            v = p.apply(v)
        return v


class SumMorphism(Morphism):
    def __init__(self, terms: Sequence[tuple[Fraction, Morphism]]):
        self.terms = [(Fraction(c), m) for c, m in terms]
        first = self.terms[0][1]
        self.src = first.src
        self.tgt = first.tgt
        self.parity = first.parity
        self.qdeg = first.qdeg

    def apply(self, v):
        out = [self.tgt.ring.zero() for _ in range(self.tgt.rank)]
        for c, m in self.terms:
            w = m.apply(v)
            out = [a + b.scale(c) for a, b in zip(out, w)]
        return out


def identity_morphism(x: MFObject) -> MatrixMorphism:
    return MatrixMorphism(x, x, mat_identity(x.rank, x.ring), 0,
                          Fraction(0) if x.graded else None)


def zero_morphism(x: MFObject, y: MFObject, parity: int = 0) -> MatrixMorphism:
    return MatrixMorphism(x, y, mat_zero(y.rank, x.rank, x.ring.union(y.ring)), parity)


def delta(f: Morphism) -> Morphism:
    return f.delta()


def external_morphism_product(f: MatrixMorphism, g: MatrixMorphism,
                              src: MFObject | None = None,
                              tgt: MFObject | None = None) -> MatrixMorphism:
    """f (box) g with the Koszul sign (-1)^{|g| * |e|} on source generators e."""
    src = src or external_product(f.src, g.src)
    tgt = tgt or external_product(f.tgt, g.tgt)
    spairs = src.tensor_pairs  # type: ignore[attr-defined]
    tpairs = tgt.tensor_pairs  # type: ignore[attr-defined]
    tidx = {ab: i for i, ab in enumerate(tpairs)}
    ring = src.ring.union(tgt.ring)
    fb = mat_lift(f.blocks, ring)
    gb = mat_lift(g.blocks, ring)
    blocks = mat_zero(tgt.rank, src.rank, ring)
    for jcol, (a, b) in enumerate(spairs):
        sign = -1 if (g.parity % 2) and f.src.gens[a].parity else 1
        for i in range(f.tgt.rank):
            if fb[i][a].is_zero():
                continue
            for k in range(g.tgt.rank):
                if gb[k][b].is_zero():
                    continue
                blocks[tidx[(i, k)]][jcol] = (
                    blocks[tidx[(i, k)]][jcol] + (fb[i][a] * gb[k][b]).scale(sign)
                )
    q = None
    if f.qdeg is not None and g.qdeg is not None:
        q = f.qdeg + g.qdeg
    return MatrixMorphism(src, tgt, blocks, (f.parity + g.parity) % 2, q)


def tensor_morphism_product(f: MatrixMorphism, g: MatrixMorphism,
                            src: MFObject, tgt: MFObject) -> MatrixMorphism:
    """f (x) g on horizontal composites, same Koszul convention as (box)."""
    return external_morphism_product(f, g, src=src, tgt=tgt)


def check_morphism(f: Morphism, closed: bool = True) -> list[str]:
    """Shape, parity, grading and (optionally) delta-closedness diagnostics."""
    problems: list[str] = []
    mat = f if isinstance(f, (MatrixMorphism, SubstMorphism, ResidueMorphism)) else f.to_matrix()
    blocks = mat.blocks if not isinstance(mat, ResidueMorphism) else None
    if blocks is not None:
        for i in range(f.tgt.rank):
            for j in range(f.src.rank):
                e = blocks[i][j]
                if e.is_zero():
                    continue
                want = (f.tgt.gens[i].parity + f.src.gens[j].parity) % 2
                if want != f.parity % 2:
                    problems.append(f"entry ({i},{j}) violates parity {f.parity}")
                if f.qdeg is not None and f.src.graded and f.tgt.graded:
                    deg = e.q_degree()
                    want_q = f.qdeg + f.src.gens[j].qdeg - f.tgt.gens[i].qdeg
                    if deg is INHOMOGENEOUS or (deg is not DEGREE_ANY and deg != want_q):
                        problems.append(
                            f"entry ({i},{j}) has q-degree {deg}, expected {want_q}")
    if closed:
        dm = mat.delta() if hasattr(mat, "delta") else delta(mat)
        if hasattr(dm, "is_zero"):
            if not dm.is_zero():
                problems.append("morphism is not delta-closed")
        else:  # pragma: no cover
            problems.append("cannot decide closedness for this kind")
    return problems
