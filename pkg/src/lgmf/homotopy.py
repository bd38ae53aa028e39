"""Semi-decision procedures for the homotopy category.

Everything here works on truncated two-periodic complexes: elements of
bounded polynomial degree, an exact delta matrix over Q, and ranks of
sparse integer matrices.  Dimensions are reported together with a
stabilization flag (same value at the bound and at bound + stride); a
failed witness search is inconclusive unless an exact cohomology
obstruction accompanies it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from . import linalg
from .jacobi import JacobiAlgebra, Potential
from .mf import (
    Blocks,
    MatrixMorphism,
    MFError,
    MFObject,
    coerce_into,
    dual,
    mat_lift,
    mat_zero,
    tensor_horizontal,
)
from .ring import Polynomial, PolyRing
from .unit import unit

Exponent = tuple[int, ...]


def monomials_upto(arity: int, degree: int) -> list[Exponent]:
    out: list[Exponent] = []

    def rec(prefix: list[int], left: int, i: int):
        if i == arity - 1:
            for k in range(left + 1):
                out.append(tuple(prefix + [k]))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, i + 1)

    if arity == 0:
        return [()]
    rec([], degree, 0)
    out.sort(key=lambda e: (sum(e), e))
    return out


class Indexer:
    def __init__(self):
        self.ids: dict = {}

    def __call__(self, key) -> int:
        if key not in self.ids:
            self.ids[key] = len(self.ids)
        return self.ids[key]

    def __len__(self):
        return len(self.ids)


class TwoPeriodic:
    """A free module with an odd endomorphism, in coordinate form."""

    def __init__(self, parities: list[int], blocks: Blocks, ring: PolyRing):
        self.parities = list(parities)
        self.ring = ring
        self.blocks = mat_lift(blocks, ring)
        self.rank = len(parities)
        self.entry_degree = max(
            (e.total_degree() for row in self.blocks for e in row if not e.is_zero()),
            default=0,
        )
        # terms[g] = list of (g_row, exponent, coeff) for column g
        self.terms: list[list[tuple[int, Exponent, Fraction]]] = []
        for j in range(self.rank):
            col = []
            for i in range(self.rank):
                for e, c in self.blocks[i][j].terms.items():
                    col.append((i, e, c))
            self.terms.append(col)
        self.index = Indexer()

    @staticmethod
    def of_object(x: MFObject) -> "TwoPeriodic":
        return TwoPeriodic(x.parities(), x.d, x.ring)

    @staticmethod
    def hom(src: MFObject, tgt: MFObject) -> "TwoPeriodic":
        """The complex Hom(src, tgt) with differential delta."""
        ring = src.ring.union(tgt.ring)
        ds = mat_lift(src.d, ring)
        dt = mat_lift(tgt.d, ring)
        pairs = [(i, j) for i in range(tgt.rank) for j in range(src.rank)]
        pidx = {p: k for k, p in enumerate(pairs)}
        parities = [(tgt.gens[i].parity + src.gens[j].parity) % 2 for i, j in pairs]
        n = len(pairs)
        blocks = mat_zero(n, n, ring)
        for (i, j), col in pidx.items():
            sign = -1 if parities[col] == 0 else 1
            for k in range(tgt.rank):
                if not dt[k][i].is_zero():
                    blocks[pidx[(k, j)]][col] = blocks[pidx[(k, j)]][col] + dt[k][i]
            for l in range(src.rank):
                if not ds[j][l].is_zero():
                    blocks[pidx[(i, l)]][col] = (
                        blocks[pidx[(i, l)]][col] + ds[j][l].scale(sign)
                    )
        t = TwoPeriodic(parities, blocks, ring)
        t.pairs = pairs  # type: ignore[attr-defined]
        t.pair_index = pidx  # type: ignore[attr-defined]
        t.hom_src = src  # type: ignore[attr-defined]
        t.hom_tgt = tgt  # type: ignore[attr-defined]
        return t

    # -- coordinates ---------------------------------------------------

    def warm_index(self, degree: int) -> None:
        """Preassign coordinate ids in degree order (keeps elimination banded)."""
        for e in monomials_upto(self.ring.arity, degree):
            for g in range(self.rank):
                self.index((e, g))

    def basis_keys(self, parity: int, degree: int) -> list[tuple[Exponent, int]]:
        mons = monomials_upto(self.ring.arity, degree)
        return [(e, g) for e in mons for g in range(self.rank)
                if self.parities[g] == parity % 2]

    def column(self, key: tuple[Exponent, int]) -> dict[int, Fraction]:
        e, g = key
        out: dict[int, Fraction] = {}
        for i, me, c in self.terms[g]:
            ne = tuple(a + b for a, b in zip(e, me))
            idx = self.index((ne, i))
            s = out.get(idx, Fraction(0)) + c
            if s:
                out[idx] = s
            elif idx in out:
                del out[idx]
        return out

    def vector_of(self, element: list[Polynomial]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for g, p in enumerate(element):
            p = p.in_ring(self.ring)
            for e, c in p.terms.items():
                out[self.index((e, g))] = out.get(self.index((e, g)), Fraction(0)) + c
        return {k: v for k, v in out.items() if v}

    def element_of(self, coords: dict[tuple[Exponent, int], Fraction]) -> list[Polynomial]:
        vec = [self.ring.zero() for _ in range(self.rank)]
        for (e, g), c in coords.items():
            if c:
                vec[g] = vec[g] + Polynomial(self.ring, {e: Fraction(c)})
        return vec

    def blocks_of(self, element: list[Polynomial]) -> Blocks:
        if not hasattr(self, "pairs"):
            raise MFError("not a Hom complex")
        src, tgt = self.hom_src, self.hom_tgt  # type: ignore[attr-defined]
        out = mat_zero(tgt.rank, src.rank, self.ring)
        for k, (i, j) in enumerate(self.pairs):  # type: ignore[attr-defined]
            out[i][j] = element[k]
        return out

    def element_of_blocks(self, blocks: Blocks) -> list[Polynomial]:
        if not hasattr(self, "pairs"):
            raise MFError("not a Hom complex")
        lifted = mat_lift(blocks, self.ring)
        return [lifted[i][j] for (i, j) in self.pairs]  # type: ignore[attr-defined]


# -- dimensions --------------------------------------------------------------


def _image_rows(t: TwoPeriodic, parity: int, degree: int) -> list[linalg.IntRow]:
    rows = []
    for key in t.basis_keys(parity, degree):
        col = t.column(key)
        if col:
            rows.append(linalg.row_from_fractions(col))
    return rows


def _dims_at(t: TwoPeriodic, parity: int, D: int, slack: int) -> int:
    t.warm_index(D + slack + t.entry_degree)
    cols = t.basis_keys(parity, D)
    mat = []
    for key in cols:
        col = t.column(key)
        mat.append(linalg.row_from_fractions(col))
    kernel_dim = len(cols) - linalg.rank_of(mat)
    # image of the opposite parity, computed with ambient slack, met with
    # the degree-<=D coordinate subspace
    degree_of = {}
    for key in t.basis_keys(parity, D):
        degree_of[t.index(key)] = sum(key[0])
    img_rows = _image_rows(t, 1 - parity % 2, D + slack)
    inside = lambda cidx: degree_of.get(cidx, None) is not None
    boundary_dim = linalg.image_meets_subspace(img_rows, inside)
    return kernel_dim - boundary_dim


def cohomology_dim(t: TwoPeriodic, parity: int, D: int,
                   stride: int | None = None, slack: int | None = None
                   ) -> tuple[int, bool]:
    """(dimension at bound D, stabilized across D + stride)."""
    stride = stride or max(2, t.entry_degree)
    slack = slack or stride
    a = _dims_at(t, parity, D, slack)
    b = _dims_at(t, parity, D + stride, slack)
    return a, a == b


def hom_cohomology_dim(src: MFObject, tgt: MFObject, parity: int, D: int,
                       stride: int | None = None) -> tuple[int, bool]:
    return cohomology_dim(TwoPeriodic.hom(src, tgt), parity, D, stride)


def cohomology_reps(t: TwoPeriodic, parity: int, D: int,
                    slack: int | None = None,
                    expected: int | None = None) -> list[list[Polynomial]]:
    """Representatives of a basis of H^parity at truncation D."""
    slack = slack or max(2, t.entry_degree)
    cols = t.basis_keys(parity, D)
    rows = [linalg.row_from_fractions(t.column(key)) for key in cols]
    col_ids = {i: key for i, key in enumerate(cols)}
    kernel = _sparse_kernel(rows, len(cols))
    span = linalg.Eliminator()
    for r in _image_rows(t, 1 - parity % 2, D + slack):
        span.add(r)
    reps = []
    for kv in kernel:
        vec: dict[int, Fraction] = {}
        for ci, c in kv.items():
            key = col_ids[ci]
            vec[t.index(key)] = c
        row = linalg.row_from_fractions(vec)
        if span.add(row):
            coords = {col_ids[ci]: c for ci, c in kv.items()}
            reps.append(t.element_of(coords))
            if expected is not None and len(reps) == expected:
                break
    return reps


def _sparse_kernel(rows: list[linalg.IntRow], ncols: int) -> list[dict[int, Fraction]]:
    elim = linalg.Eliminator()
    # those rows are columns of delta; kernel of delta as a matrix with
    # columns indexed 0..ncols-1: transpose view
    # build equations: for each output coordinate, sum over columns
    by_row: dict[int, dict[int, int]] = {}
    for j, col in enumerate(rows):
        for r, v in col.items():
            by_row.setdefault(r, {})[j] = v
    eqs = [linalg.normalize_row(d) for d in by_row.values()]
    basis = linalg.kernel_basis(eqs, ncols)
    return [
        {i: c for i, c in enumerate(vec) if c}
        for vec in basis
    ]


# -- witnesses ---------------------------------------------------------------


class HomotopyWitness:
    def __init__(self, h: MatrixMorphism, bound: int):
        self.h = h
        self.bound = bound
        self.certified = False


def morphism_vector(t: TwoPeriodic, f: MatrixMorphism) -> dict[int, Fraction]:
    return t.vector_of(t.element_of_blocks(f.blocks))


def find_homotopy(alpha: MatrixMorphism, beta: MatrixMorphism | None, D: int
                  ) -> HomotopyWitness | None:
    """Solve delta(h) = alpha - beta over entries of degree <= D, exactly.

    The witness equation is re-verified symbolically after the solve.
    """
    src, tgt = alpha.src, alpha.tgt
    t = TwoPeriodic.hom(src, tgt)
    diff_blocks = alpha.blocks
    if beta is not None:
        ring = t.ring
        diff_blocks = [
            [a.in_ring(ring) - b.in_ring(ring) for a, b in zip(ra, rb)]
            for ra, rb in zip(mat_lift(alpha.blocks, ring), mat_lift(beta.blocks, ring))
        ]
    rhs_vec = t.vector_of(t.element_of_blocks(diff_blocks))
    h_parity = 1 - alpha.parity % 2
    cols = t.basis_keys(h_parity, D)
    sys_rows: dict[int, dict[int, Fraction]] = {}
    for ci, key in enumerate(cols):
        for ridx, c in t.column(key).items():
            sys_rows.setdefault(ridx, {})[ci] = c
    for ridx in rhs_vec:
        sys_rows.setdefault(ridx, {})
    system = linalg.LinearSystem(len(cols))
    for ridx, coeffs in sys_rows.items():
        system.add_equation(coeffs, rhs_vec.get(ridx, Fraction(0)))
    sol = system.solve()
    if sol is None:
        return None
    coords = {key: sol[ci] for ci, key in enumerate(cols) if sol[ci]}
    hvec = t.element_of(coords)
    hblocks = t.blocks_of(hvec)
    h = MatrixMorphism(src, tgt, hblocks, parity=h_parity)
    witness = HomotopyWitness(h, D)
    check = h.delta()
    ring = check.ring
    for i in range(tgt.rank):
        for j in range(src.rank):
            want = diff_blocks[i][j].in_ring(ring)
            if check.blocks[i][j] != want:
                raise MFError("homotopy witness failed exact verification")
    witness.certified = True
    return witness


def is_nullhomotopic(alpha: MatrixMorphism, D: int) -> HomotopyWitness | None:
    return find_homotopy(alpha, None, D)


def class_obstruction(alpha: MatrixMorphism, D: int,
                      stride: int | None = None) -> dict:
    """Exact evidence that a closed morphism has nonzero class.

    Returns dims and the verdict: `nonzero_class` True means alpha is not a
    boundary within the stabilized truncation.
    """
    t = TwoPeriodic.hom(alpha.src, alpha.tgt)
    stride = stride or max(2, t.entry_degree)
    vec = linalg.row_from_fractions(morphism_vector(t, alpha))
    span = linalg.Eliminator()
    for r in _image_rows(t, 1 - alpha.parity % 2, D + stride):
        span.add(r)
    nonzero = not span.contains(vec)
    dim, stable = cohomology_dim(t, alpha.parity, D, stride)
    return {
        "nonzero_class": nonzero,
        "cohomology_dim": dim,
        "stabilized": stable,
    }


class EquivalenceCertificate:
    def __init__(self, g: MatrixMorphism, h_left: MatrixMorphism,
                 h_right: MatrixMorphism, bound: int):
        self.g = g
        self.h_left = h_left    # delta(h_left)  = g o f - id_src
        self.h_right = h_right  # delta(h_right) = f o g - id_tgt
        self.bound = bound


def _compose_blocks(f: MatrixMorphism, g: MatrixMorphism) -> MatrixMorphism:
    """Matrix composite g o f without re-applying morphism machinery."""
    from .mf import mat_mul

    ring = f.ring.union(g.ring)
    blocks = mat_mul(mat_lift(g.blocks, ring), mat_lift(f.blocks, ring), ring)
    q = None
    if f.qdeg is not None and g.qdeg is not None:
        q = f.qdeg + g.qdeg
    return MatrixMorphism(f.src, g.tgt, blocks, (f.parity + g.parity) % 2, q)


def is_homotopy_equivalence(f: MatrixMorphism, D: int,
                            candidate_bound: int | None = None
                            ) -> EquivalenceCertificate | None:
    """Search for g with g o f ~ id and f o g ~ id, all verified exactly.

    Candidates for g are drawn from even cohomology representatives of
    Hom(tgt, src); the scalar combination and both homotopies are solved
    for in one exact linear system.
    """
    from .mf import identity_morphism

    joint = f.src.ring.union(f.tgt.ring)
    src, tgt = f.src.with_ring(joint), f.tgt.with_ring(joint)
    f = MatrixMorphism(src, tgt, f.blocks, f.parity, f.qdeg)
    cb = candidate_bound if candidate_bound is not None else D
    t_back = TwoPeriodic.hom(tgt, src)
    candidates = cohomology_reps(t_back, f.parity, cb)
    if not candidates:
        return None
    cand_ms = [MatrixMorphism(tgt, src, t_back.blocks_of(v), parity=f.parity)
               for v in candidates]
    t_src = TwoPeriodic.hom(src, src)
    t_tgt = TwoPeriodic.hom(tgt, tgt)
    id_src = identity_morphism(src)
    id_tgt = identity_morphism(tgt)
    cols_h1 = t_src.basis_keys(1, D)
    cols_h2 = t_tgt.basis_keys(1, D)
    ncand = len(cand_ms)
    n1 = len(cols_h1)
    n2 = len(cols_h2)
    total = ncand + n1 + n2
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}

    def add_col(side: int, col_offset: int, vec: dict[int, Fraction]):
        for ridx, c in vec.items():
            rows.setdefault((side, ridx), {})[col_offset] = c

    for k, g in enumerate(cand_ms):
        gf = _compose_blocks(f, g)      # g o f : src -> src
        fg = _compose_blocks(g, f)      # f o g : tgt -> tgt
        add_col(0, k, t_src.vector_of(t_src.element_of_blocks(gf.blocks)))
        add_col(1, k, t_tgt.vector_of(t_tgt.element_of_blocks(fg.blocks)))
    for ci, key in enumerate(cols_h1):
        add_col(0, ncand + ci, {r: -c for r, c in t_src.column(key).items()})
    for ci, key in enumerate(cols_h2):
        add_col(1, ncand + n1 + ci, {r: -c for r, c in t_tgt.column(key).items()})
    rhs1 = t_src.vector_of(t_src.element_of_blocks(id_src.blocks))
    rhs2 = t_tgt.vector_of(t_tgt.element_of_blocks(id_tgt.blocks))
    for r in rhs1:
        rows.setdefault((0, r), {})
    for r in rhs2:
        rows.setdefault((1, r), {})
    system = linalg.LinearSystem(total)
    for (side, ridx), coeffs in rows.items():
        rhs = rhs1 if side == 0 else rhs2
        system.add_equation(coeffs, rhs.get(ridx, Fraction(0)))
    sol = system.solve()
    if sol is None:
        return None
    g_blocks = mat_zero(src.rank, tgt.rank, t_back.ring)
    for k, g in enumerate(cand_ms):
        if sol[k]:
            g_blocks = [
                [a + b.scale(sol[k]) for a, b in zip(ra, rb)]
                for ra, rb in zip(g_blocks, mat_lift(g.blocks, t_back.ring))
            ]
    gm = MatrixMorphism(tgt, src, g_blocks, parity=f.parity)
    h1 = MatrixMorphism(src, src, t_src.blocks_of(t_src.element_of(
        {key: sol[ncand + ci] for ci, key in enumerate(cols_h1) if sol[ncand + ci]}
    )), parity=1)
    h2 = MatrixMorphism(tgt, tgt, t_tgt.blocks_of(t_tgt.element_of(
        {key: sol[ncand + n1 + ci] for ci, key in enumerate(cols_h2)
         if sol[ncand + n1 + ci]}
    )), parity=1)
    # exact verification: delta(g) = 0, delta(h1) = g f - id, delta(h2) = f g - id
    if not gm.delta().is_zero():
        raise MFError("equivalence candidate failed closedness check")
    _assert_delta_equals(h1, _compose_blocks(f, gm), identity_morphism(src))
    _assert_delta_equals(h2, _compose_blocks(gm, f), identity_morphism(tgt))
    return EquivalenceCertificate(gm, h1, h2, D)


def _assert_delta_equals(h: MatrixMorphism, a: MatrixMorphism, b: MatrixMorphism):
    dh = h.delta()
    ring = dh.ring.union(a.ring).union(b.ring)
    for i in range(len(dh.blocks)):
        for j in range(len(dh.blocks[0])):
            lhs = dh.blocks[i][j].in_ring(ring)
            rhs = a.blocks[i][j].in_ring(ring) - b.blocks[i][j].in_ring(ring)
            if lhs != rhs:
                raise MFError("homotopy certificate failed exact verification")


# -- the circle complex and kappa -------------------------------------------


def circle_complex(potential: Potential) -> MFObject:
    """Z(S^1_0) = ev_W (x) dagger(ev_W) = I_W (x) I_W^vee, a closed word."""
    iw = unit(potential)
    ev = MFObject(iw.ring, tuple(iw.tgt_vars) + tuple(iw.src_vars), (),
                  -iw.V_tgt + iw.W_src, iw.ring.zero(), iw.gens, iw.d,
                  graded=iw.graded)
    return tensor_horizontal(ev, dual(ev))


def kappa_value(circle: MFObject, element: list[Polynomial],
                potential: Potential) -> Polynomial:
    """kappa: p(x) q(x') e_i (x) e_j^* -> class of p(x) q(x) delta_{ij}."""
    back = {v.name: v.base for v in circle.ring.variables if v.base}
    total = circle.ring.zero()
    for k, g in enumerate(circle.gens):
        li, lj = g.label
        if lj != ("dual", li):
            continue
        total = total + element[k]
    collapsed = total.rename(back, circle.ring)
    return potential.groebner().normal_form(coerce_into(collapsed, potential.ring))


def kappa_section(circle: MFObject, m: Polynomial, normalized: bool = True
                  ) -> list[Polynomial]:
    """A closed chain representative with kappa-value m (up to normalization).

    With normalized=True the representative v satisfies kappa(v) = m exactly;
    the raw sum over e_i (x) e_i^* carries kappa-value 2^n m.
    """
    vec = circle.zero_element()
    count = 0
    for k, g in enumerate(circle.gens):
        li, lj = g.label
        if lj == ("dual", li):
            vec[k] = m.in_ring(circle.ring)
            count += 1
    if normalized:
        vec = [p.scale(Fraction(1, count)) for p in vec]
    return vec


def kappa_report(potential: Potential, D: int | None = None) -> dict:
    """Verify that kappa is a bijection on cohomology at a stabilized bound."""
    jac = JacobiAlgebra(potential)
    circle = circle_complex(potential)
    t = TwoPeriodic.of_object(circle)
    degW = potential.W.total_degree()
    D = D if D is not None else 2 * degW
    dims = {}
    for parity in (0, 1):
        dims[parity] = cohomology_dim(t, parity, D)
    reps = cohomology_reps(t, 0, D, expected=jac.mu)
    matrix_rows = []
    for rep in reps:
        val = kappa_value(circle, rep, potential)
        matrix_rows.append(linalg.row_from_fractions(
            {i: c for i, c in enumerate(jac.coordinates(val)) if c}))
    bijective = (
        dims[0][0] == jac.mu
        and dims[0][1]
        and dims[1][0] == 0
        and len(reps) == jac.mu
        and linalg.rank_of(matrix_rows) == jac.mu
    )
    return {
        "mu": jac.mu,
        "even": dims[0][0],
        "odd": dims[1][0],
        "stabilized": dims[0][1] and dims[1][1],
        "kappa_rank": linalg.rank_of(matrix_rows),
        "bijective_on_cohomology": bijective,
        "bound": D,
    }
