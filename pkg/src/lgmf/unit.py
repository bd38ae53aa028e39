"""The unit matrix factorisation I_W and its theta calculus.

Generators of I_W are indexed by subsets of {1..n} stored as bitmasks,
ordered by theta-degree and lexicographically within a degree.  Every
Koszul sign in this module is derived from the two elementary routines
`wedge` and `contract`; there is no second source of sign conventions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .jacobi import Potential
from .mf import (
    Generator,
    MatrixMorphism,
    MFError,
    MFObject,
    SubstMorphism,
    mat_zero,
    tensor_horizontal,
)
from .ring import Polynomial, PolyRing, RingError, Variable, divided_difference


def theta_masks(n: int) -> list[int]:
    """All subset bitmasks, theta-degree ascending, lexicographic within."""
    out = []
    for l in range(n + 1):
        for combo in combinations(range(n), l):
            mask = 0
            for a in combo:
                mask |= 1 << a
            out.append(mask)
    return out


def mask_indices(mask: int) -> list[int]:
    return [a for a in range(mask.bit_length()) if mask >> a & 1]


def wedge(i: int, mask: int) -> tuple[int, int] | None:
    """theta_i wedged from the left: (sign, new mask) or None if i in mask."""
    if mask >> i & 1:
        return None
    below = bin(mask & ((1 << i) - 1)).count("1")
    return ((-1) ** below, mask | 1 << i)


def contract(i: int, mask: int) -> tuple[int, int] | None:
    """theta_i^* by the Koszul Leibniz rule: (sign, new mask) or None."""
    if not mask >> i & 1:
        return None
    below = bin(mask & ((1 << i) - 1)).count("1")
    return ((-1) ** below, mask & ~(1 << i))


def perm_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def unit(potential: Potential, primes: list[str] | None = None) -> MFObject:
    """I_W over k[x, x'], a factorisation of W(x') - W(x).

    The unprimed variables are source-facing, the primed copies target-facing.
    """
    ring0 = potential.ring
    n = ring0.arity
    src = list(ring0.names())
    if primes is None:
        primes = [nm + "'" for nm in src]
    if len(primes) != n:
        raise RingError("need one primed name per variable")
    ring = ring0.extend(
        Variable(p, ring0.variable(s).weight, s) for s, p in zip(src, primes)
    )
    W = potential.W.in_ring(ring)
    Wp = W.rename(dict(zip(src, primes)), ring)
    graded = potential.graded
    masks = theta_masks(n)
    idx = {m: i for i, m in enumerate(masks)}
    gens = []
    for m in masks:
        q = None
        if graded:
            q = sum((ring.weight(src[a]) - 1 for a in mask_indices(m)), Fraction(0))
        gens.append(Generator(bin(m).count("1") % 2, q, ("theta", m)))
    diffs = [divided_difference(W, src, primes, i + 1) for i in range(n)]
    d = mat_zero(len(masks), len(masks), ring)
    for j, m in enumerate(masks):
        for i in range(n):
            w = wedge(i, m)
            if w is not None:
                sign, nm = w
                d[idx[nm]][j] = d[idx[nm]][j] + diffs[i].scale(sign)
            c = contract(i, m)
            if c is not None:
                sign, nm = c
                lin = ring.var(primes[i]) - ring.var(src[i])
                d[idx[nm]][j] = d[idx[nm]][j] + lin.scale(sign)
    return MFObject(ring, src, primes, W, Wp, gens, d, graded=graded)


def theta_operator(iw: MFObject, i: int, kind: str) -> MatrixMorphism:
    """The operator theta_i (wedge) or theta_i^* (contract) on a unit."""
    n = len(iw.src_vars)
    blocks = mat_zero(iw.rank, iw.rank, iw.ring)
    for j, g in enumerate(iw.gens):
        _, mask = g.label
        res = wedge(i, mask) if kind == "wedge" else contract(i, mask)
        if res is None:
            continue
        sign, nm = res
        blocks[iw.gen_index(("theta", nm))][j] = iw.ring.const(sign)
    return MatrixMorphism(iw, iw, blocks, parity=1)


# -- unitors -----------------------------------------------------------------


def unit_on_left(x: MFObject) -> tuple[MFObject, MFObject, MFObject, dict[str, str]]:
    """(I_V glued to x's target, composite I_V (x) X, retargeted X, renaming)."""
    iv, composite, primes = _left_data(x)
    mapping = dict(zip(x.tgt_vars, primes))
    return iv, composite, x.rename(mapping), mapping


def _fresh_primes(x: MFObject, names: tuple[str, ...]) -> list[str]:
    taken = set(x.ring.names())
    primes = []
    for nm in names:
        p = nm + "'"
        while p in taken:
            p += "'"
        primes.append(p)
        taken.add(p)
    return primes


def _left_data(x: MFObject):
    sub = PolyRing([x.ring.variable(n) for n in x.tgt_vars])
    v = Potential(sub, _project(x.V_tgt, sub), graded=x.graded, validate=False)
    primes = _fresh_primes(x, x.tgt_vars)
    iv = unit(v, primes)
    return iv, tensor_horizontal(iv, x), primes


def unit_on_right(x: MFObject) -> tuple[MFObject, MFObject, MFObject, dict[str, str]]:
    """(I_W glued to x's source, composite X (x) I_W, resourced X, renaming)."""
    primes = _fresh_primes(x, x.src_vars)
    primed_ring = PolyRing(
        [Variable(p, x.ring.variable(s).weight, s) for s, p in zip(x.src_vars, primes)]
    )
    w = Potential(
        primed_ring,
        _project(x.W_src, PolyRing([x.ring.variable(n) for n in x.src_vars]))
        .rename(dict(zip(x.src_vars, primes)), primed_ring),
        graded=x.graded, validate=False,
    )
    # the unit runs from the primed copy to x's own source variables
    iw = unit(w, list(x.src_vars))
    composite = tensor_horizontal(x, iw)
    mapping = dict(zip(x.src_vars, primes))
    return iw, composite, x.rename(mapping), mapping


def _project(p: Polynomial, sub: PolyRing) -> Polynomial:
    from .mf import coerce_into

    return coerce_into(p, sub)


def lambda_morphism(x: MFObject, composite: MFObject | None = None,
                    retargeted: MFObject | None = None,
                    mapping: dict[str, str] | None = None) -> SubstMorphism:
    """lambda_X: I_V (x) X -> X, projection to theta-degree zero.

    Internal middle variables collapse onto the outer target copy.
    """
    if composite is None:
        _, composite, retargeted, mapping = unit_on_left(x)
    subst = {old: new for old, new in mapping.items()}
    blocks = mat_zero(retargeted.rank, composite.rank, retargeted.ring)
    for j, g in enumerate(composite.gens):
        (kind, mask), xlabel = g.label
        if mask != 0:
            continue
        i = retargeted.gen_index(xlabel)
        blocks[i][j] = retargeted.ring.one()
    return SubstMorphism(composite, retargeted, subst, blocks, parity=0,
                         qdeg=Fraction(0) if x.graded else None)


def rho_morphism(x: MFObject, composite: MFObject | None = None,
                 resourced: MFObject | None = None,
                 mapping: dict[str, str] | None = None) -> SubstMorphism:
    """rho_X: X (x) I_W -> X, projection to theta-degree zero."""
    if composite is None:
        _, composite, resourced, mapping = unit_on_right(x)
    subst = {old: new for old, new in mapping.items()}
    blocks = mat_zero(resourced.rank, composite.rank, resourced.ring)
    for j, g in enumerate(composite.gens):
        xlabel, (kind, mask) = g.label
        if mask != 0:
            continue
        i = resourced.gen_index(xlabel)
        blocks[i][j] = resourced.ring.one()
    return SubstMorphism(composite, resourced, subst, blocks, parity=0,
                         qdeg=Fraction(0) if x.graded else None)


def _dd_matrices(x: MFObject, names: list[str], primes: list[str],
                 ring: PolyRing):
    """Entrywise divided differences of d_X from `names` to `primes`."""
    out = []
    lifted = [[e.in_ring(ring) for e in row] for row in x.d]
    for i in range(len(names)):
        out.append([[divided_difference(e, names, primes, i + 1)
                     for e in row] for row in lifted])
    return out


def _ordered_product(mats, order: list[int], rank: int, ring: PolyRing):
    from .mf import mat_identity, mat_mul

    prod = mat_identity(rank, ring)
    for a in order:
        prod = mat_mul(prod, mats[a], ring)
    return prod


def lambda_inv_morphism(x: MFObject, composite: MFObject | None = None,
                        retargeted: MFObject | None = None,
                        mapping: dict[str, str] | None = None) -> MatrixMorphism:
    """Explicit homotopy inverse of lambda_X, as a polynomial matrix."""
    if composite is None:
        _, composite, retargeted, mapping = unit_on_left(x)
    ring = composite.ring
    znames = list(x.tgt_vars)
    primes = [mapping[n] for n in znames]
    dd = _dd_matrices(x, znames, primes, ring)
    blocks = mat_zero(composite.rank, retargeted.rank, ring)
    for mask in theta_masks(len(znames)):
        inds = mask_indices(mask)
        # descending factor order: dd[a_l] ... dd[a_1]
        prod = _ordered_product(dd, list(reversed(inds)), x.rank, ring)
        for i in range(x.rank):
            for j in range(x.rank):
                if prod[j][i].is_zero():
                    continue
                row = composite.gen_index((("theta", mask), x.gens[j].label))
                blocks[row][i] = blocks[row][i] + prod[j][i]
    return MatrixMorphism(retargeted, composite, blocks, parity=0,
                          qdeg=Fraction(0) if x.graded else None)


def rho_inv_morphism(x: MFObject, composite: MFObject | None = None,
                     resourced: MFObject | None = None,
                     mapping: dict[str, str] | None = None) -> MatrixMorphism:
    """Explicit homotopy inverse of rho_X, as a polynomial matrix."""
    if composite is None:
        _, composite, resourced, mapping = unit_on_right(x)
    ring = composite.ring
    xnames = list(x.src_vars)
    primes = [mapping[n] for n in xnames]
    dd = _dd_matrices(x, xnames, primes, ring)
    blocks = mat_zero(composite.rank, resourced.rank, ring)
    for mask in theta_masks(len(xnames)):
        inds = mask_indices(mask)
        l = len(inds)
        prod = _ordered_product(dd, inds, x.rank, ring)  # ascending order
        base_sign = (-1) ** (l * (l - 1) // 2)
        for i in range(x.rank):
            sign = base_sign * ((-1) ** (l * x.gens[i].parity))
            for j in range(x.rank):
                if prod[j][i].is_zero():
                    continue
                row = composite.gen_index((x.gens[j].label, ("theta", mask)))
                blocks[row][i] = blocks[row][i] + prod[j][i].scale(sign)
    return MatrixMorphism(resourced, composite, blocks, parity=0,
                          qdeg=Fraction(0) if x.graded else None)


def end_unit_to_jacobi(zeta, potential: Potential) -> Polynomial:
    """Jacobi class of a closed even endomorphism of I_W.

    Reads off the theta-degree-zero diagonal coefficient, identifies the
    primed copy with the unprimed one and reduces to normal form.
    """
    iw = zeta.src
    mat = zeta if isinstance(zeta, MatrixMorphism) else zeta.to_matrix()
    i0 = iw.gen_index(("theta", 0))
    entry = mat.blocks[i0][i0]
    back = {p: s for s, p in zip(iw.src_vars, iw.tgt_vars)}
    entry = entry.rename(back, iw.ring)
    from .mf import coerce_into

    entry = coerce_into(entry, potential.ring)
    return potential.groebner().normal_form(entry)


def unit_split(joint: MFObject, left: MFObject, right: MFObject,
               product: MFObject) -> MatrixMorphism:
    """I_{W1+W2} -> I_{W1} (box) I_{W2}: split theta monomials by block.

    Ascending index order makes every split sign +1; the map is a strict
    isomorphism of matrix factorisations (a permutation of generators).
    """
    n1 = len(left.src_vars)
    blocks = mat_zero(product.rank, joint.rank, product.ring)
    for j, g in enumerate(joint.gens):
        _, mask = g.label
        m1 = mask & ((1 << n1) - 1)
        m2 = mask >> n1
        row = product.gen_index((("theta", m1), ("theta", m2)))
        blocks[row][j] = product.ring.one()
    return MatrixMorphism(joint, product, blocks, parity=0,
                          qdeg=Fraction(0) if joint.graded else None)
