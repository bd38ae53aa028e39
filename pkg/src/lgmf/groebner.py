"""Buchberger Groebner bases over Q with cofactor tracking.

Systems in this package are small (Jacobian ideals of desk-scale
potentials), so a plain Buchberger loop with the coprime-lcm criterion
and full interreduction is entirely adequate.  Cofactors with respect
to the original generators are carried through the whole computation;
they feed the residue lifts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .ring import Polynomial, PolyRing, RingError

Exponent = tuple[int, ...]
OrderKey = Callable[[Exponent], object]


def order_key(order: str, arity: int, blocks: tuple[int, ...] | None = None) -> OrderKey:
    """Key function for a monomial order tag: larger key = larger monomial.

    `blocks` optionally marks a block order: exponents are compared first by
    the order restricted to the leading block of variable positions.
    """
    if order == "lex":
        plain = lambda e: e
    elif order == "deglex":
        plain = lambda e: (sum(e), e)
    elif order == "degrevlex":
        plain = lambda e: (sum(e), tuple(-k for k in reversed(e)))
    else:
        raise RingError(f"unknown monomial order {order!r}")
    if blocks is None:
        return plain
    head = list(blocks)
    tail = [i for i in range(arity) if i not in blocks]

    def key(e: Exponent):
        eh = tuple(e[i] for i in head)
        et = tuple(e[i] for i in tail)
        return (plain(eh), plain(et))

    return key


def leading_term(p: Polynomial, key: OrderKey) -> tuple[Exponent, Fraction]:
    if p.is_zero():
        raise RingError("zero polynomial has no leading term")
    e = max(p.terms, key=key)
    return e, p.terms[e]


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _quot(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def divmod_poly(
    p: Polynomial, divisors: Sequence[Polynomial], key: OrderKey
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: p = sum_i q_i * divisors[i] + r.

    No monomial of r is divisible by a leading monomial of any divisor.
    """
    ring = p.ring
    quots = [ring.zero() for _ in divisors]
    rem = ring.zero()
    leads = [leading_term(g, key) for g in divisors]
    work = p
    while not work.is_zero():
        e, c = leading_term(work, key)
        for i, (le, lc) in enumerate(leads):
            if _divides(le, e):
                mono = Polynomial(ring, {_quot(e, le): c / lc})
                quots[i] = quots[i] + mono
                work = work - mono * divisors[i]
                break
        else:
            mono = Polynomial(ring, {e: c})
            rem = rem + mono
            work = work - mono
    return quots, rem


class GroebnerBasis:
    """Reduced Groebner basis with cofactors over the original generators."""

    def __init__(self, generators: Sequence[Polynomial], order: str = "degrevlex",
                 blocks: tuple[int, ...] | None = None):
        gens = [g for g in generators if not g.is_zero()]
        if not gens:
            raise RingError("need at least one nonzero generator")
        self.ring: PolyRing = gens[0].ring
        for g in gens:
            if g.ring != self.ring:
                raise RingError("generators live in different rings")
        self.order = order
        self.key = order_key(order, self.ring.arity, blocks)
        self.original: list[Polynomial] = list(gens)
        self.basis: list[Polynomial] = []
        #: cofactors[i][j]: basis[i] = sum_j cofactors[i][j] * original[j]
        self.cofactors: list[list[Polynomial]] = []
        self._buchberger()
        self._reduce()

    # -- construction ------------------------------------------------------

    def _buchberger(self):
        ring = self.ring
        G: list[Polynomial] = []
        C: list[list[Polynomial]] = []
        for i, g in enumerate(self.original):
            row = [ring.zero() for _ in self.original]
            row[i] = ring.one()
            G.append(g)
            C.append(row)
        pairs = [(i, j) for i in range(len(G)) for j in range(i)]
        while pairs:
            pairs.sort(key=lambda ij: sum(_lcm(leading_term(G[ij[0]], self.key)[0],
                                               leading_term(G[ij[1]], self.key)[0])),
                       reverse=True)
            i, j = pairs.pop()
            ei, ci = leading_term(G[i], self.key)
            ej, cj = leading_term(G[j], self.key)
            l = _lcm(ei, ej)
            if l == tuple(a + b for a, b in zip(ei, ej)):
                continue  # coprime leading monomials: S-poly reduces to zero
            mi = Polynomial(ring, {_quot(l, ei): Fraction(1) / ci})
            mj = Polynomial(ring, {_quot(l, ej): Fraction(1) / cj})
            s = mi * G[i] - mj * G[j]
            srow = [mi * a - mj * b for a, b in zip(C[i], C[j])]
            quots, rem = divmod_poly(s, G, self.key)
            if rem.is_zero():
                continue
            for q, row in zip(quots, C):
                if not q.is_zero():
                    srow = [a - q * b for a, b in zip(srow, row)]
            k = len(G)
            G.append(rem)
            C.append(srow)
            pairs.extend((k, t) for t in range(k))
        self.basis = G
        self.cofactors = C

    def _reduce(self):
        # interreduce: monic generators, each fully reduced against the others
        changed = True
        while changed:
            changed = False
            for i in range(len(self.basis)):
                others = self.basis[:i] + self.basis[i + 1 :]
                rows = self.cofactors[:i] + self.cofactors[i + 1 :]
                if not others:
                    continue
                quots, rem = divmod_poly(self.basis[i], others, self.key)
                if rem.is_zero():
                    del self.basis[i]
                    del self.cofactors[i]
                    changed = True
                    break
                if rem != self.basis[i]:
                    row = self.cofactors[i]
                    for q, orow in zip(quots, rows):
                        if not q.is_zero():
                            row = [a - q * b for a, b in zip(row, orow)]
                    self.basis[i] = rem
                    self.cofactors[i] = row
                    changed = True
        for i, g in enumerate(self.basis):
            _, lc = leading_term(g, self.key)
            self.basis[i] = g.scale(Fraction(1) / lc)
            self.cofactors[i] = [c.scale(Fraction(1) / lc) for c in self.cofactors[i]]
        order = sorted(range(len(self.basis)),
                       key=lambda i: self.key(leading_term(self.basis[i], self.key)[0]))
        self.basis = [self.basis[i] for i in order]
        self.cofactors = [self.cofactors[i] for i in order]

    # -- queries -------------------------------------------------------------

    def normal_form(self, p: Polynomial) -> Polynomial:
        _, rem = divmod_poly(p.in_ring(self.ring), self.basis, self.key)
        return rem

    def reduce_with_cofactors(self, p: Polynomial) -> tuple[list[Polynomial], Polynomial]:
        """p = sum_j c_j * original[j] + r with r the normal form."""
        quots, rem = divmod_poly(p.in_ring(self.ring), self.basis, self.key)
        out = [self.ring.zero() for _ in self.original]
        for q, row in zip(quots, self.cofactors):
            if not q.is_zero():
                out = [a + q * b for a, b in zip(out, row)]
        return out, rem

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def leading_exponents(self) -> list[Exponent]:
        return [leading_term(g, self.key)[0] for g in self.basis]

    def standard_monomials(self) -> list[Exponent] | None:
        """Monomial basis of the quotient, or None if infinite-dimensional.

        Finite-dimensionality is the staircase criterion: every variable must
        have a pure power among the leading exponents.
        """
        leads = self.leading_exponents()
        n = self.ring.arity
        caps = [None] * n
        for e in leads:
            nz = [i for i, k in enumerate(e) if k]
            if len(nz) == 1:
                i = nz[0]
                if caps[i] is None or e[i] < caps[i]:
                    caps[i] = e[i]
        if any(c is None for c in caps):
            return None
        out: list[Exponent] = []

        def rec(prefix: list[int], i: int):
            if i == n:
                e = tuple(prefix)
                if not any(_divides(le, e) for le in leads):
                    out.append(e)
                return
            for k in range(caps[i]):
                rec(prefix + [k], i + 1)

        rec([], 0)
        out.sort(key=self.key)
        return out

    def missing_pure_power_variable(self) -> str | None:
        leads = self.leading_exponents()
        for i, name in enumerate(self.ring.names()):
            if not any(e[i] and sum(e) == e[i] for e in leads):
                return name
        return None
