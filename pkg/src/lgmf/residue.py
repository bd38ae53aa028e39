"""Grothendieck residues against the partial-derivative sequence.

Residues are computed purely algebraically through the transformation
law: pick exponents k_i and a polynomial matrix A with
x_i^{k_i} = sum_j A_ij * d_j W, then

    <phi>_W  =  coefficient of x^(k-1)  in  phi * det(A)  mod  (x_1^{k_1}, ...).

Any valid lift yields the same value; no canonical lift is enforced.
`eliminate` extends this to polynomials with spectator variables, which
is what the adjunction formulas consume.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .jacobi import Potential
from .ring import Polynomial, PolyRing, RingError


class ResidueLift:
    """Exponents k_i and matrix A with x_i^{k_i} = sum_j A_ij * d_j W."""

    def __init__(self, potential: Potential, max_power: int = 64):
        self.potential = potential
        gb = potential.groebner()
        ring = potential.ring
        self.exponents: list[int] = []
        self.matrix: list[list[Polynomial]] = []
        for name in ring.names():
            x = ring.var(name)
            for k in range(1, max_power + 1):
                cof, rem = gb.reduce_with_cofactors(x**k)
                if rem.is_zero():
                    self.exponents.append(k)
                    self.matrix.append(cof)
                    break
            else:  # pragma: no cover - membership guaranteed for potentials
                raise RingError(f"no power of {name} in the Jacobian ideal")
        self._verify()
        self._det: Polynomial | None = None

    def _verify(self):
        ring = self.potential.ring
        jac = self.potential.jacobian()
        for name, k, row in zip(ring.names(), self.exponents, self.matrix):
            lhs = ring.var(name) ** k
            rhs = ring.zero()
            for a, g in zip(row, jac):
                rhs = rhs + a * g
            if lhs != rhs:
                raise RingError("residue lift identity violated")

    def det(self) -> Polynomial:
        if self._det is None:
            self._det = _det_expansion(self.matrix, self.potential.ring)
        return self._det


def _det_expansion(m: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    n = len(m)
    if n == 0:
        return ring.one()
    if n == 1:
        return m[0][0]
    total = ring.zero()
    sign = 1
    for j in range(n):
        if not m[0][j].is_zero():
            minor = [[row[t] for t in range(n) if t != j] for row in m[1:]]
            total = total + m[0][j].scale(sign) * _det_expansion(minor, ring)
        sign = -sign
    return total


def _truncate(p: Polynomial, positions: list[int], caps: list[int]) -> Polynomial:
    """Normal form modulo the monomial ideal (x_i^{k_i}): drop divisible terms."""
    out = {e: c for e, c in p.terms.items()
           if all(e[pos] < cap for pos, cap in zip(positions, caps))}
    return Polynomial(p.ring, out)


class ResidueCalculator:
    """Residues <phi>_W, with spectator variables allowed in `eliminate`."""

    def __init__(self, potential: Potential, lift: ResidueLift | None = None):
        self.potential = potential
        self.lift = lift or ResidueLift(potential)

    def residue(self, phi: Polynomial) -> Fraction:
        ring = self.potential.ring
        value = self.eliminate(phi.in_ring(ring))
        return value.constant_value()

    def pairing(self, phi: Polynomial, psi: Polynomial) -> Fraction:
        return self.residue(phi.in_ring(self.potential.ring) * psi.in_ring(self.potential.ring))

    def eliminate(self, phi: Polynomial) -> Polynomial:
        """Residue in the potential's variables; other variables are spectators.

        Returns a polynomial free of the potential's variables, in phi's ring.
        """
        ring = phi.ring
        pnames = self.potential.ring.names()
        for name in pnames:
            if not ring.has(name):
                raise RingError(f"residue variable {name} missing from {ring}")
        if self.potential.arity == 0:
            return phi
        det = self.lift.det().in_ring(ring)
        positions = [ring.index(n) for n in pnames]
        caps = list(self.lift.exponents)
        work = _truncate(phi * det, positions, caps)
        target = [k - 1 for k in caps]
        out: dict[tuple, Fraction] = {}
        for e, c in work.terms.items():
            if [e[p] for p in positions] == target:
                ne = list(e)
                for p in positions:
                    ne[p] = 0
                key = tuple(ne)
                s = out.get(key, Fraction(0)) + c
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return Polynomial(ring, out)


def residue(phi: Polynomial, potential: Potential) -> Fraction:
    return ResidueCalculator(potential).residue(phi)


def pairing(phi: Polynomial, psi: Polynomial, potential: Potential) -> Fraction:
    return ResidueCalculator(potential).pairing(phi, psi)


def hessian(potential: Potential) -> Polynomial:
    names = potential.ring.names()
    rows = [[potential.W.partial(a).partial(b) for b in names] for a in names]
    return _det_expansion(rows, potential.ring)


def gram_matrix(potential: Potential) -> list[list[Fraction]]:
    """Residue pairing on the Jacobi monomial basis."""
    from .jacobi import JacobiAlgebra

    jac = JacobiAlgebra(potential)
    calc = ResidueCalculator(potential)
    return [[calc.pairing(a, b) for b in jac.basis] for a in jac.basis]
