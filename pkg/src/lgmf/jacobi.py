"""Potentials, Jacobi algebras and the central charge."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .groebner import GroebnerBasis
from .ring import (
    DEGREE_ANY,
    Polynomial,
    PolyRing,
    RingError,
    Variable,
    parse_polynomial,
    parse_weights,
    variable_names_in,
)


class NotAPotentialError(Exception):
    """Raised when the Jacobi algebra fails to be finite-dimensional."""

    def __init__(self, message: str, variable: str | None = None):
        super().__init__(message)
        self.variable = variable


class Potential:
    """A polynomial with finite-dimensional Jacobi algebra.

    In graded mode every variable carries a positive rational weight and
    W is required to have weighted degree exactly 2.
    """

    def __init__(self, ring: PolyRing, W: Polynomial, graded: bool = False,
                 validate: bool = True):
        if W.ring != ring:
            raise RingError("potential not in its stated ring")
        self.ring = ring
        self.W = W
        self.graded = graded
        self._groebner: GroebnerBasis | None = None
        if graded:
            if not ring.is_weighted():
                raise RingError("graded potential needs weighted variables")
            if ring.arity and not W.is_zero() and W.q_degree() != 2:
                raise NotAPotentialError(
                    f"graded potential must have q-degree 2, got {W.q_degree()}"
                )
        if validate and ring.arity:
            self.groebner()  # raises NotAPotentialError if not isolated

    @property
    def arity(self) -> int:
        return self.ring.arity

    def jacobian(self) -> list[Polynomial]:
        return [self.W.partial(n) for n in self.ring.names()]

    def groebner(self) -> GroebnerBasis:
        if self._groebner is None:
            gens = self.jacobian()
            if all(g.is_zero() for g in gens):
                raise NotAPotentialError("all partial derivatives vanish")
            gb = GroebnerBasis(gens)
            bad = gb.missing_pure_power_variable()
            if bad is not None:
                raise NotAPotentialError(
                    f"Jacobi algebra is infinite-dimensional (no pure power of {bad} "
                    "among leading terms)",
                    variable=bad,
                )
            self._groebner = gb
        return self._groebner

    def __repr__(self):
        tag = "graded " if self.graded else ""
        return f"{tag}potential {self.W.to_text()} in {self.ring}"


class JacobiAlgebra:
    """Monomial basis, dimension and multiplication table of Jac_W."""

    def __init__(self, potential: Potential):
        self.potential = potential
        gb = potential.groebner()
        mons = gb.standard_monomials()
        if mons is None:  # pragma: no cover - Potential already validated
            raise NotAPotentialError("infinite-dimensional quotient")
        self.groebner = gb
        self.basis_exponents = mons
        self.basis = [Polynomial(potential.ring, {e: Fraction(1)}) for e in mons]
        self.dimension = len(mons)
        self._index = {e: i for i, e in enumerate(mons)}

    @property
    def mu(self) -> int:
        return self.dimension

    def normal_form(self, p: Polynomial) -> Polynomial:
        return self.groebner.normal_form(p)

    def coordinates(self, p: Polynomial) -> list[Fraction]:
        """Coordinates of the Jacobi class of p over the monomial basis."""
        nf = self.normal_form(p)
        out = [Fraction(0)] * self.dimension
        for e, c in nf.terms.items():
            out[self._index[e]] = c
        return out

    def multiplication_table(self) -> list[list[list[Fraction]]]:
        """table[i][j] = coordinates of basis[i] * basis[j]."""
        return [
            [self.coordinates(a * b) for b in self.basis] for a in self.basis
        ]

    def basis_q_degrees(self) -> list[Fraction]:
        return [m.q_degree() for m in self.basis]


def central_charge(potential: Potential) -> Fraction:
    """c(W) = 3 * sum_i (1 - |x_i|) for a graded potential."""
    if not potential.graded:
        raise RingError("central charge needs a graded potential")
    total = Fraction(0)
    for v in potential.ring.variables:
        total += 1 - v.weight
    return 3 * total


def stabilize(potential: Potential, name: str | None = None) -> Potential:
    """Knoerrer-type stabilization W -> W + y^2 in a fresh variable y."""
    stem = name or "y"
    fresh = potential.ring.fresh_name(stem)
    weight = Fraction(1) if potential.graded else None
    ring = potential.ring.extend([Variable(fresh, weight)])
    W = potential.W.in_ring(ring) + ring.var(fresh) ** 2
    return Potential(ring, W, graded=potential.graded)


def infer_degree2_weights(ring: PolyRing, W: Polynomial) -> dict[str, Fraction]:
    """Weights making W quasi-homogeneous of degree 2, if uniquely determined.

    Solves the linear system  sum_i e_i * w_i = 2  over the exponent vectors
    of W; raises unless it has a unique positive solution.
    """
    n = ring.arity
    rows = [list(e) for e in W.terms]
    if not rows:
        raise RingError("cannot infer weights for the zero potential")
    # Gaussian elimination over Q on [rows | 2]
    aug = [[Fraction(k) for k in row] + [Fraction(2)] for row in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        pivot_row = None
        for rr in range(r, len(aug)):
            if aug[rr][c]:
                pivot_row = rr
                break
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        piv = aug[r][c]
        aug[r] = [v / piv for v in aug[r]]
        for rr in range(len(aug)):
            if rr != r and aug[rr][c]:
                f = aug[rr][c]
                aug[rr] = [a - f * b for a, b in zip(aug[rr], aug[r])]
        pivots.append((r, c))
        r += 1
    for rr in range(r, len(aug)):
        if aug[rr][n]:
            raise RingError("no grading makes this potential degree 2")
    if len(pivots) < n:
        raise RingError("degree-2 grading is not unique; specify weights explicitly")
    weights: dict[str, Fraction] = {}
    names = ring.names()
    for rr, c in pivots:
        w = aug[rr][n]
        if w <= 0:
            raise RingError("inferred weights are not positive")
        weights[names[c]] = w
    return weights


def parse_potential(text: str, graded: bool = False,
                    weights: Mapping[str, Fraction] | None = None) -> Potential:
    """Parse `W` or `W ; weights: x=2/3, ...` into a Potential.

    In graded mode without explicit weights, the unique grading giving W
    degree 2 is inferred when possible.
    """
    declared: dict[str, Fraction] = dict(weights or {})
    if ";" in text:
        body, _, tail = text.partition(";")
        tail = tail.strip()
        if tail.startswith("weights:"):
            declared.update(parse_weights(tail[len("weights:"):]))
            graded = True
        elif tail:
            raise RingError(f"unrecognized potential suffix {tail!r}")
        text = body
    names = variable_names_in(text)
    plain = PolyRing.of(*names)
    W = parse_polynomial(text, plain)
    if not graded and not declared:
        return Potential(plain, W)
    if not declared:
        declared = infer_degree2_weights(plain, W)
    missing = [n for n in names if n not in declared]
    if missing:
        raise RingError(f"missing weights for {missing}")
    ring = PolyRing(Variable(n, declared[n]) for n in names)
    return Potential(ring, W.in_ring(ring), graded=True)
