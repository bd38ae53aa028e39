"""Exact multivariate polynomials over Q with optional rational weights.

Coefficients are `fractions.Fraction` throughout; there is no floating
point anywhere in this package.  A ring fixes an ordered tuple of named
variables; the order is canonical and determines all downstream matrix
conventions.  Primed copies of variables (x -> x') keep a provenance
link to their base variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class RingError(Exception):
    pass


class _Marker:
    def __init__(self, label: str):
        self.label = label

    def __repr__(self):
        return self.label


#: q_degree of an inhomogeneous polynomial.
INHOMOGENEOUS = _Marker("INHOMOGENEOUS")
#: q_degree of the zero polynomial ("any degree"; bottom element by convention).
DEGREE_ANY = _Marker("DEGREE_ANY")


@dataclass(frozen=True)
class Variable:
    """A named ring variable, optionally weighted, optionally a marked copy.

    `base` records provenance for primed/renamed copies: x' has base "x".
    """

    name: str
    weight: Fraction | None = None
    base: str | None = None

    def __post_init__(self):
        if self.weight is not None:
            object.__setattr__(self, "weight", Fraction(self.weight))
            if self.weight <= 0:
                raise RingError(f"weight of {self.name} must be positive")

    def primed(self) -> "Variable":
        return Variable(self.name + "'", self.weight, self.base or self.name)


class PolyRing:
    """Ordered list of variables; identity of a variable is its name."""

    def __init__(self, variables: Iterable[Variable]):
        self.variables: tuple[Variable, ...] = tuple(variables)
        self._index: dict[str, int] = {}
        for i, v in enumerate(self.variables):
            if v.name in self._index:
                raise RingError(f"duplicate variable {v.name}")
            self._index[v.name] = i

    @staticmethod
    def of(*names: str, weights: Mapping[str, Fraction] | None = None) -> "PolyRing":
        ws = weights or {}
        return PolyRing(Variable(n, ws.get(n)) for n in names)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingError(f"{name} is not a variable of {self}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def variable(self, name: str) -> Variable:
        return self.variables[self.index(name)]

    def weight(self, name: str) -> Fraction:
        w = self.variable(name).weight
        if w is None:
            raise RingError(f"variable {name} carries no weight")
        return w

    def is_weighted(self) -> bool:
        return all(v.weight is not None for v in self.variables)

    def extend(self, new: Iterable[Variable]) -> "PolyRing":
        """Append variables that are not already present (by name)."""
        out = list(self.variables)
        for v in new:
            if v.name in self._index:
                old = self.variable(v.name)
                if old.weight != v.weight:
                    raise RingError(f"conflicting weight for {v.name}")
            else:
                out.append(v)
        return PolyRing(out)

    def union(self, other: "PolyRing") -> "PolyRing":
        return self.extend(other.variables)

    def fresh_name(self, stem: str) -> str:
        if stem not in self._index:
            return stem
        k = 1
        while f"{stem}_{k}" in self._index:
            k += 1
        return f"{stem}_{k}"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {} if c == 0 else {(0,) * self.arity: c})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.arity
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "Polynomial":
        e = [0] * self.arity
        for n, k in exps.items():
            e[self.index(n)] = k
        c = Fraction(coeff)
        return Polynomial(self, {tuple(e): c} if c else {})

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return "Q[" + ",".join(self.names()) + "]"


class Polynomial:
    """Sparse terms: exponent tuple (one entry per ring variable) -> Fraction."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[tuple[int, ...], Fraction]):
        self.ring = ring
        self.terms = terms

    # -- construction helpers ------------------------------------------

    def in_ring(self, ring: PolyRing) -> "Polynomial":
        """Embed into a ring containing all variables of this one."""
        if ring == self.ring:
            return self
        pos = [ring.index(n) for n in self.ring.names()]
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * ring.arity
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return Polynomial(ring, out)

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise RingError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def variables_used(self) -> set[str]:
        names = self.ring.names()
        used: set[str] = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(names[i])
        return used

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError("ring mismatch; embed explicitly via in_ring")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise RingError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- substitution / evaluation --------------------------------------

    def substitute(self, assignment: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials; all images must share one ring."""
        if not assignment:
            return self
        target = next(iter(assignment.values())).ring
        images: list[Polynomial] = []
        for v in self.ring.names():
            if v in assignment:
                img = assignment[v]
                if img.ring != target:
                    raise RingError("substitution images live in different rings")
                images.append(img)
            else:
                images.append(target.var(v))
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str], ring: PolyRing) -> "Polynomial":
        """Variable-to-variable substitution into `ring` (collapses allowed)."""
        tgt_pos = []
        for n in self.ring.names():
            tgt_pos.append(ring.index(mapping.get(n, n)))
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * ring.arity
            for p, k in zip(tgt_pos, e):
                ne[p] += k
            key = tuple(ne)
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return Polynomial(ring, out)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        names = self.ring.names()
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= Fraction(point[names[i]]) ** k
            total += v
        return total

    def partial(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, out)

    # -- degrees ---------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=0)

    def q_degree(self):
        """Common weighted degree of all terms, INHOMOGENEOUS, or DEGREE_ANY."""
        if not self.terms:
            return DEGREE_ANY
        weights = [self.ring.weight(n) for n in self.ring.names()]
        degs = {sum((w * k for w, k in zip(weights, e)), Fraction(0)) for e in self.terms}
        if len(degs) > 1:
            return INHOMOGENEOUS
        return degs.pop()

    # -- printing --------------------------------------------------------

    def __repr__(self):
        return self.to_text()

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names()
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        parts = []
        for e in keys:
            c = self.terms[e]
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            body = "*".join(factors)
            if not body:
                piece = str(c)
            elif c == 1:
                piece = body
            elif c == -1:
                piece = "-" + body
            else:
                piece = f"{c}*{body}"
            parts.append(piece)
        text = parts[0]
        for piece in parts[1:]:
            text += piece if piece.startswith("-") else "+" + piece
        return text


def divided_difference(
    p: Polynomial, src: list[str], dst: list[str], i: int
) -> Polynomial:
    """The i-th divided difference of p from variables src to their copies dst.

    Returns  [p(src_1..src_{i-1}, dst_i, .., dst_n) - p(src_1..src_i, dst_{i+1}, ..)]
    divided by (dst_i - src_i), an exact polynomial quotient.  `p` must be a
    polynomial in the `src` variables (spectator variables are untouched);
    `i` is 1-based as in the usual notation.
    """
    if len(src) != len(dst):
        raise RingError("src/dst lists differ in length")
    if not 1 <= i <= len(src):
        raise RingError("divided difference index out of range")
    ring = p.ring
    hi = {src[j]: src[j] if j < i - 1 else dst[j] for j in range(len(src))}
    lo = {src[j]: src[j] if j < i else dst[j] for j in range(len(src))}
    num = p.rename(hi, ring) - p.rename(lo, ring)
    den = ring.var(dst[i - 1]) - ring.var(src[i - 1])
    return exact_div(num, den)


def exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact polynomial division; raises if the division leaves a remainder."""
    if den.is_zero():
        raise RingError("division by zero polynomial")
    ring = num.ring
    if den.ring != ring:
        raise RingError("ring mismatch in exact_div")
    lead = _leading(den)
    quotient = ring.zero()
    rem = num
    while not rem.is_zero():
        le, lc = _leading_term(rem)
        de, dc = lead
        q = tuple(a - b for a, b in zip(le, de))
        if any(k < 0 for k in q):
            raise RingError("non-exact polynomial division")
        mono = Polynomial(ring, {q: lc / dc})
        quotient = quotient + mono
        rem = rem - mono * den
    return quotient


def _grevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-k for k in reversed(e)))


def _leading_term(p: Polynomial):
    e = max(p.terms, key=_grevlex_key)
    return e, p.terms[e]


def _leading(p: Polynomial):
    return _leading_term(p)


# -- text format -----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*'*)|(?P<int>\d+)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RingError(f"cannot tokenize polynomial text at: {text[pos:]!r}")
        if m.lastgroup:
            tokens.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], ring: PolyRing):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> Polynomial:
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            node = -self.term()
        else:
            node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self) -> Polynomial:
        node = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.factor()
            if op == "*":
                node = node * rhs
            else:
                if not rhs.is_constant():
                    raise RingError("division only by rational constants")
                node = node.scale(Fraction(1) / rhs.constant_value())
        return node

    def factor(self) -> Polynomial:
        node = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise RingError("exponent must be a nonnegative integer")
            node = node ** int(val)
        return node

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "name":
            return self.ring.var(val)
        if kind == "int":
            return self.ring.const(int(val))
        if (kind, val) == ("op", "("):
            node = self.expr()
            if self.take() != ("op", ")"):
                raise RingError("unbalanced parentheses")
            return node
        if (kind, val) == ("op", "-"):
            return -self.atom()
        raise RingError(f"unexpected token {val!r}")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    parser = _Parser(_tokenize(text), ring)
    p = parser.expr()
    if parser.pos != len(parser.tokens):
        raise RingError("trailing input after polynomial")
    return p


def variable_names_in(text: str) -> list[str]:
    """Variable names in order of first appearance."""
    seen: list[str] = []
    for kind, val in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


def parse_weights(text: str) -> dict[str, Fraction]:
    """Parse a weight declaration like  "x=2/3, y=1"."""
    out: dict[str, Fraction] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise RingError(f"bad weight declaration {chunk!r}")
        name, val = chunk.split("=", 1)
        out[name.strip()] = Fraction(val.strip())
    return out
