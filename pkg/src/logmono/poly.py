"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from exponent tuples to nonzero Fractions,
together with an ordered tuple of variable names (the ambient).  All
operations are pure; values are treated as immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class AmbientMismatchError(ValueError):
    """Two polynomials live over different variable lists."""


class Monomial:
    """An exponent vector aligned with an ambient variable list."""

    __slots__ = ("exponents",)

    def __init__(self, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        self.exponents = exps

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial({self.exponents})"

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        return Monomial(a - b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(max(a, b) for a, b in zip(self.exponents, other.exponents))

    def gcd(self, other: "Monomial") -> "Monomial":
        return Monomial(min(a, b) for a, b in zip(self.exponents, other.exponents))

    def is_one(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def as_string(self, ambient: Sequence[str]) -> str:
        factors = []
        for v, e in zip(ambient, self.exponents):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        return "*".join(factors) if factors else "1"


def grevlex_key(exps: tuple[int, ...]):
    # Graded reverse lexicographic: higher key = larger monomial.
    return (sum(exps), tuple(-e for e in reversed(exps)))


class Polynomial:
    """Sparse polynomial with Fraction coefficients, canonical form.

    ``terms`` maps exponent tuples to nonzero coefficients; the zero
    polynomial has an empty term mapping.
    """

    __slots__ = ("terms", "ambient")

    def __init__(self, terms: Mapping[tuple[int, ...], Fraction], ambient: Sequence[str]):
        amb = tuple(ambient)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(amb):
                raise ValueError(f"exponent tuple {exps} does not match ambient {amb}")
            clean[exps] = c
        self.terms = clean
        self.ambient = amb

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ambient: Sequence[str]) -> "Polynomial":
        return cls({}, ambient)

    @classmethod
    def constant(cls, c, ambient: Sequence[str]) -> "Polynomial":
        amb = tuple(ambient)
        return cls({(0,) * len(amb): Fraction(c)}, amb)

    @classmethod
    def variable(cls, name: str, ambient: Sequence[str]) -> "Polynomial":
        amb = tuple(ambient)
        if name not in amb:
            raise ValueError(f"unknown variable {name!r} in ambient {amb}")
        i = amb.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(amb)))
        return cls({exps: Fraction(1)}, amb)

    @classmethod
    def from_monomial(cls, m: Monomial, ambient: Sequence[str], coeff=1) -> "Polynomial":
        return cls({m.exponents: Fraction(coeff)}, ambient)

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ambient), Fraction(0))

    @property
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ambient == other.ambient
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def _check_ambient(self, other: "Polynomial"):
        if self.ambient != other.ambient:
            raise AmbientMismatchError(
                f"ambient mismatch: {self.ambient} vs {other.ambient}"
            )

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ambient(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, Fraction(0)) + c
            if s == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Polynomial(terms, self.ambient)

    def __neg__(self) -> "Polynomial":
        return Polynomial({e: -c for e, c in self.terms.items()}, self.ambient)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial(
                {e: c * other for e, c in self.terms.items()}, self.ambient
            )
        self._check_ambient(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(out, self.ambient)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.ambient)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and evaluation ----------------------------------------

    def partial_derivative(self, var: str) -> "Polynomial":
        if var not in self.ambient:
            raise ValueError(f"unknown variable {var!r}")
        i = self.ambient.index(var)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            if exps[i] == 0:
                continue
            e = list(exps)
            coeff = c * e[i]
            e[i] -= 1
            e = tuple(e)
            s = out.get(e, Fraction(0)) + coeff
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(out, self.ambient)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.ambient):
            raise ValueError(
                f"point of length {len(point)} for ambient of length {len(self.ambient)}"
            )
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(pt, exps):
                if e:
                    v *= x**e
            total += v
        return total

    def substitute(self, values: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending each ambient variable to a polynomial.

        Every ambient variable must be mapped; all images must share one
        ambient, which becomes the ambient of the result.
        """
        images = [values[v] for v in self.ambient]
        target = images[0].ambient if images else ()
        out = Polynomial.zero(target)
        for exps, c in self.terms.items():
            term = Polynomial.constant(c, target)
            for img, e in zip(images, exps):
                if e:
                    term = term * img**e
            out = out + term
        return out

    # -- monomial structure ---------------------------------------------

    def monomial_content(self) -> Monomial:
        """The largest monomial dividing every term."""
        if not self.terms:
            raise ValueError("monomial content of the zero polynomial")
        exps = None
        for e in self.terms:
            exps = e if exps is None else tuple(min(a, b) for a, b in zip(exps, e))
        return Monomial(exps)

    def divide_by_monomial(self, m: Monomial) -> "Polynomial":
        out = {}
        for exps, c in self.terms.items():
            if not all(a >= b for a, b in zip(exps, m.exponents)):
                raise ValueError(f"{m} does not divide all terms")
            out[tuple(a - b for a, b in zip(exps, m.exponents))] = c
        return Polynomial(out, self.ambient)

    def leading_term(self, key=grevlex_key) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ValueError("leading term of zero polynomial")
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, key=grevlex_key) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term(key)
        return self * (1 / c)

    # -- ambient surgery ------------------------------------------------

    def extend_ambient(self, new_ambient: Sequence[str]) -> "Polynomial":
        """Re-express over a larger ambient containing the current one."""
        new = tuple(new_ambient)
        pos = [new.index(v) for v in self.ambient]
        out = {}
        for exps, c in self.terms.items():
            e = [0] * len(new)
            for p, x in zip(pos, exps):
                e[p] = x
            out[tuple(e)] = c
        return Polynomial(out, new)

    def restrict_ambient(self, new_ambient: Sequence[str]) -> "Polynomial":
        """Drop variables not in ``new_ambient``; they must not occur."""
        new = tuple(new_ambient)
        keep = [self.ambient.index(v) for v in new]
        dropped = [i for i in range(len(self.ambient)) if self.ambient[i] not in new]
        out = {}
        for exps, c in self.terms.items():
            if any(exps[i] != 0 for i in dropped):
                raise ValueError(
                    f"variable {self.ambient[dropped[0]]!r} occurs; cannot restrict"
                )
            out[tuple(exps[i] for i in keep)] = c
        return Polynomial(out, new)

    def support_variables(self) -> set[str]:
        out = set()
        for exps in self.terms:
            for v, e in zip(self.ambient, exps):
                if e:
                    out.add(v)
        return out

    # -- printing -------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[exps]
            factors = []
            for v, e in zip(self.ambient, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = str(c) + "*" + "*".join(factors)
            parts.append(body)
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """Exact quotient p / q, or None if q does not divide p.

    Single-divisor multivariate division with grevlex leading terms; the
    quotient is returned only when the remainder vanishes.
    """
    p._check_ambient(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return Polynomial.zero(p.ambient)
    qe, qc = q.leading_term()
    quotient = Polynomial.zero(p.ambient)
    rem = p
    while not rem.is_zero():
        re, rc = rem.leading_term()
        if not all(a >= b for a, b in zip(re, qe)):
            return None
        t = Polynomial(
            {tuple(a - b for a, b in zip(re, qe)): rc / qc}, p.ambient
        )
        quotient = quotient + t
        rem = rem - t * q
    return quotient
