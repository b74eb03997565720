"""Sparse integer polynomials with exponent tuples (exponents may be negative for Laurent use)."""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence


class Poly:
    """Immutable map exponent tuple -> nonzero integer coefficient."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], int] | Iterable[tuple[tuple[int, ...], int]] = ()):
        acc: dict[tuple[int, ...], int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ValueError("exponent length mismatch")
            acc[e] = acc.get(e, 0) + c
        self.n = n
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1) -> "Poly":
        return cls(len(exp), [(tuple(exp), coeff)])

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    def terms(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """(exponent, coefficient) pairs sorted by exponent."""
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(self.n, self._terms + other._terms)

    def __neg__(self) -> "Poly":
        return Poly(self.n, [(e, -c) for e, c in self._terms])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly(self.n, [(e, c * other) for e, c in self._terms])
        return Poly(self.n, [(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
                             for e1, c1 in self._terms for e2, c2 in other._terms])

    __rmul__ = __mul__

    def constant_term(self) -> int:
        return dict(self._terms).get((0,) * self.n, 0)

    def is_polynomial(self) -> bool:
        return all(x >= 0 for e, _ in self._terms for x in e)

    def render(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        parts = []
        # highest exponent first reads more naturally; keep deterministic
        for e, c in sorted(self._terms, key=lambda t: tuple(-x for x in t[0])):
            mono = "*".join(nm if k == 1 else f"{nm}^{k}" for nm, k in zip(names, e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.n}, {list(self._terms)!r})"


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse sums of monomials like ``x3*y1 - x1*y3`` or ``-x_1^2*y4 + 1``."""
    pos = {nm: i for i, nm in enumerate(names)}
    pos.update({nm.replace("_", ""): i for i, nm in enumerate(names)})
    n = len(names)
    s = text.replace(" ", "")
    if s in ("", "0"):
        return Poly(n)
    terms = re.findall(r"[+-]?[^+-]+", s)
    out = []
    for t in terms:
        sign = -1 if t.startswith("-") else 1
        t = t.lstrip("+-")
        coeff = 1
        exp = [0] * n
        for factor in t.split("*"):
            if not factor:
                continue
            if factor.isdigit():
                coeff *= int(factor)
                continue
            base, _, power = factor.partition("^")
            base = base.replace("_", "")
            if base not in pos:
                raise ValueError(f"unknown variable {base!r}")
            exp[pos[base]] += int(power) if power else 1
        out.append((tuple(exp), sign * coeff))
    return Poly(n, out)
