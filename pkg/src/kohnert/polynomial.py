"""Kohnert polynomials and multiplicity analysis."""

from __future__ import annotations

import json
from typing import Optional

from .diagram import Diagram, Monomial, kd_closure, weight


class KohnertPolynomial:
    """Positive integer combination of equal-degree monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int]):
        degrees = {m.degree() for m in terms}
        if len(degrees) > 1:
            raise ValueError(f"mixed total degrees {sorted(degrees)}")
        if any(c < 1 for c in terms.values()):
            raise ValueError("coefficients must be positive integers")
        object.__setattr__(self, "terms", dict(terms))

    def __setattr__(self, name, value):
        raise AttributeError("KohnertPolynomial is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, KohnertPolynomial) and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def total(self) -> int:
        return sum(self.terms.values())

    def _ordered(self) -> list[tuple[Monomial, int]]:
        # graded lex, largest exponent vector first; all degrees are equal so
        # this is plain descending lex on dense exponent vectors
        def vec(m: Monomial) -> tuple[int, ...]:
            d = m.as_dict()
            top = max(d, default=0)
            return tuple(d.get(i, 0) for i in range(1, top + 1))

        return sorted(self.terms.items(), key=lambda kv: vec(kv[0]), reverse=True)

    def render_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._ordered():
            parts.append(str(m) if c == 1 else f"{c}*{m}")
        return " + ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {"exponents": {str(v): e for v, e in m.exponents}, "coeff": c}
                for m, c in self._ordered()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def __repr__(self) -> str:
        return f"KohnertPolynomial({self.render_text()})"


def kohnert_polynomial(d: Diagram, budget: Optional[int] = None) -> KohnertPolynomial:
    """Sum of the row-count weight monomials over the closure of d."""
    terms: dict[Monomial, int] = {}
    for t in kd_closure(d, budget):
        m = weight(t)
        terms[m] = terms.get(m, 0) + 1
    return KohnertPolynomial(terms)


def is_multiplicity_free(p: KohnertPolynomial) -> bool:
    return all(c == 1 for c in p.terms.values())
