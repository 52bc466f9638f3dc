"""Grading monoids ``(M, +, 0, inf)`` and their orders.

Four kinds are provided:

``nat``
    completed naturals, addition, ``inf`` on top.
``multiset``
    finite multisets of expression strings under union, plus ``inf``.
``poly+`` / ``polyO``
    polynomials with non-negative integer coefficients (index = degree)
    under coefficientwise addition, read modulo bounded difference or
    modulo big-O respectively.

``leq`` is the order the monoid induces (``m <= n`` iff ``l + m = n`` for
some ``l``). ``leq_plus`` and ``leq_O`` are the asymptotic comparisons of
polynomials, both decided exactly.

>>> oplus(nat(3), INF_NAT)
Grade(monoid=<Monoid.NAT: 'nat'>, value=inf)
>>> leq_plus(poly_plus([0, 5, 1]), poly_plus([0, 0, 2]))
True
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union


class Monoid(enum.Enum):
    NAT = "nat"
    MULTISET = "multiset"
    POLY_PLUS = "poly+"
    POLY_O = "polyO"


class GradingError(ValueError):
    """Raised on arguments drawn from different monoids or of the wrong kind."""


class _Infinity:
    __slots__ = ()
    is_inf = True

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other) -> bool:
        return isinstance(other, _Infinity) or other == float("inf")

    def __hash__(self) -> int:
        return hash(float("inf"))


INF = _Infinity()

Payload = Union[int, tuple, _Infinity]


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    if any((not isinstance(c, int)) or c < 0 for c in out):
        raise GradingError(f"coefficients must be non-negative integers: {out}")
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _o_canonical(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    return () if not coeffs else (0,) * (len(coeffs) - 1) + (1,)


@dataclass(frozen=True)
class Grade:
    monoid: Monoid
    value: Payload

    @property
    def is_inf(self) -> bool:
        return self.value is INF

    @property
    def degree(self) -> int:
        """Polynomial degree; the zero polynomial has degree -1."""
        if self.monoid not in (Monoid.POLY_PLUS, Monoid.POLY_O) or self.is_inf:
            raise GradingError("degree is defined for finite polynomial grades")
        return len(self.value) - 1

    def to_json(self) -> dict:
        if self.monoid is Monoid.NAT:
            return {"monoid": "nat", "value": "inf" if self.is_inf else self.value}
        if self.monoid is Monoid.MULTISET:
            return {"monoid": "multiset", "value": "inf" if self.is_inf else list(self.value)}
        return {"monoid": self.monoid.value, "coeffs": "inf" if self.is_inf else list(self.value)}

    @classmethod
    def from_json(cls, data: dict) -> Grade:
        try:
            kind = Monoid(data["monoid"])
        except (KeyError, ValueError):
            raise GradingError(f"unknown monoid in {data!r}") from None
        raw = data.get("coeffs", data.get("value"))
        if raw == "inf":
            return infinity(kind)
        if kind is Monoid.NAT:
            return nat(raw)
        if kind is Monoid.MULTISET:
            return multiset(raw)
        return poly_plus(raw) if kind is Monoid.POLY_PLUS else poly_O(raw)

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        if self.monoid is Monoid.NAT:
            return str(self.value)
        if self.monoid is Monoid.MULTISET:
            return "{" + ", ".join(self.value) + "}"
        return f"{self.monoid.value}{list(self.value)}"


def nat(n: Union[int, float, _Infinity]) -> Grade:
    if n is INF or n == float("inf"):
        return Grade(Monoid.NAT, INF)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GradingError(f"not a completed natural: {n!r}")
    return Grade(Monoid.NAT, n)


def multiset(items: Iterable[str]) -> Grade:
    items = list(items)
    if any(not isinstance(i, str) for i in items):
        raise GradingError("multiset elements are strings")
    return Grade(Monoid.MULTISET, tuple(sorted(items)))


def poly_plus(coeffs: Iterable[int]) -> Grade:
    """A raw polynomial; constants are kept until :func:`canonicalize`."""
    return Grade(Monoid.POLY_PLUS, _strip(coeffs))


def poly_O(coeffs: Iterable[int]) -> Grade:
    """A big-O class, stored as its monic monomial representative."""
    return Grade(Monoid.POLY_O, _o_canonical(_strip(coeffs)))


def zero(kind: Monoid) -> Grade:
    return Grade(kind, 0 if kind is Monoid.NAT else ())


def infinity(kind: Monoid) -> Grade:
    return Grade(kind, INF)


INF_NAT = infinity(Monoid.NAT)
ZERO_NAT = zero(Monoid.NAT)


def _same(m: Grade, n: Grade) -> Monoid:
    if not isinstance(m, Grade) or not isinstance(n, Grade):
        raise GradingError(f"expected grades, got {m!r} and {n!r}")
    if m.monoid is not n.monoid:
        raise GradingError(f"mixed monoids: {m.monoid.value} and {n.monoid.value}")
    return m.monoid


def _add_coeffs(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def oplus(m: Grade, n: Grade) -> Grade:
    kind = _same(m, n)
    if m.is_inf or n.is_inf:
        return infinity(kind)
    if kind is Monoid.NAT:
        return Grade(kind, m.value + n.value)
    if kind is Monoid.MULTISET:
        return Grade(kind, tuple(sorted(m.value + n.value)))
    if kind is Monoid.POLY_PLUS:
        return Grade(kind, _add_coeffs(m.value, n.value))
    return Grade(kind, _o_canonical(_add_coeffs(m.value, n.value)))


def leq_witness(m: Grade, n: Grade) -> Grade | None:
    """Some ``l`` with ``oplus(l, m) == n``, or None when ``m <= n`` fails."""
    kind = _same(m, n)
    if n.is_inf:
        return infinity(kind)
    if m.is_inf:
        return None
    if kind is Monoid.NAT:
        return Grade(kind, n.value - m.value) if m.value <= n.value else None
    if kind is Monoid.MULTISET:
        rest = Counter(n.value)
        rest.subtract(Counter(m.value))
        if any(c < 0 for c in rest.values()):
            return None
        return multiset(rest.elements())
    if kind is Monoid.POLY_PLUS:
        if len(m.value) > len(n.value) or any(a > b for a, b in zip(m.value, n.value)):
            return None
        diff = [b - (m.value[i] if i < len(m.value) else 0) for i, b in enumerate(n.value)]
        return poly_plus(diff)
    # big-O classes: adding n itself absorbs any class of no larger degree
    return n if len(m.value) <= len(n.value) else None


def leq(m: Grade, n: Grade) -> bool:
    """The monoid preorder: ``m <= n`` iff ``l + m = n`` for some ``l``."""
    kind = _same(m, n)
    if n.is_inf:
        return True
    if m.is_inf:
        return False
    if kind is Monoid.NAT:
        return m.value <= n.value
    if kind is Monoid.MULTISET:
        rest = Counter(n.value)
        rest.subtract(Counter(m.value))
        return all(c >= 0 for c in rest.values())
    if kind is Monoid.POLY_PLUS:
        return len(m.value) <= len(n.value) and all(a <= b for a, b in zip(m.value, n.value))
    return len(m.value) <= len(n.value)


def meet(m: Grade, n: Grade) -> Grade:
    """Greatest lower bound for :func:`leq`."""
    kind = _same(m, n)
    if m.is_inf:
        return n
    if n.is_inf:
        return m
    if kind is Monoid.NAT:
        return Grade(kind, min(m.value, n.value))
    if kind is Monoid.MULTISET:
        return multiset((Counter(m.value) & Counter(n.value)).elements())
    if kind is Monoid.POLY_PLUS:
        return poly_plus(min(a, b) for a, b in zip(m.value, n.value))
    return m if len(m.value) <= len(n.value) else n


def _require_poly(f: Grade, g: Grade, kind: Monoid) -> None:
    if f.monoid is not kind or g.monoid is not kind:
        raise GradingError(f"expected {kind.value} grades, got {f.monoid.value} and {g.monoid.value}")


def leq_plus(f: Grade, g: Grade) -> bool:
    """``f <=+ g``: some constant ``c`` has ``f(x) <= c + g(x)`` for all x.

    For non-negative polynomials the difference ``f - g`` is bounded above
    exactly when, reading degrees from the top down and ignoring the
    constant term, the first coefficient where they differ is larger in g.
    """
    _require_poly(f, g, Monoid.POLY_PLUS)
    a, b = f.value, g.value
    if b is INF:
        return True
    if a is INF:
        return False
    # coefficient tuples carry no trailing zeros, so length is degree + 1
    if len(a) != len(b):
        return len(a) < len(b) or len(a) <= 1
    return a[:0:-1] <= b[:0:-1]


def leq_O(f: Grade, g: Grade) -> bool:
    """``f <=O g``: ``f(x) <= c*g(x)`` for all large x; degree order, 0 at the bottom."""
    _require_poly(f, g, Monoid.POLY_O)
    a, b = f.value, g.value
    if b is INF:
        return True
    if a is INF:
        return False
    if not b:
        return not a
    return len(a) <= len(b)


def canonicalize(m: Grade) -> Grade:
    """Representative of the grade's equivalence class.

    ``poly+`` drops the constant term; ``polyO`` keeps the monic monomial
    of the same degree. The other kinds are already canonical.
    """
    if m.is_inf or m.monoid in (Monoid.NAT, Monoid.MULTISET):
        return m
    if m.monoid is Monoid.POLY_PLUS:
        return poly_plus((0,) + m.value[1:]) if m.value else m
    return Grade(Monoid.POLY_O, _o_canonical(m.value))


def evaluate(f: Grade, x: int) -> int:
    """Value of a finite polynomial grade at ``x``."""
    if f.is_inf or f.monoid not in (Monoid.POLY_PLUS, Monoid.POLY_O):
        raise GradingError("evaluate needs a finite polynomial grade")
    return sum(c * x ** i for i, c in enumerate(f.value))
