"""Sparse multigraded polynomials over Q with the infinitesimal sl2 action.

Variables, in their fixed global order::

    X0, Y0, Z0, x0, y0, x1, y1, ..., xn, yn

``X0, Y0, Z0`` span g^v (the dual adjoint representation, realized as the
quadrics x0^2, x0*y0, y0^2), ``x0, y0`` is the binary-form slot of the extra
vertex, and ``(xi, yi)`` are the coordinates of the i-th factor of (P^1)^n.

A monomial is a tuple of exponents in that order with trailing zeros removed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping

Monomial = tuple[int, ...]

SYM_VARS = ("X0", "Y0", "Z0")
_X0, _Y0, _Z0, _x0, _y0 = range(5)


def x_index(i: int) -> int:
    """Position of ``x_i`` in the global variable order (``i = 0`` is the vertex-0 slot)."""
    return 3 + 2 * i


def y_index(i: int) -> int:
    return 4 + 2 * i


def variable_name(pos: int) -> str:
    if pos < 3:
        return SYM_VARS[pos]
    i, r = divmod(pos - 3, 2)
    return f"{'xy'[r]}{i}"


_NAME_RE = re.compile(r"^([XYZxy])(\d+)$")


@lru_cache(maxsize=4096)
def variable_index(name: str) -> int:
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"unknown variable {name!r}")
    letter, num = m.group(1), int(m.group(2))
    if letter in "XYZ":
        if num != 0:
            raise ValueError(f"unknown variable {name!r}")
        return "XYZ".index(letter)
    return x_index(num) if letter == "x" else y_index(num)


def _strip(exps) -> Monomial:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, e in enumerate(b):
        out[k] += e
    return tuple(out)


def _bump(m: Monomial, pos: int, delta: int) -> Monomial:
    exps = list(m)
    if pos >= len(exps):
        exps.extend([0] * (pos + 1 - len(exps)))
    exps[pos] += delta
    return _strip(exps)


def mono_key(m: Monomial):
    """Graded-lex sort key (larger key = larger monomial)."""
    return (sum(m), m)


@dataclass(frozen=True, order=True)
class Multidegree:
    """Grading of a homogeneous space.

    ``sym`` is the degree in X0, Y0, Z0 (housing S^p g^v), ``v0`` the degree in
    the binary slot (x0, y0) (housing V_{v0}), and ``factors`` the degrees in
    (xi, yi) for i = 1..n.  A negative factor entry denotes the zero space.
    """

    sym: int
    v0: int
    factors: tuple[int, ...]

    @classmethod
    def of(cls, factors: Iterable[int], sym: int = 0, v0: int = 0) -> "Multidegree":
        return cls(sym, v0, tuple(factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    def is_empty(self) -> bool:
        return self.sym < 0 or self.v0 < 0 or any(f < 0 for f in self.factors)

    def key(self) -> str:
        return f"s{self.sym}_v{self.v0}_d{','.join(map(str, self.factors))}"

    @classmethod
    def from_key(cls, key: str) -> "Multidegree":
        m = re.match(r"^s(-?\d+)_v(-?\d+)_d([-\d,]*)$", key)
        if not m:
            raise ValueError(f"bad multidegree key {key!r}")
        factors = tuple(int(t) for t in m.group(3).split(",")) if m.group(3) else ()
        return cls(int(m.group(1)), int(m.group(2)), factors)

    def __str__(self) -> str:
        return f"(sym {self.sym}; v0 {self.v0}; {', '.join(map(str, self.factors))})"


def mono_multidegree(m: Monomial, n: int) -> Multidegree:
    exps = list(m) + [0] * max(0, 5 + 2 * n - len(m))
    if len(exps) > 5 + 2 * n:
        raise ValueError(f"monomial uses factors beyond n={n}")
    return Multidegree(
        exps[0] + exps[1] + exps[2],
        exps[3] + exps[4],
        tuple(exps[3 + 2 * i] + exps[4 + 2 * i] for i in range(1, n + 1)),
    )


def mono_weight(m: Monomial) -> int:
    """h-weight: +2/0/-2 on X0/Y0/Z0, +1 on every x, -1 on every y."""
    w = 0
    for pos, e in enumerate(m):
        if not e:
            continue
        if pos < 3:
            w += (2 - 2 * pos) * e
        else:
            w += e if (pos - 3) % 2 == 0 else -e
    return w


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if not isinstance(c, (int, Fraction)):
                c = Fraction(c)
            if c:
                m = _strip(m)
                c = clean.get(m, 0) + c
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        pos = variable_index(name)
        return cls({_bump((), pos, 1): 1})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "Polynomial":
        return cls({m: c})

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw({})
            return Polynomial._raw({m: c * other for m, c in self.terms.items()})
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __len__(self):
        return len(self.terms)

    # -- grading --------------------------------------------------------------

    def multidegree(self, n: int) -> Multidegree:
        """Common multidegree of all terms; raises if inhomogeneous or zero."""
        degs = {mono_multidegree(m, n) for m in self.terms}
        if len(degs) != 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous_of(self, deg: Multidegree) -> bool:
        width = 5 + 2 * deg.n
        return all(len(m) <= width and mono_multidegree(m, deg.n) == deg for m in self.terms)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=mono_key)

    # -- text -------------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical serialization: terms in decreasing graded-lex order."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=mono_key, reverse=True):
            c = self.terms[m]
            sign = "-" if c < 0 else "+"
            body = [str(abs(c))]
            for pos, e in enumerate(m):
                if e:
                    body.append(variable_name(pos) + (f"^{e}" if e > 1 else ""))
            parts.append(f"{sign}{'*'.join(body)}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Polynomial":
        text = text.strip()
        if text == "0":
            return cls()
        terms: dict[Monomial, Fraction] = {}
        for tok in text.split():
            sign = -1 if tok[0] == "-" else 1
            if tok[0] in "+-":
                tok = tok[1:]
            factors = tok.split("*")
            c = (Fraction(factors[0]) if "/" in factors[0] else int(factors[0])) * sign
            exps: list[int] = []
            for f in factors[1:]:
                name, _, e = f.partition("^")
                pos = variable_index(name)
                if pos >= len(exps):
                    exps.extend([0] * (pos + 1 - len(exps)))
                exps[pos] += int(e) if e else 1
            m = _strip(exps)
            terms[m] = terms.get(m, 0) + c
        return cls(terms)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    __str__ = to_text


def _coerce(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    return None


ZERO = Polynomial()
ONE = Polynomial.constant(1)


def X0() -> Polynomial:
    return Polynomial.var("X0")


def Y0() -> Polynomial:
    return Polynomial.var("Y0")


def Z0() -> Polynomial:
    return Polynomial.var("Z0")


def xv(i: int) -> Polynomial:
    return Polynomial.monomial(_bump((), x_index(i), 1))


def yv(i: int) -> Polynomial:
    return Polynomial.monomial(_bump((), y_index(i), 1))


def conic() -> Polynomial:
    """The invariant conic X0*Z0 - Y0^2."""
    return X0() * Z0() - Y0() ** 2


# -- distinguished elements ----------------------------------------------------

def plucker(i: int, k: int) -> Polynomial:
    """The minor x_i*y_k - x_k*y_i (index 0 is the vertex-0 slot)."""
    if i == k:
        raise ValueError("plucker(i, i) is a self-loop")
    if i < 0 or k < 0:
        raise ValueError("vertex indices must be non-negative")
    return xv(i) * yv(k) - xv(k) * yv(i)


def s_section(i: int) -> Polynomial:
    """s_i = x_i^2 Z0 - 2 x_i y_i Y0 + y_i^2 X0."""
    if i < 1:
        raise ValueError("s_section index must be >= 1")
    x, y = xv(i), yv(i)
    return x * x * Z0() - 2 * x * y * Y0() + y * y * X0()


# -- sl2 action ----------------------------------------------------------------
#
# e = x d/dy, f = y d/dx, h = x d/dx - y d/dy on every binary slot;
# on g^v: e: X0->0, Y0->X0, Z0->2Y0 ; f: X0->2Y0, Y0->Z0, Z0->0.

def _move(m: Monomial, src: int, dst: int) -> Monomial:
    # one unit of exponent from position src to dst
    e = list(m)
    if dst >= len(e):
        e.extend([0] * (dst + 1 - len(e)))
    e[src] -= 1
    e[dst] += 1
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


@lru_cache(maxsize=1 << 20)
def _e_image(m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    out = []
    if len(m) > _Y0 and m[_Y0]:
        out.append((_move(m, _Y0, _X0), m[_Y0]))
    if len(m) > _Z0 and m[_Z0]:
        out.append((_move(m, _Z0, _Y0), 2 * m[_Z0]))
    for pos in range(4, len(m), 2):
        b = m[pos]
        if b:
            out.append((_move(m, pos, pos - 1), b))
    return tuple(out)


@lru_cache(maxsize=1 << 20)
def _f_image(m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    out = []
    if len(m) > _X0 and m[_X0]:
        out.append((_move(m, _X0, _Y0), 2 * m[_X0]))
    if len(m) > _Y0 and m[_Y0]:
        out.append((_move(m, _Y0, _Z0), m[_Y0]))
    for pos in range(3, len(m), 2):
        a = m[pos]
        if a:
            out.append((_move(m, pos, pos + 1), a))
    return tuple(out)


def _e_terms(m: Monomial):
    """(monomial, integer factor) pairs of e applied to a monomial."""
    return _e_image(m)


def _f_terms(m: Monomial):
    return _f_image(m)


def _apply(p: Polynomial, op) -> Polynomial:
    out: dict[Monomial, Fraction] = {}
    get = out.get
    for m, c in p.terms.items():
        for m2, k in op(m):
            out[m2] = get(m2, 0) + c * k
    return Polynomial._raw({m: v for m, v in out.items() if v})


def apply_e(p: Polynomial) -> Polynomial:
    return _apply(p, _e_terms)


def apply_f(p: Polynomial) -> Polynomial:
    return _apply(p, _f_terms)


def apply_h(p: Polynomial) -> Polynomial:
    return Polynomial._raw({m: c * mono_weight(m) for m, c in p.terms.items() if mono_weight(m)})


def is_invariant(p: Polynomial) -> bool:
    return apply_e(p).is_zero() and apply_f(p).is_zero()


# -- g^v <-> V_2 ---------------------------------------------------------------

def subst0(p: Polynomial) -> Polynomial:
    """Substitute X0 -> x0^2, Y0 -> x0*y0, Z0 -> y0^2."""
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        exps = list(m) + [0] * max(0, 5 - len(m))
        a, b, cc = exps[0], exps[1], exps[2]
        if exps[3] or exps[4]:
            raise ValueError("subst0 expects vertex0 grade 0")
        exps[0] = exps[1] = exps[2] = 0
        exps[3] = 2 * a + b
        exps[4] = b + 2 * cc
        m2 = _strip(exps)
        v = out.get(m2, 0) + c
        if v:
            out[m2] = v
        else:
            del out[m2]
    return Polynomial._raw(out)


@lru_cache(maxsize=None)
def _lift_table(m: int) -> tuple[Polynomial, ...]:
    """lift(x0^(2m-k) y0^k) for k = 0..2m, as polynomials in X0, Y0, Z0.

    The V_{2m} summand of S^m g^v is generated by its highest weight vector
    X0^m; subst0 intertwines f, so f^k(X0^m) maps to (2m)!/(2m-k)! x0^(2m-k) y0^k.
    """
    out = []
    v = X0() ** m
    for k in range(2 * m + 1):
        out.append(v * Fraction(factorial(2 * m - k), factorial(2 * m)))
        v = apply_f(v)
    return tuple(out)


def lift(p: Polynomial) -> Polynomial:
    """The sl2-equivariant section of subst0 (acts on the x0, y0 part only)."""
    acc: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        exps = list(m) + [0] * max(0, 5 - len(m))
        if exps[0] or exps[1] or exps[2]:
            raise ValueError("lift expects sym grade 0")
        a, b = exps[3], exps[4]
        if (a + b) % 2:
            raise ValueError("lift expects even vertex0 grade")
        exps[3] = exps[4] = 0
        rest = _strip(exps)
        for m2, c2 in _lift_table((a + b) // 2)[b].terms.items():
            mm = mono_mul(m2, rest)
            v = acc.get(mm, 0) + c * c2
            if v:
                acc[mm] = v
            else:
                del acc[mm]
    return Polynomial._raw(acc)


def divide_by_conic(p: Polynomial) -> Polynomial:
    """Exact quotient p / (X0*Z0 - Y0^2); raises if the division is not exact."""
    rem = dict(p.terms)
    quot: dict[Monomial, Fraction] = {}
    while rem:
        # reduce a term of maximal Y0 degree using Y0^2 = X0*Z0 - conic
        m = max(rem, key=lambda t: (t[_Y0] if len(t) > _Y0 else 0, mono_key(t)))
        b = m[_Y0] if len(m) > _Y0 else 0
        if b < 2:
            raise ValueError("polynomial is not divisible by the conic")
        c = rem.pop(m)
        q = _bump(m, _Y0, -2)
        # c*m = c*q*Y0^2 = c*q*X0*Z0 - c*q*conic
        quot[q] = quot.get(q, 0) - c
        m2 = _bump(_bump(q, _X0, 1), _Z0, 1)
        v = rem.get(m2, 0) + c
        if v:
            rem[m2] = v
        else:
            rem.pop(m2, None)
    return Polynomial({k: v for k, v in quot.items() if v})


def split_symmetric(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Split p (homogeneous in X0, Y0, Z0) as lift(top) + conic * rest.

    ``top`` is the V_{2m} component (in the x0, y0 slot) and ``rest`` the
    S^{m-2} g^v component.  Other variables ride along as coefficients.
    """
    top = subst0(p)
    rest = divide_by_conic(p - lift(top)) if p else ZERO
    return top, rest


def evaluate(p: Polynomial, point: Mapping[str, object]) -> Fraction:
    """Exact value of ``p`` at a point given as {variable name: rational}."""
    values: dict[int, Fraction] = {variable_index(k): Fraction(v) for k, v in point.items()}
    total = Fraction(0)
    for m, c in p.terms.items():
        term = c
        for pos, e in enumerate(m):
            if e:
                if pos not in values:
                    raise KeyError(f"no value for variable {variable_name(pos)}")
                term *= values[pos] ** e
        total += term
    return total


def variables_of(p: Polynomial) -> list[str]:
    used = set()
    for m in p.terms:
        used.update(pos for pos, e in enumerate(m) if e)
    return [variable_name(pos) for pos in sorted(used)]
