"""Invariant Koszul complexes of the sections s_i and their cohomology.

F(j): degree q (0 <= q <= j) is the sum over |S| = j - q of the invariants of
multidegree (sym q; d - 2 e_S).  The component S -> S \\ {i} multiplies by s_i
with sign (-1)^#{i' in S : i' < i}.  Fbar(j) uses the binary slot of degree 2q
in place of S^q g^v and multiplies by p_0i^2.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import invariants as inv
from .exact_linalg import SparseMatrix, is_zero_product, rank
from .git_stability import Polarization, StrictlySemistableError, has_strictly_semistable
from .graph_calc import enumerate_standard, straighten, t1_move, to_polynomial, tprime_move
from .polyring import (
    Monomial,
    Multidegree,
    Polynomial,
    conic,
    lift,
    plucker,
    s_section,
    split_symmetric,
)

log = logging.getLogger(__name__)


class OddDegreeError(ValueError):
    """Odd total degree: L has no PGL2-linearization (use 2d instead)."""


class VerificationError(AssertionError):
    """A mathematical assertion failed."""


Summand = tuple[tuple[int, ...], inv.InvariantBasis]


@dataclass
class ChainComplex:
    """Terms as lists of (S, basis) summands; differentials[q] maps term q to term q+1."""

    kind: str
    polarization: Polarization
    j: int
    terms: list[list[Summand]]
    differentials: list[SparseMatrix] = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [sum(b.dim for _, b in summands) for summands in self.terms]

    def offsets(self, q: int) -> dict[tuple[int, ...], int]:
        out, k = {}, 0
        for s, b in self.terms[q]:
            out[s] = k
            k += b.dim
        return out

    def euler(self) -> int:
        return sum((-1) ** q * d for q, d in enumerate(self.dims))


def _as_pol(p) -> Polarization:
    return p if isinstance(p, Polarization) else Polarization(tuple(p))


def _term_degrees(p: Polarization, j: int, q: int, bar: bool) -> list[tuple[tuple[int, ...], Multidegree]]:
    out = []
    for s in itertools.combinations(range(1, p.n + 1), j - q):
        factors = tuple(d - 2 * (i + 1 in s) for i, d in enumerate(p.d))
        if any(f < 0 for f in factors):
            continue
        out.append((s, Multidegree(0, 2 * q, factors) if bar else Multidegree(q, 0, factors)))
    return out


def _mono_div(m: Monomial, t: Monomial) -> Monomial | None:
    if len(t) > len(m):
        return None
    e = list(m)
    for k, x in enumerate(t):
        e[k] -= x
        if e[k] < 0:
            return None
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def product_entries(
    src: inv.InvariantBasis, tgt: inv.InvariantBasis, factor: Polynomial, sign: int = 1
) -> dict[tuple[int, int], Fraction]:
    """Matrix of multiplication by ``factor`` from ``src`` to ``tgt``.

    The product of invariants is invariant, so its coordinate k is its
    coefficient at the k-th index monomial divided by that of basis[k].
    """
    readers = []
    for m, r in tgt.index.items():
        pre = [(q, c) for t, c in factor.terms.items() if (q := _mono_div(m, t)) is not None]
        readers.append((r, pre, tgt.basis[r].terms[m]))
    entries: dict[tuple[int, int], Fraction] = {}
    for col, b in enumerate(src.basis):
        bt = b.terms
        for r, pre, den in readers:
            val = 0
            for q, c in pre:
                v = bt.get(q)
                if v:
                    val += c * v
            if val:
                entries[(r, col)] = Fraction(sign * val) / den
    return entries


def product_entries_checked(
    src: inv.InvariantBasis, tgt: inv.InvariantBasis, factor: Polynomial, sign: int = 1
) -> dict[tuple[int, int], Fraction]:
    """Same matrix through full products and verified coordinates (slow; for tests)."""
    entries = {}
    for col, b in enumerate(src.basis):
        v = inv.coordinates(tgt, factor * b * sign, check=True)
        for r, x in v.entries.items():
            entries[(r, col)] = x
    return entries


def _koszul_sign(s: tuple[int, ...], i: int) -> int:
    return -1 if sum(1 for k in s if k < i) % 2 else 1


def _factor(i: int, bar: bool) -> Polynomial:
    if bar:
        p = plucker(0, i)
        return p * p
    return s_section(i)


def _build(p, j: int, bar: bool, checked: bool = False) -> ChainComplex:
    p = _as_pol(p)
    if j < 0:
        raise ValueError("j must be nonnegative")
    terms = []
    for q in range(j + 1):
        terms.append([(s, inv.invariant_basis(l)) for s, l in _term_degrees(p, j, q, bar)])
    c = ChainComplex("Fbar" if bar else "F", p, j, terms)
    assemble = product_entries_checked if checked else product_entries
    dims = c.dims
    for q in range(j):
        src_off, tgt_off = c.offsets(q), c.offsets(q + 1)
        tgt_of = dict(terms[q + 1])
        entries: dict[tuple[int, int], Fraction] = {}
        for s, b in terms[q]:
            if b.dim == 0:
                continue
            for i in s:
                t = tuple(k for k in s if k != i)
                tb = tgt_of.get(t)
                if tb is None or tb.dim == 0:
                    continue
                block = assemble(b, tb, _factor(i, bar), _koszul_sign(s, i))
                r0, c0 = tgt_off[t], src_off[s]
                for (r, col), v in block.items():
                    entries[(r0 + r, c0 + col)] = v
        c.differentials.append(SparseMatrix(dims[q + 1], dims[q], entries))
    for q in range(j - 1):
        if not is_zero_product(c.differentials[q + 1], c.differentials[q]):
            raise VerificationError(f"d o d != 0 in degree {q} of {c.kind}({p}, j={j})")
    return c


def build_F(p, j: int, checked: bool = False) -> ChainComplex:
    return _build(p, j, bar=False, checked=checked)


def build_Fbar(p, j: int, checked: bool = False) -> ChainComplex:
    return _build(p, j, bar=True, checked=checked)


def differential_ranks(c: ChainComplex) -> list[int]:
    return [rank(d) for d in c.differentials]


def cohomology_dims(c: ChainComplex, ranks: list[int] | None = None) -> list[int]:
    """dim H^q = dim(term q) - rank(d_q) - rank(d_{q-1})."""
    ranks = differential_ranks(c) if ranks is None else ranks
    dims = c.dims
    out = []
    for q in range(len(dims)):
        out_rank = ranks[q] if q < len(ranks) else 0
        in_rank = ranks[q - 1] if q >= 1 else 0
        out.append(dims[q] - out_rank - in_rank)
    if sum((-1) ** q * h for q, h in enumerate(out)) != c.euler():
        raise VerificationError("Euler characteristic mismatch")
    return out


# -- verdicts -----------------------------------------------------------------------

def _require_valid(p: Polarization) -> None:
    if p.n < 3:
        raise ValueError(f"need n >= 3 factors, got {p.n}")
    if p.total % 2:
        raise OddDegreeError(f"total degree {p.total} is odd; use the doubled polarization")
    if has_strictly_semistable(p):
        raise StrictlySemistableError(f"polarization {p} has a strictly semistable locus")


@dataclass
class JResult:
    j: int
    term_dims: list[int]
    cohomology_dims: list[int]
    euler: int
    last_map_surjective: bool | None
    matrix_shapes: list[list[int]]
    expect_exact: bool
    ms: float

    @property
    def ok(self) -> bool:
        h = self.cohomology_dims
        if self.expect_exact:
            return not any(h)
        return not any(h[1:])

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "j": self.j,
            "term_dims": self.term_dims,
            "cohomology_dims": self.cohomology_dims,
            "euler": self.euler,
            "last_map_surjective": self.last_map_surjective,
            "matrix_shapes": self.matrix_shapes,
            "ok": self.ok,
        }
        if timing:
            out["ms"] = round(self.ms, 1)
        return out


@dataclass
class BottReport:
    polarization: Polarization
    per_j: list[JResult]
    wall_clock_ms: float

    @property
    def n(self) -> int:
        return self.polarization.n

    @property
    def dim_y(self) -> int:
        return self.n - 3

    @property
    def verdict(self) -> bool:
        return all(r.ok for r in self.per_j)

    def h0(self) -> list[int]:
        return [r.cohomology_dims[0] for r in self.per_j]

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "d": list(self.polarization.d),
            "n": self.n,
            "dimY": self.dim_y,
            "per_j": [r.to_dict(timing) for r in self.per_j],
            "verdict": self.verdict,
            "wall_clock_ms": round(self.wall_clock_ms, 1) if timing else None,
        }


def analyse_j(p, j: int) -> JResult:
    """Build F(j) and compute its cohomology."""
    p = _as_pol(p)
    t0 = time.perf_counter()
    c = build_F(p, j)
    ranks = differential_ranks(c)
    h = cohomology_dims(c, ranks)
    dims = c.dims
    surj = None if j == 0 else ranks[-1] == dims[-1]
    shapes = [[d.rows, d.cols] for d in c.differentials]
    return JResult(j, dims, h, c.euler(), surj, shapes, j > p.n - 3, (time.perf_counter() - t0) * 1000)


def verify_bott(p, j_max: int | None = None, progress=None) -> BottReport:
    """Cohomology of F(j) for j = 0..n-2 (or up to j_max).

    For j <= dim Y every H^i with i >= 1 must vanish; for j = n - 2 the whole
    complex must be exact.
    """
    p = _as_pol(p)
    _require_valid(p)
    top = p.n - 2 if j_max is None else j_max
    t0 = time.perf_counter()
    results = []
    for j in range(top + 1):
        if progress:
            progress(f"d={p} j={j}")
        results.append(analyse_j(p, j))
    return BottReport(p, results, (time.perf_counter() - t0) * 1000)


def check_tj_surjective(p, j: int) -> bool:
    """Whether the last differential of F(j) is onto the final term."""
    p = _as_pol(p)
    _require_valid(p)
    if j < 1:
        raise ValueError("the last map exists only for j >= 1")
    c = build_F(p, j)
    return rank(c.differentials[-1]) == c.dims[-1]


def check_fbar_exactness(p, j: int) -> list[int]:
    """Cohomology of Fbar(j); raises VerificationError unless H^i = 0 for i >= 2."""
    p = _as_pol(p)
    _require_valid(p)
    h = cohomology_dims(build_Fbar(p, j))
    if any(h[2:]):
        raise VerificationError(f"Fbar({p}, j={j}) has cohomology {h} in degree >= 2")
    return h


# -- splitting of the last differential ------------------------------------------------

@dataclass
class SplittingResult:
    j: int
    zero_block: bool
    v_block_matches_fbar: bool
    lower_block_matches: bool
    tprime_matches: bool | None

    @property
    def ok(self) -> bool:
        return self.zero_block and self.v_block_matches_fbar and self.lower_block_matches and self.tprime_matches is not False


def check_splitting_diagram(p, j: int, detail: bool = False):
    """Split source and target of the last map of F(j) by S^m = V_2m + C * S^(m-2).

    In the split bases the map is [[t, 0], [t', t_(j-2)]]: the block from
    the C * S^(j-3) part to V_2j vanishes, the V -> V block is the last map of
    Fbar(j), and the lower-right block is the last map of F(j-2).  For j = 2
    the t' block is (2/3) tprime_move on standard graphs.
    """
    p = _as_pol(p)
    if j < 2:
        raise ValueError("the splitting needs j >= 2")
    d = p.d
    v_tgt = inv.invariant_basis(Multidegree(0, 2 * j, d))
    s_tgt = inv.invariant_basis(Multidegree(j - 2, 0, d))
    fbar = build_Fbar(p, j)
    fbar_last, fbar_off = fbar.differentials[-1], fbar.offsets(j - 1)
    if j >= 3:
        fj2 = build_F(p, j - 2)
        fj2_last, fj2_off = fj2.differentials[-1], fj2.offsets(j - 3)
    c = conic()

    zero_block = v_ok = low_ok = True
    tprime_ok: bool | None = True if j == 2 else None
    for i in range(1, p.n + 1):
        src_d = tuple(x - 2 * (k + 1 == i) for k, x in enumerate(d))
        if min(src_d) < 0:
            continue
        s_i = s_section(i)
        vb = inv.invariant_basis(Multidegree(0, 2 * (j - 1), src_d))
        for col, b in enumerate(vb.basis):
            top, rest = split_symmetric(s_i * lift(b))
            if top != v_tgt.combine(fbar_last.column(fbar_off[(i,)] + col)):
                v_ok = False
            inv.coordinates(s_tgt, rest)  # the t' image must be invariant
        if j >= 3:
            sb = inv.invariant_basis(Multidegree(j - 3, 0, src_d))
            for col, w in enumerate(sb.basis):
                top, rest = split_symmetric(s_i * (c * w))
                if not top.is_zero():
                    zero_block = False
                if rest != s_tgt.combine(fj2_last.column(fj2_off[(i,)] + col)):
                    low_ok = False
        if j == 2:
            for g in enumerate_standard(Multidegree(0, 2, src_d)):
                _, rest = split_symmetric(s_i * lift(to_polynomial(g)))
                if rest != to_polynomial(tprime_move(g, i)) * Fraction(2, 3):
                    tprime_ok = False
    res = SplittingResult(j, zero_block, v_ok, low_ok, tprime_ok)
    return res if detail else res.ok


# -- graph cross-check ---------------------------------------------------------------

def check_t1_image(p) -> bool:
    """Graphs with a double edge from w0 span exactly the image of the last map of Fbar(1)."""
    p = _as_pol(p)
    _require_valid(p)
    c = build_Fbar(p, 1)
    tgt = inv.invariant_basis(Multidegree(0, 2, p.d))
    cols = []
    for i in range(1, p.n + 1):
        src_d = tuple(x - 2 * (k + 1 == i) for k, x in enumerate(p.d))
        if min(src_d) < 0:
            continue
        for g in enumerate_standard(src_d):
            poly = to_polynomial(straighten(t1_move(g, i)))
            cols.append(inv.coordinates(tgt, poly))
    graphs = SparseMatrix.from_columns(tgt.dim, cols)
    d = c.differentials[-1]
    r = rank(d)
    return rank(graphs) == r and rank(d.hstack(graphs)) == r
