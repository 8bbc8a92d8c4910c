"""Stability combinatorics for PGL2 acting diagonally on (P^1)^n.

A polarization d = (d_1, ..., d_n) is stable-only when no subset of the d_i sums
to half the total.  A point is unstable exactly when the coordinates indexed by
some heavy set I (sum over I > sum over the complement) coincide; each heavy
set gives a stratum with

    mu  = sum_{i in I} d_i - sum_{i not in I} d_i  > 0
    eta = 2 (|I| - 1)

and the destabilizing subgroup is oriented so that L has weight -mu there.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_STRATA_N = 20


class StrictlySemistableError(ValueError):
    """Raised for polarizations with a strictly semistable locus."""


@dataclass(frozen=True)
class Polarization:
    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if not d:
            raise ValueError("polarization needs at least one factor")
        if any(x < 1 for x in d):
            raise ValueError(f"degrees must be positive, got {d}")
        object.__setattr__(self, "d", d)

    @classmethod
    def parse(cls, text: str) -> "Polarization":
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad degree vector {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total(self) -> int:
        return sum(self.d)

    def __str__(self) -> str:
        return ",".join(map(str, self.d))


def _as_polarization(p) -> Polarization:
    return p if isinstance(p, Polarization) else Polarization(tuple(p))


def _subset_sums(values: Iterable[int]) -> set[int]:
    sums = {0}
    for v in values:
        sums |= {s + v for s in sums}
    return sums


def has_strictly_semistable(p) -> bool:
    """True iff some subset of the degrees sums to exactly half the total (meet in the middle)."""
    d = _as_polarization(p).d
    total = sum(d)
    if total % 2:
        return False
    half = total // 2
    left = _subset_sums(d[: len(d) // 2])
    right = _subset_sums(d[len(d) // 2 :])
    return any(half - s in right for s in left)


def balanced_subset(p) -> tuple[int, ...] | None:
    """A subset I (1-based) with sum over I equal to the sum over its complement, if any."""
    d = _as_polarization(p).d
    total = sum(d)
    if total % 2:
        return None
    # reachable sums with one witness subset each, first found in index order
    witness: dict[int, tuple[int, ...]] = {0: ()}
    for i, v in enumerate(d, start=1):
        for s, sub in list(witness.items()):
            witness.setdefault(s + v, sub + (i,))
    return witness.get(total // 2)


def quotient_is_empty(p) -> bool:
    """Every point is unstable when a single degree outweighs all others together."""
    d = _as_polarization(p).d
    return 2 * max(d) > sum(d)


def min_heavy_excess(p) -> int:
    """Smallest mu over all heavy sets (the distance to the nearest wall)."""
    d = _as_polarization(p).d
    total = sum(d)
    return min(abs(total - 2 * s) for s in _subset_sums(d))


@dataclass(frozen=True)
class Stratum:
    heavy_set: tuple[int, ...]  # 1-based factor indices
    mu: int
    eta: int

    def to_dict(self) -> dict:
        return {"heavy_set": list(self.heavy_set), "mu": self.mu, "eta": self.eta}


def _colex_key(s: tuple[int, ...]):
    return tuple(sorted(s, reverse=True))


def strata(p) -> list[Stratum]:
    """One stratum per heavy set, sorted by decreasing mu, colex order within a mu level."""
    p = _as_polarization(p)
    if p.n > MAX_STRATA_N:
        raise ValueError(f"strata enumeration is limited to n <= {MAX_STRATA_N}, got n = {p.n}")
    if has_strictly_semistable(p):
        raise StrictlySemistableError(f"polarization {p} has a strictly semistable locus")
    total = p.total
    out = []
    for mask in range(1, 1 << p.n):
        heavy = tuple(i + 1 for i in range(p.n) if mask >> i & 1)
        s = sum(p.d[i - 1] for i in heavy)
        mu = 2 * s - total
        if mu > 0:
            out.append(Stratum(heavy, mu, 2 * (len(heavy) - 1)))
    out.sort(key=lambda st: (-st.mu, _colex_key(st.heavy_set)))
    return out


def is_unstable_pattern(p, coincident: Iterable[int]) -> bool:
    """Whether a configuration whose coincident points are exactly ``coincident`` is unstable.

    Decided by the Hilbert-Mumford weight of the coincidence set itself; the
    stratum description (contains a heavy set) must agree with it.
    """
    p = _as_polarization(p)
    c = set(coincident)
    return 2 * sum(p.d[i - 1] for i in c) > p.total


# -- degree-sum claim ---------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    d: tuple[int, ...]
    stable: bool
    min_heavy_excess: int

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total(self) -> int:
        return sum(self.d)

    @property
    def sum_ge_2n(self) -> bool:
        return self.total >= 2 * self.n


@dataclass
class ScanReport:
    n_max: int
    d_max: int
    rows: list[ScanRow]

    @property
    def checked(self) -> int:
        return sum(1 for r in self.rows if r.stable)

    @property
    def counterexamples(self) -> list[tuple[int, ...]]:
        return [r.d for r in self.rows if r.stable and not r.sum_ge_2n]

    def to_csv(self, include_unstable: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d", "sum", "stable", "sum_ge_2n", "min_heavy_excess"])
        for r in self.rows:
            if r.stable or include_unstable:
                w.writerow([r.n, " ".join(map(str, r.d)), r.total, int(r.stable), int(r.sum_ge_2n), r.min_heavy_excess])
        return buf.getvalue()


def even_sum_degrees(n_max: int, d_max: int, n_min: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing d with n_min <= n <= n_max, 1 <= d_i <= d_max and even sum."""
    for n in range(n_min, n_max + 1):
        for d in itertools.combinations_with_replacement(range(1, d_max + 1), n):
            if sum(d) % 2 == 0:
                yield d


def stable_grid(n_min: int, n_max: int, d_max: int) -> list[tuple[int, ...]]:
    """Stable even-sum nondecreasing degree vectors."""
    return [d for d in even_sum_degrees(n_max, d_max, n_min) if not has_strictly_semistable(d)]


def scan_degree_claim(n_max: int, d_max: int) -> ScanReport:
    """Check sum(d) >= 2n over every stable even-sum nondecreasing d in range."""
    rows = []
    for d in even_sum_degrees(n_max, d_max):
        stable = not has_strictly_semistable(d)
        rows.append(ScanRow(d, stable, min_heavy_excess(d)))
    return ScanReport(n_max, d_max, rows)


# -- fixed-point weights ----------------------------------------------------------------

def _exterior_weights(weights: list[int], j: int) -> Counter:
    """Multiset of weights of Lambda^j of a representation with the given weight list."""
    out: Counter = Counter()
    for combo in itertools.combinations(range(len(weights)), j):
        out[sum(weights[k] for k in combo)] += 1
    return out


def _symmetric_weights(weights: list[int], p: int) -> Counter:
    out: Counter = Counter()
    for combo in itertools.combinations_with_replacement(range(len(weights)), p):
        out[sum(weights[k] for k in combo)] += 1
    return out


@dataclass(frozen=True)
class StratumWeights:
    stratum: Stratum
    line_bundle_weight: int
    term_weights: dict[int, dict[int, int]]  # degree q -> weight -> multiplicity
    max_term_weight: int | None

    @property
    def total_max(self) -> int | None:
        if self.max_term_weight is None:
            return None
        return self.max_term_weight + self.line_bundle_weight

    @property
    def below_eta(self) -> bool:
        return self.total_max is None or self.total_max < self.stratum.eta

    def to_dict(self) -> dict:
        return {
            "heavy_set": list(self.stratum.heavy_set),
            "mu": self.stratum.mu,
            "eta": self.stratum.eta,
            "line_bundle_weight": self.line_bundle_weight,
            "max_term_weight": self.max_term_weight,
            "max_total_weight": self.total_max,
            "below_eta": self.below_eta,
            "term_weights": {
                str(q): {str(w): c for w, c in sorted(ws.items())} for q, ws in sorted(self.term_weights.items())
            },
        }


@dataclass
class WeightReport:
    polarization: Polarization
    j: int
    strata: list[StratumWeights]

    @property
    def all_line_bundle_negative(self) -> bool:
        return all(s.line_bundle_weight < 0 for s in self.strata)

    @property
    def diagnostics(self) -> list[tuple[int, ...]]:
        """Heavy sets whose per-term bound fails (not a contradiction, see module docs)."""
        return [s.stratum.heavy_set for s in self.strata if not s.below_eta]

    def to_dict(self) -> dict:
        return {
            "d": list(self.polarization.d),
            "j": self.j,
            "all_line_bundle_negative": self.all_line_bundle_negative,
            "diagnostics": [list(h) for h in self.diagnostics],
            "strata": [s.to_dict() for s in self.strata],
        }


def fixed_point_weight_report(p, j: int) -> WeightReport:
    """Per-stratum weights of the terms of the j-th exterior power of Omega -> g^v, twisted by L.

    The degree-q term is Lambda^(j-q) Omega tensor S^q g^v.  At z_I the
    cotangent weight of factor i is +2 for i in I and -2 otherwise; g^v has
    weights -2, 0, 2; L has weight -mu.
    """
    p = _as_polarization(p)
    if j < 0:
        raise ValueError("j must be nonnegative")
    out = []
    for st in strata(p):
        lb = -st.mu
        if lb >= 0:
            raise AssertionError(f"line bundle weight {lb} is not negative on stratum {st.heavy_set}")
        omega = [2 if i + 1 in st.heavy_set else -2 for i in range(p.n)]
        terms: dict[int, dict[int, int]] = {}
        for q in range(j + 1):
            if j - q > p.n:
                continue
            ext = _exterior_weights(omega, j - q)
            sym = _symmetric_weights([-2, 0, 2], q)
            c: Counter = Counter()
            for a, x in ext.items():
                for b, y in sym.items():
                    c[a + b] += x * y
            terms[q] = dict(sorted(c.items()))
        all_w = [w for ws in terms.values() for w in ws]
        out.append(StratumWeights(st, lb, terms, max(all_w) if all_w else None))
    return WeightReport(p, j, out)
