"""Independent reference computations used to check the package."""

import itertools
import random
from fractions import Fraction

from bottgit.polyring import Polynomial, evaluate, variables_of


def dense_rank(rows) -> int:
    """Textbook Gaussian elimination over Q on a dense list of rows."""
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def dense_matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def brute_invariant_dim(factors, sym=0, v0=0) -> int:
    """Multiplicity of the trivial sl2 module: (# weight 0) - (# weight 2), by enumerating weights."""
    slots = [list(range(-d, d + 1, 2)) for d in factors]
    if v0:
        slots.append(list(range(-v0, v0 + 1, 2)))
    sym_weights = [sum(c) for c in itertools.combinations_with_replacement((-2, 0, 2), sym)]
    count = {0: 0, 2: 0}
    for combo in itertools.product(*slots):
        base = sum(combo)
        for w in sym_weights:
            if base + w in count:
                count[base + w] += 1
    return count[0] - count[2]


def _act(point: dict, g) -> dict:
    """Act by g = (a, b, c, d) on every slot: (x, y) -> (a x + b y, c x + d y), and on (X0, Y0, Z0) as on (x^2, x y, y^2)."""
    a, b, c, d = g
    out = {}
    for name, v in point.items():
        if name[0] == "x":
            out[name] = a * v + b * point["y" + name[1:]]
        elif name[0] == "y":
            out[name] = c * point["x" + name[1:]] + d * v
    X, Y, Z = point.get("X0"), point.get("Y0"), point.get("Z0")
    if X is not None:
        out["X0"] = a * a * X + 2 * a * b * Y + b * b * Z
        out["Y0"] = a * c * X + (a * d + b * c) * Y + b * d * Z
        out["Z0"] = c * c * X + 2 * c * d * Y + d * d * Z
    return out


def random_point(names, rng: random.Random) -> dict:
    pt = {}
    for name in names:
        pt[name] = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        if name[0] in "xy":
            other = ("y" if name[0] == "x" else "x") + name[1:]
            pt.setdefault(other, Fraction(rng.randint(-20, 20), rng.randint(1, 7)))
    if any(n in pt for n in ("X0", "Y0", "Z0")):
        for n in ("X0", "Y0", "Z0"):
            pt.setdefault(n, Fraction(rng.randint(-20, 20), rng.randint(1, 7)))
    return pt


def sl2_invariant_numerically(p: Polynomial, trials: int = 3, seed: int = 0) -> bool:
    """p(g . v) == p(v) for random v and random integer g with det 1."""
    rng = random.Random(seed)
    names = variables_of(p)
    for _ in range(trials):
        a, b = rng.randint(-4, 4), rng.randint(1, 4)
        c = rng.randint(-4, 4)
        # det = a d - b c = 1 with d rational
        d = Fraction(1 + b * c, a) if a else None
        if d is None:
            a, b, c, d = 0, -1, 1, rng.randint(-3, 3)
        pt = random_point(names, rng)
        if evaluate(p, _act(pt, (a, b, c, d))) != evaluate(p, pt):
            return False
    return True
