"""Degree-sequence graph counting (exact and asymptotic), the
isolated-vertex moment calculus for the expected-degree and exact-degree
models, and the finite-n diagnostics behind their concentration arguments.

The exact counter and the labeled enumerator are independent
implementations, so each can serve as an oracle for the other; the
asymptotic counter is the classical pairing-model formula

    ||d||_1! / ((||d||_1/2)! 2^{||d||_1/2} prod d_i!) * exp(-lam - lam^2),

with lam = sum d_i (d_i - 1) / (2 ||d||_1), valid when
2 + d_1 (3/2 d_1 + 1) < ||d||_1 / 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Mapping

from .errors import InfeasibleSizeError
from .models import DegreeSequence
from .rational import fraction_str

COUNT_VERTEX_CEILING = 10
COUNT_DEGREE_SUM_CEILING = 24
ENUMERATE_VERTEX_CEILING = 8


@lru_cache(maxsize=None)
def _count(degrees: tuple[int, ...]) -> int:
    if any(d < 0 for d in degrees):
        return 0
    degrees = tuple(sorted(degrees, reverse=True))
    if not degrees or degrees[0] == 0:
        return 1
    if sum(degrees) % 2 or degrees[0] > len(degrees) - 1:
        return 0
    d0 = degrees[0]
    rest = degrees[1:]
    total = 0
    for neighbors in combinations(range(len(rest)), d0):
        reduced = list(rest)
        ok = True
        for i in neighbors:
            reduced[i] -= 1
            if reduced[i] < 0:
                ok = False
                break
        if ok:
            total += _count(tuple(sorted(reduced, reverse=True)))
    return total


def count_graphs_exact(d: DegreeSequence) -> int:
    """Number of labeled simple graphs with the given degree sequence."""
    if d.n > COUNT_VERTEX_CEILING or d.total > COUNT_DEGREE_SUM_CEILING:
        raise InfeasibleSizeError(
            f"exact counting needs n <= {COUNT_VERTEX_CEILING} and "
            f"degree sum <= {COUNT_DEGREE_SUM_CEILING}"
        )
    return _count(d.degrees)


def enumerate_graphs(d: DegreeSequence) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield the edge set of every labeled realization exactly once.

    Independent of count_graphs_exact: this one walks vertices in label
    order and branches on the neighborhood of the first unfinished vertex.
    """
    if d.n > ENUMERATE_VERTEX_CEILING:
        raise InfeasibleSizeError(f"enumeration needs n <= {ENUMERATE_VERTEX_CEILING}")
    n = d.n
    residual = list(d.degrees)
    adjacent = [set() for _ in range(n)]
    edges: list[tuple[int, int]] = []

    def first_open() -> int:
        for v in range(n):
            if residual[v] > 0:
                return v
        return -1

    def walk() -> Iterator[tuple[tuple[int, int], ...]]:
        v = first_open()
        if v < 0:
            yield tuple(sorted(edges))
            return
        need = residual[v]
        candidates = [
            w for w in range(v + 1, n) if residual[w] > 0 and w not in adjacent[v]
        ]
        if len(candidates) < need:
            return
        for group in combinations(candidates, need):
            residual[v] = 0
            for w in group:
                residual[w] -= 1
                adjacent[v].add(w)
                adjacent[w].add(v)
                edges.append((v, w))
            yield from walk()
            for w in group:
                residual[w] += 1
                adjacent[v].discard(w)
                adjacent[w].discard(v)
                edges.pop()
            residual[v] = need

    yield from walk()


@dataclass(frozen=True)
class McKayEstimate:
    """Asymptotic count of graphs with a given degree sequence.

    ``leading`` and ``lam`` are exact rationals; the only floating step is
    exp(-lam - lam^2). ``valid`` records the theorem's applicability window
    delta_hat < ||d||_1 / 3 (delta_hat is a half-integer when d_1 is odd).
    """

    leading: Fraction
    lam: Fraction
    delta_hat: Fraction
    valid: bool
    estimate: float

    def log_estimate(self) -> float:
        """Natural log of the estimate, stable for large sequences."""
        return (
            float(math.log(self.leading.numerator) - math.log(self.leading.denominator))
            - float(self.lam)
            - float(self.lam) ** 2
        )

    def to_json(self) -> dict:
        return {
            "leading": fraction_str(self.leading),
            "lambda": fraction_str(self.lam),
            "delta_hat": fraction_str(self.delta_hat),
            "valid": self.valid,
            "estimate": self.estimate,
        }


def mckay_count(d: DegreeSequence) -> McKayEstimate:
    """Pairing-model asymptotic count; exact leading factor, float exp."""
    if d.total % 2:
        raise ValueError("degree sum must be even")
    if d.degrees[-1] < 1:
        raise ValueError("degrees must be positive (drop isolated vertices)")
    total = d.total
    half = total // 2
    leading = Fraction(math.factorial(total), math.factorial(half) * 2**half)
    for deg in d.degrees:
        leading /= math.factorial(deg)
    lam = Fraction(sum(deg * (deg - 1) for deg in d.degrees), 2 * total)
    d1 = d.degrees[0]
    delta_hat = 2 + d1 * (Fraction(3, 2) * d1 + 1)
    valid = delta_hat < Fraction(total, 3)
    correction = math.exp(-float(lam) - float(lam) ** 2)
    if leading.numerator < 2**1020 * leading.denominator:
        estimate = float(leading) * correction
    else:  # avoid float overflow on big sequences
        estimate = math.inf
    return McKayEstimate(leading, lam, delta_hat, valid, estimate)


def reduced_sequence_first(d: DegreeSequence) -> DegreeSequence:
    """Degrees left after deleting one low-class vertex together with its
    (necessarily high-class) neighborhood of size d2."""
    d1, n1, d2, n2 = d.bivalued()
    if d2 > n1:
        raise ValueError("no admissible neighborhood: d2 exceeds n1")
    return DegreeSequence([d1] * (n1 - d2) + [d1 - 1] * d2 + [d2] * (n2 - 1))


def reduced_sequence_second(d: DegreeSequence, w: int) -> DegreeSequence:
    """Degrees left after deleting two low-class vertices whose high-class
    neighborhoods overlap in w vertices."""
    d1, n1, d2, n2 = d.bivalued()
    if not 0 <= w <= d2:
        raise ValueError("overlap w must lie in [0, d2]")
    if n1 - 2 * d2 + w < 0 or n2 < 2:
        raise ValueError("no admissible pair of neighborhoods for this overlap")
    return DegreeSequence(
        [d1] * (n1 - 2 * d2 + w)
        + [d1 - 1] * (2 * (d2 - w))
        + [d1 - 2] * w
        + [d2] * (n2 - 2)
    )


@dataclass(frozen=True)
class MomentReport:
    """First and second falling moments of an obstruction count X, plus
    Chebyshev tail bounds P(X <= t) <= Var X / (E X - t)^2."""

    method: str
    ex: Fraction | float
    exx: Fraction | float
    ratio: Fraction | float | None
    chebyshev_tail: Mapping
    mckay_valid_all: bool | None = None

    def variance(self):
        return self.exx + self.ex - self.ex**2

    def tail_bound(self, t):
        if not t < self.ex:
            raise ValueError("Chebyshev bound needs t < E X")
        bound = self.variance() / (self.ex - t) ** 2
        return min(bound, 1) if isinstance(bound, Fraction) else min(float(bound), 1.0)

    def to_json(self) -> dict:
        def enc(x):
            if x is None:
                return None
            return fraction_str(x) if isinstance(x, (Fraction, int)) else float(x)

        return {
            "method": self.method,
            "ex": enc(self.ex),
            "exx": enc(self.exx),
            "ratio": enc(self.ratio),
            "chebyshev_tail": {str(t): enc(v) for t, v in self.chebyshev_tail.items()},
            "mckay_valid_all": self.mckay_valid_all,
        }


def _report(method, ex, exx, tail_points, valid_all=None) -> MomentReport:
    ratio = None if ex == 0 else exx / ex**2
    var = exx + ex - ex**2
    tails = {}
    for t in tail_points:
        if t < ex:
            bound = var / (ex - t) ** 2
            tails[t] = min(bound, Fraction(1)) if isinstance(bound, Fraction) else min(float(bound), 1.0)
    return MomentReport(method, ex, exx, ratio, tails, valid_all)


def gnd_isolated_moments(d: DegreeSequence, method: str = "exact") -> MomentReport:
    """Moments of X = number of low-class vertices with all neighbors in the
    high class, under the uniform exact-degree model.

    E X = n2 C(n1, d2) D(reduced_1) / D(d) and the second falling moment is
    the overlap sum over w of C(d2, w) C(n1 - d2, d2 - w) D(reduced_2(w));
    both are exact counting identities. method="exact" evaluates every D by
    the exact counter; method="asymptotic" substitutes the pairing-model
    estimate (validity flags are reported, not enforced).
    """
    d1, n1, d2, n2 = d.bivalued()
    if d2 < 1:
        raise ValueError("low-class degree must be positive")

    flags = []

    def dcount(seq: DegreeSequence):
        if method == "exact":
            return count_graphs_exact(seq)
        positive = DegreeSequence([x for x in seq.degrees if x > 0])
        est = mckay_count(positive)
        flags.append(est.valid)
        return est.estimate

    if method not in ("exact", "asymptotic"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" and (d.n > COUNT_VERTEX_CEILING or d.total > COUNT_DEGREE_SUM_CEILING):
        raise InfeasibleSizeError("sequence too large for the exact counter")

    denom = dcount(d)
    if denom == 0:
        raise ValueError("degree sequence has no realization")

    if d2 > n1:
        ex = Fraction(0) if method == "exact" else 0.0
    else:
        num = dcount(reduced_sequence_first(d))
        ex = n2 * math.comb(n1, d2) * (Fraction(num, denom) if method == "exact" else num / denom)

    exx = Fraction(0) if method == "exact" else 0.0
    if n2 >= 2 and d2 <= n1:
        acc = Fraction(0) if method == "exact" else 0.0
        for w in range(d2 + 1):
            weight = math.comb(d2, w) * math.comb(n1 - d2, d2 - w)
            if weight == 0 or n1 - 2 * d2 + w < 0:
                continue
            num = dcount(reduced_sequence_second(d, w))
            acc += weight * (Fraction(num, denom) if method == "exact" else num / denom)
        exx = n2 * (n2 - 1) * math.comb(n1, d2) * acc

    return _report(
        method, ex, exx, (0, n1), None if method == "exact" else all(flags)
    )


def bivalued_obstruction_moments(n1: int, n2: int, p, q, scope: str = "global"):
    """Exact product-measure moments of the isolated-vertex count in the
    low class of a two-block model with cross probability p and within-low
    probability q.

    scope="global": X counts low-class vertices with no neighbor at all.
    scope="within_block": X counts low-class vertices with no low-class
    neighbor (cross edges ignored).
    Returns (E X, E X(X-1)).
    """
    p, q = Fraction(p), Fraction(q)
    if scope == "global":
        ex = n2 * (1 - q) ** (n2 - 1) * (1 - p) ** n1
        exx = (
            n2 * (n2 - 1) * (1 - q) ** (2 * n2 - 3) * (1 - p) ** (2 * n1)
            if n2 >= 2
            else Fraction(0)
        )
    elif scope == "within_block":
        ex = n2 * (1 - q) ** (n2 - 1)
        exx = n2 * (n2 - 1) * (1 - q) ** (2 * n2 - 3) if n2 >= 2 else Fraction(0)
    else:
        raise ValueError(f"unknown scope {scope!r}")
    return ex, exx


def chung_lu_obstruction_moments(d: DegreeSequence, case: str) -> MomentReport:
    """Closed-form moments of the isolated-vertex obstruction in the
    expected-degree model; exact product-measure identities with the capped
    pair probabilities."""
    total = d.total
    if case in ("D1", "D2"):
        d1, n1, d2, n2 = d.bivalued()
        p = min(Fraction(1), Fraction(d1 * d2, total))
        q = min(Fraction(1), Fraction(d2 * d2, total))
        scope = "global" if case == "D1" else "within_block"
        ex, exx = bivalued_obstruction_moments(n1, n2, p, q, scope)
        return _report("exact", ex, exx, (0, n1))
    if case == "k_valued":
        vals, sizes = d.values, d.class_sizes
        k = d.k
        nk = sizes[-1]
        pk = [min(Fraction(1), Fraction(vals[x] * vals[-1], total)) for x in range(k)]
        ex = nk * math.prod(
            (1 - pk[x]) ** (sizes[x] - (1 if x == k - 1 else 0)) for x in range(k)
        )
        if nk >= 2:
            exx = (
                nk
                * (nk - 1)
                * math.prod((1 - pk[x]) ** (2 * sizes[x]) for x in range(k - 1))
                * (1 - pk[-1]) ** (2 * nk - 3)
            )
        else:
            exx = Fraction(0)
        return _report("exact", ex, exx, (0, sizes[0]))
    raise ValueError(f"unknown case {case!r}")


@dataclass(frozen=True)
class MomentDiagnostics:
    """Finite-n values of the enumeration-ratio correction terms.

    A = sum d_i (d_i - 1); the deletion identities give B = A - T with
    T = d2 (d2 + 2 d1 - 3) for one deleted vertex and
    T = 2 d2 (d2 + 2 d1 - 3) - 2 w for a pair with neighborhood overlap w
    (the identity is checkable against the explicit reduced sequences).
    Z assembles (A' - B')(1 + A' + B') with A' = A / (2 ||d||_1) and
    B' = (A - T) / (2 ||d||_1 - k d2), k = 2 for the first moment and k = 8
    for the second; phi_* are the same products built from the actual
    reduced-sequence lambdas.
    """

    n: int
    norm1: int
    A: int
    T_first: int
    Z_first: Fraction
    Z_second: Mapping
    max_Z_second: Fraction
    phi_first: Fraction
    phi_second: Mapping

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "norm1": self.norm1,
            "A": self.A,
            "T_first": self.T_first,
            "Z_first": fraction_str(self.Z_first),
            "Z_second": {str(w): fraction_str(z) for w, z in self.Z_second.items()},
            "max_Z_second": fraction_str(self.max_Z_second),
            "phi_first": fraction_str(self.phi_first),
            "phi_second": {str(w): fraction_str(z) for w, z in self.phi_second.items()},
        }


def moment_diagnostics(d: DegreeSequence) -> MomentDiagnostics:
    """Z and phi correction diagnostics for a two-valued sequence."""
    d1, n1, d2, n2 = d.bivalued()
    if d2 < 1:
        raise ValueError("low-class degree must be positive")
    total = d.total
    A = sum(x * (x - 1) for x in d.degrees)
    a_prime = Fraction(A, 2 * total)

    def z_value(T: int, k: int) -> Fraction:
        b_prime = Fraction(A - T, 2 * total - k * d2)
        return (a_prime - b_prime) * (1 + a_prime + b_prime)

    def phi_value(T: int, removed: int) -> Fraction:
        lam2 = Fraction(A - T, 2 * (total - removed))
        return (a_prime - lam2) * (1 + a_prime + lam2)

    T_first = d2 * (d2 + 2 * d1 - 3)
    Z_first = z_value(T_first, 2)
    phi_first = phi_value(T_first, 2 * d2)

    def t_second(w: int) -> int:
        return 2 * d2 * (d2 + 2 * d1 - 3) - 2 * w

    Z_second = {w: z_value(t_second(w), 8) for w in range(d2 + 1)}
    phi_second = {w: phi_value(t_second(w), 4 * d2) for w in range(d2 + 1)}
    return MomentDiagnostics(
        d.n,
        total,
        A,
        T_first,
        Z_first,
        Z_second,
        max(Z_second.values()),
        phi_first,
        phi_second,
    )


@dataclass(frozen=True)
class ConditionReport:
    """Finite-n ratios whose vanishing/divergence the regularity conditions
    assert; classification is the caller's job (smallness is a property of
    a sequence of models, not of one instance)."""

    n: int
    d1: int
    d2: int
    dn: int
    n1: int
    n2: int
    norm1: int
    delta: Fraction
    ratios: Mapping

    def to_json(self) -> dict:
        def enc(x):
            return fraction_str(x) if isinstance(x, Fraction) else float(x)

        return {
            "n": self.n,
            "d1": self.d1,
            "d2": self.d2,
            "dn": self.dn,
            "n1": self.n1,
            "n2": self.n2,
            "norm1": self.norm1,
            "delta": fraction_str(self.delta),
            "ratios": {k: enc(v) for k, v in self.ratios.items()},
        }


def condition_report(d: DegreeSequence, delta=Fraction(15, 16)) -> ConditionReport:
    """Ratios for the bi-valued regularity conditions and the degree
    condition. For sequences with more than two values the low-class
    entries use the smallest-degree class."""
    delta = Fraction(delta)
    n = d.n
    total = d.total
    d1 = d.degrees[0]
    dn = d.degrees[-1]
    n1 = d.class_sizes[0]
    d2 = d.values[-1]
    n2 = d.class_sizes[-1]
    logn = math.log(n) if n > 1 else 0.0
    ratios = {
        "d2_sq_over_n1": Fraction(d2 * d2, n1),
        "d1_sq_over_sqrt_n_d2": (d1 * d1) / math.sqrt(n * d2) if d2 > 0 else math.inf,
        "log_n_over_d2": logn / d2 if d2 > 0 else math.inf,
        "n2sq_d2cubed_over_norm_sq": Fraction(n2 * n2 * d2**3, total * total),
        "n1_over_n_delta": n1 / n ** float(delta),
        "d1_sq_over_norm": Fraction(d1 * d1, total),
        "dn_over_log_n": dn / logn if logn > 0 else math.inf,
    }
    return ConditionReport(n, d1, d2, dn, n1, n2, total, delta, ratios)
