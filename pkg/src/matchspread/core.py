"""Ground-set primitives: product measures on small finite sets, upward
closures, expected cover counts, probability-vector transforms, and the
falling-factorial bound used by the permutation-counting arguments.

Everything here is exact: measures and cover counts are computed in rational
arithmetic whenever the inputs are rational. Floating point enters only in
the Monte Carlo layer (see :mod:`matchspread.experiment`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import InfeasibleSizeError
from .rational import check_probability, fraction_str, to_fraction

#: Exact enumeration is refused beyond this many ground-set items.
ENUMERATION_CEILING = 24

#: Base of the logarithm in the amplification exponent of t_ell_transform.
T_ELL_LOG_BASE = 2


def t_ell_exponent(ell: int) -> int:
    """Exponent m = 4*floor(log2(2*ell)) + 7, computed in integer arithmetic."""
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    return 4 * ((2 * ell).bit_length() - 1) + 7


@dataclass(frozen=True)
class GroundSet:
    """A finite set of distinct, sortable item identifiers.

    Items are stored sorted, so iteration order is canonical. For edge
    ground sets the conventional item encoding is ``"u-v"`` with u < v.
    """

    items: tuple
    r: int | None = None

    def __init__(self, items: Iterable, r: int | None = None):
        items = tuple(sorted(items))
        for a, b in zip(items, items[1:]):
            if a == b:
                raise ValueError(f"duplicate ground-set item {a!r}")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "r", r)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, item) -> bool:
        return item in self.index()

    def index(self) -> Mapping:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = MappingProxyType({x: i for i, x in enumerate(self.items)})
            self.__dict__["_index"] = cached
        return cached

    def mask(self, subset: Iterable) -> int:
        """Bitmask of a subset, in canonical item order."""
        idx = self.index()
        m = 0
        for x in subset:
            m |= 1 << idx[x]
        return m

    def unmask(self, mask: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.items) if mask >> i & 1)

    def to_json(self) -> dict:
        return {"items": list(self.items), "r": self.r}

    @classmethod
    def from_json(cls, data: dict) -> "GroundSet":
        return cls(data["items"], data.get("r"))


@dataclass(frozen=True)
class ProbVector:
    """A per-item inclusion probability vector over a ground set."""

    ground: GroundSet
    values: Mapping

    def __init__(self, ground: GroundSet, values: Mapping):
        vals = {x: check_probability(to_fraction(p), f"p[{x!r}]") for x, p in values.items()}
        if set(vals) != set(ground.items):
            raise ValueError("probability vector domain must equal the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "values", MappingProxyType(vals))

    @classmethod
    def uniform(cls, ground: GroundSet, p) -> "ProbVector":
        p = to_fraction(p)
        return cls(ground, {x: p for x in ground})

    def __getitem__(self, item) -> Fraction:
        return self.values[item]

    def map(self, fn) -> "ProbVector":
        return ProbVector(self.ground, {x: fn(p) for x, p in self.values.items()})

    def scaled_capped(self, k) -> "ProbVector":
        """Componentwise min(k * p, 1)."""
        k = to_fraction(k)
        return self.map(lambda p: min(k * p, Fraction(1)))

    def leq(self, other: "ProbVector") -> bool:
        return all(self.values[x] <= other.values[x] for x in self.ground)

    def to_json(self) -> dict:
        return {
            "items": list(self.ground.items),
            "values": {str(x): fraction_str(p) for x, p in self.values.items()},
        }


@dataclass(frozen=True)
class SubsetFamily:
    """An explicit family of subsets of a small ground set.

    ``claims_increasing`` asserts upward closure, which is verified by
    one-element extension on construction. ``ell`` optionally bounds the
    size of the minimal members.
    """

    ground: GroundSet
    members: frozenset
    claims_increasing: bool = False
    ell: int | None = None

    def __init__(
        self,
        ground: GroundSet,
        members: Iterable,
        claims_increasing: bool = False,
        ell: int | None = None,
    ):
        universe = set(ground.items)
        mem = frozenset(frozenset(s) for s in members)
        for s in mem:
            if not s <= universe:
                raise ValueError(f"family member {set(s)!r} not inside the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "claims_increasing", claims_increasing)
        object.__setattr__(self, "ell", ell)
        if claims_increasing and not self.is_increasing():
            raise ValueError("family is not closed under supersets")
        if ell is not None:
            bad = [s for s in self.minimal_members() if len(s) > ell]
            if bad:
                raise ValueError(f"minimal member of size {len(bad[0])} exceeds ell={ell}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, subset) -> bool:
        return frozenset(subset) in self.members

    def masks(self) -> list[int]:
        return [self.ground.mask(s) for s in self.members]

    def is_increasing(self) -> bool:
        """Check upward closure by adding one missing item at a time."""
        mem = self.members
        for s in mem:
            for x in self.ground:
                if x not in s and s | {x} not in mem:
                    return False
        return True

    def minimal_members(self) -> list[frozenset]:
        out = []
        for s in self.members:
            if not any(t < s for t in self.members):
                out.append(s)
        return out

    def is_trivial(self) -> bool:
        """Empty family, or the full power set of the ground set."""
        return len(self.members) in (0, 1 << len(self.ground))

    def to_json(self) -> dict:
        return {
            "ground": self.ground.to_json(),
            "members": sorted([sorted(s) for s in self.members]),
            "claims_increasing": self.claims_increasing,
            "ell": self.ell,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SubsetFamily":
        return cls(
            GroundSet.from_json(data["ground"]),
            [frozenset(s) for s in data["members"]],
            data.get("claims_increasing", False),
            data.get("ell"),
        )


def _check_ceiling(ground: GroundSet, what: str) -> None:
    if len(ground) > ENUMERATION_CEILING:
        raise InfeasibleSizeError(
            f"enumeration infeasible: {what} needs |X| <= {ENUMERATION_CEILING}, "
            f"got {len(ground)}; fall back to Monte Carlo estimation"
        )


def mu_exact(family: SubsetFamily, p: ProbVector) -> Fraction:
    """Product-measure mass of the family:
    sum over members S of prod_{x in S} p_x * prod_{y not in S} (1 - p_y).
    """
    _check_ceiling(family.ground, "mu_exact")
    if p.ground != family.ground:
        raise ValueError("probability vector defined on a different ground set")
    total = Fraction(0)
    for s in family.members:
        term = Fraction(1)
        for x in family.ground:
            term *= p[x] if x in s else 1 - p[x]
            if term == 0:
                break
        total += term
    return total


def up_closure(g: SubsetFamily) -> SubsetFamily:
    """The upward closure: every superset of a member. Idempotent."""
    _check_ceiling(g.ground, "up_closure")
    n = len(g.ground)
    seen = set(g.masks())
    frontier = list(seen)
    while frontier:
        m = frontier.pop()
        for i in range(n):
            ext = m | 1 << i
            if ext not in seen:
                seen.add(ext)
                frontier.append(ext)
    return SubsetFamily(
        g.ground, [g.ground.unmask(m) for m in seen], claims_increasing=True
    )


def expected_cover_count(g: SubsetFamily, q: ProbVector) -> Fraction:
    """Expected number of members contained in a q-random subset:
    sum over members S of prod_{x in S} q_x.
    """
    if q.ground != g.ground:
        raise ValueError("probability vector defined on a different ground set")
    return sum((math.prod((q[x] for x in s), start=Fraction(1)) for s in g.members), Fraction(0))


def t_ell_transform(q: ProbVector, ell: int) -> ProbVector:
    """Componentwise amplification p_x = 1 - (1 - q_x)^m with
    m = 4*floor(log2(2*ell)) + 7. Satisfies q <= p <= min(m*q, 1).
    """
    m = t_ell_exponent(ell)
    return q.map(lambda v: 1 - (1 - v) ** m)


def boost_vector(p: ProbVector, k: int) -> ProbVector:
    """Inclusion probabilities of the union of k independent p-samples:
    r_x = 1 - (1 - p_x)^k.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    return p.map(lambda v: 1 - (1 - v) ** k)


def boosted_hit_probability(family: SubsetFamily, p: ProbVector, k: int) -> Fraction:
    """Probability that at least one of k independent p-samples lies in the
    family: 1 - (1 - mu)^k. For an increasing family this lower-bounds both
    mu at the union vector boost_vector(p, k) and mu at min(k*p, 1).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    return 1 - (1 - mu_exact(family, p)) ** k


def faithful_threshold_map(family: SubsetFamily, p: ProbVector):
    """The canonical faithful threshold statistic: mu itself below 1/2,
    and 1/(4(1 - mu)) above. Continuous and increasing in mu; infinite
    when p gives the family full measure.
    """
    if family.is_trivial():
        raise ValueError("threshold map undefined for the empty family or the full power set")
    if not (family.claims_increasing or family.is_increasing()):
        raise ValueError("threshold map requires an increasing family")
    mu = mu_exact(family, p)
    if mu <= Fraction(1, 2):
        return mu
    if mu == 1:
        return math.inf
    return 1 / (4 * (1 - mu))


def falling_factorial(n: int, x: int) -> int:
    """n (n-1) ... (n-x+1) in exact integer arithmetic; 0 when x > n."""
    if n < 0 or x < 0:
        raise ValueError("falling_factorial needs nonnegative integers")
    if x > n:
        return 0
    return math.perm(n, x)
