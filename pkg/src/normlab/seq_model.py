"""The one-point compactification model of the discrete naturals.

Functions on the naturals are represented as eventually periodic rational
sequences (a finite prefix plus a repeating cycle), optionally carrying a
value at the added point omega.  These fragments are closed under all the
algebra operations, so order and equality stay decidable, and the
countable/infinitary extension conditions become checkable at explicit
truncation depth with certificates.

A function on the compactified carrier is "convergent" when its cycle is a
single repeated value equal to its omega value; convergent functions are
exactly the representable continuous functions on the compactification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    CarrierMismatch,
    ContainsOmega,
    CoverViolation,
    EmptyFamily,
    GapViolation,
    InsertionInfeasible,
    NegativeInput,
    NotConvergent,
    OmegaMissing,
    PreconditionViolation,
    SearchBudgetExceeded,
)
from .lattice_core import AlgElement, finite_join
from .rationals import ONE, ZERO, rat


class Omega:
    """The added point of the compactification; a singleton sentinel."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "omega"


OMEGA = Omega()


def _canonical(prefix, cycle):
    # minimal period of the cycle
    length = len(cycle)
    for d in range(1, length + 1):
        if length % d == 0 and cycle == cycle[:d] * (length // d):
            cycle = cycle[:d]
            break
    # absorb prefix entries that the (rotated) cycle already produces
    prefix = list(prefix)
    cycle = list(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        prefix.pop()
        cycle = [cycle[-1]] + cycle[:-1]
    return tuple(prefix), tuple(cycle)


class SeqFunc(AlgElement):
    """An eventually periodic rational sequence, canonical by construction.

    The value at k is prefix[k] for k below the prefix length, then the cycle
    repeats.  When an omega value is present the function lives on the
    compactified carrier; operations require both operands on the same
    carrier.  Equality is decidable via the canonical form.
    """

    def __init__(self, prefix: Iterable = (), cycle: Iterable = (0,), omega=None):
        prefix = [rat(v) for v in prefix]
        cycle = [rat(v) for v in cycle]
        if not cycle:
            raise PreconditionViolation("cycle must be nonempty")
        self.prefix, self.cycle = _canonical(prefix, cycle)
        self.omega = None if omega is None else rat(omega)

    @classmethod
    def constant(cls, value, with_omega: bool = False) -> "SeqFunc":
        v = rat(value)
        return cls((), (v,), v if with_omega else None)

    @classmethod
    def from_support(cls, pairs: dict[int, object], default=0, omega=None) -> "SeqFunc":
        """Finitely many exceptional values over a constant background."""
        top = max(pairs) + 1 if pairs else 0
        d = rat(default)
        return cls([rat(pairs.get(k, d)) for k in range(top)], (d,), omega)

    @classmethod
    def periodic(cls, cycle: Iterable, omega=None) -> "SeqFunc":
        return cls((), cycle, omega)

    @property
    def has_omega(self) -> bool:
        return self.omega is not None

    def at(self, k: int) -> Fraction:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def restrict_to_naturals(self) -> "SeqFunc":
        return SeqFunc(self.prefix, self.cycle, None)

    def with_omega(self, value) -> "SeqFunc":
        return SeqFunc(self.prefix, self.cycle, value)

    def is_convergent(self) -> bool:
        """Single-valued cycle, equal to the omega value when one is present."""
        if len(self.cycle) != 1:
            return False
        return self.omega is None or self.omega == self.cycle[0]

    def support(self) -> list[int]:
        """Indices in the naturals with nonzero value; only meaningful when the cycle is zero."""
        if any(v != 0 for v in self.cycle):
            raise PreconditionViolation("support is infinite (nonzero cycle)")
        return [k for k, v in enumerate(self.prefix) if v != 0]

    # AlgElement primitives

    def zip_with(self, other, fn):
        if not isinstance(other, SeqFunc):
            raise PreconditionViolation("operand is not a sequence function")
        if self.has_omega != other.has_omega:
            raise CarrierMismatch("one operand has an omega value, the other does not")
        p = max(len(self.prefix), len(other.prefix))
        cyc_len = math.lcm(len(self.cycle), len(other.cycle))
        prefix = [fn(self.at(k), other.at(k)) for k in range(p)]
        cycle = [fn(self.at(p + j), other.at(p + j)) for j in range(cyc_len)]
        om = fn(self.omega, other.omega) if self.has_omega else None
        return SeqFunc(prefix, cycle, om)

    def map_values(self, fn):
        om = fn(self.omega) if self.has_omega else None
        return SeqFunc([fn(v) for v in self.prefix], [fn(v) for v in self.cycle], om)

    def const_like(self, value):
        return SeqFunc.constant(value, with_omega=self.has_omega)

    def probe_points(self):
        pts: list = list(range(len(self.prefix) + len(self.cycle)))
        if self.has_omega:
            pts.append(OMEGA)
        return pts

    def value_at(self, point):
        if point is OMEGA:
            if not self.has_omega:
                raise OmegaMissing("no omega value on this carrier")
            return self.omega
        return self.at(point)

    def __eq__(self, other):
        return (isinstance(other, SeqFunc) and self.prefix == other.prefix
                and self.cycle == other.cycle and self.omega == other.omega)

    def __hash__(self):
        return hash((self.prefix, self.cycle, self.omega))

    def __repr__(self):
        om = "" if self.omega is None else f", omega={self.omega}"
        return f"SeqFunc({list(map(str, self.prefix))}, cycle={list(map(str, self.cycle))}{om})"


def pointwise_op(op: str, f: SeqFunc, g: SeqFunc) -> SeqFunc:
    """Named pointwise operation; prefixes align, cycle lengths take the lcm."""
    ops: dict[str, Callable] = {
        "add": lambda a, b: a + b,
        "mul": lambda a, b: a * b,
        "join": max,
        "meet": min,
    }
    if op == "scalar":
        raise PreconditionViolation("scalar op takes a rational; use scalar_mul")
    if op not in ops:
        raise PreconditionViolation(f"unknown op {op!r}")
    return f.zip_with(g, ops[op])


def scalar_mul(r, f: SeqFunc) -> SeqFunc:
    return f * rat(r)


def limit_data(f: SeqFunc):
    """(liminf, limsup, limit?) of the tail: the extrema of the cycle values."""
    lo, hi = min(f.cycle), max(f.cycle)
    return lo, hi, (lo if lo == hi else None)


def semicontinuity_on_y(f: SeqFunc) -> dict:
    """Semicontinuity on the compactified carrier, decided at omega.

    Points of the naturals are isolated, so f is upper semicontinuous iff
    its omega value dominates the limsup, lower semicontinuous iff it is
    dominated by the liminf, continuous iff both (i.e. f is convergent).
    """
    if not f.has_omega:
        raise OmegaMissing("semicontinuity on the compactification needs an omega value")
    lo, hi, _ = limit_data(f)
    usc = f.omega >= hi
    lsc = f.omega <= lo
    return {"usc": usc, "lsc": lsc, "continuous": usc and lsc}


@dataclass(frozen=True)
class Witness:
    """A successful insertion: the witness element plus its limit."""
    func: SeqFunc
    limit: Fraction


class InfeasibleCert:
    """Certificate that no convergent function fits between f and g.

    Carries (limsup f, liminf g) with limsup f > liminf g; ``refute``
    produces, for any candidate convergent function, an explicit index where
    f <= candidate <= g fails.
    """

    def __init__(self, f: SeqFunc, g: SeqFunc):
        self.f = f
        self.g = g
        self.limsup_f = limit_data(f)[1]
        self.liminf_g = limit_data(g)[0]

    def refute(self, candidate: SeqFunc) -> int:
        if not candidate.is_convergent():
            raise NotConvergent("candidate must be convergent")
        bound = max(len(self.f.prefix), len(self.g.prefix), len(candidate.prefix))
        span = bound + math.lcm(len(self.f.cycle), len(self.g.cycle))
        for k in range(span):
            if not self.f.at(k) <= candidate.at(k) <= self.g.at(k):
                return k
        raise PreconditionViolation("candidate is a valid insertion; certificate is wrong")

    def __repr__(self):
        return f"InfeasibleCert(limsup_f={self.limsup_f}, liminf_g={self.liminf_g})"


def insert_convergent(f: SeqFunc, g: SeqFunc):
    """Convergent a with f <= a <= g on the naturals, or an infeasibility certificate.

    Feasible iff limsup f <= liminf g; the witness limit is the midpoint of
    that interval, clamped into [f(k), g(k)] at each index.  The feasibility
    criterion is a model-level fact validated against an independent
    brute-force oracle in the test suite.
    """
    if f.has_omega or g.has_omega:
        raise CarrierMismatch("insert_convergent works on the naturals (no omega values)")
    bad = f.first_violation(g)
    if bad is not None:
        raise PreconditionViolation(f"f <= g fails at index {bad}")
    hi = limit_data(f)[1]
    lo = limit_data(g)[0]
    if hi > lo:
        return InfeasibleCert(f, g)
    limit = (hi + lo) / 2
    p = max(len(f.prefix), len(g.prefix))
    prefix = [max(f.at(k), min(limit, g.at(k))) for k in range(p)]
    return Witness(SeqFunc(prefix, (limit,)), limit)


def brute_force_insertable(f: SeqFunc, g: SeqFunc, depth: int = 64):
    """Independent oracle: search for a limit with finitely many constraint misses.

    A convergent insertion exists iff some rational L satisfies
    f(k) <= L <= g(k) for all but finitely many k.  Candidate limits are all
    values of f and g seen up to the depth; for each, tail feasibility is
    checked over one full cycle beyond both prefixes.  Shares no logic with
    :func:`insert_convergent`.
    """
    candidates = sorted({f.at(k) for k in range(depth)} | {g.at(k) for k in range(depth)})
    start = max(len(f.prefix), len(g.prefix))
    span = math.lcm(len(f.cycle), len(g.cycle))
    for cand in candidates:
        ok = all(f.at(k) <= cand <= g.at(k) for k in range(start, start + span))
        if ok:
            return cand
    return None


def strict_insert(f: SeqFunc, g: SeqFunc, epsilon) -> Witness:
    """Insertion under a uniform gap f + epsilon <= g.

    This is the strict-insertion oracle consumed by the iterative refiner.
    The gap does not by itself guarantee a convergent witness on this
    non-compact carrier (take f with cycle [0,1] and g = f + epsilon); when
    none exists the infeasibility certificate is raised, which is exactly how
    a strict-insertion failure surfaces on this model.
    """
    eps = rat(epsilon)
    if eps <= 0:
        raise PreconditionViolation("epsilon must be positive")
    shifted = f + eps
    bad = shifted.first_violation(g)
    if bad is not None:
        raise GapViolation(bad, shifted.at(bad), g.at(bad))
    result = insert_convergent(f, g)
    if isinstance(result, InfeasibleCert):
        raise InsertionInfeasible(result)
    return result


def insert_on_y(f: SeqFunc, g: SeqFunc) -> Witness:
    """Continuous insertion on the compact carrier; always succeeds.

    For usc f <= lsc g on the compactification, the feasible limits form the
    interval [f(omega), g(omega)]; the witness takes the limit f(omega),
    clamped into [f(k), g(k)] at each natural.
    """
    if not (f.has_omega and g.has_omega):
        raise OmegaMissing("both functions must carry omega values")
    sc_f = semicontinuity_on_y(f)
    if not sc_f["usc"]:
        raise PreconditionViolation("f is not upper semicontinuous at omega")
    sc_g = semicontinuity_on_y(g)
    if not sc_g["lsc"]:
        raise PreconditionViolation("g is not lower semicontinuous at omega")
    bad = f.first_violation(g)
    if bad is not None:
        raise PreconditionViolation(f"f <= g fails at {bad!r}")
    limit = f.omega
    p = max(len(f.prefix), len(g.prefix))
    span = p + math.lcm(len(f.cycle), len(g.cycle))
    prefix = [max(f.at(k), min(limit, g.at(k))) for k in range(span)]
    return Witness(SeqFunc(prefix, (limit,), limit), limit)


class YSet:
    """A decidable subset of the compactified naturals.

    Four kinds: a finite subset of the naturals, a finite set with omega, a
    cofinite set with omega (given by its excluded naturals), and a cofinite
    set without omega.  Closed under complement; open iff it omits omega or
    is cofinite-with-omega, closed iff the complement is open.
    """

    FINITE = "finite"
    FINITE_WITH_OMEGA = "finite_with_omega"
    COFINITE_WITH_OMEGA = "cofinite_with_omega"
    COFINITE_WITHOUT_OMEGA = "cofinite_without_omega"

    def __init__(self, kind: str, members: Iterable[int] = ()):
        if kind not in (self.FINITE, self.FINITE_WITH_OMEGA,
                        self.COFINITE_WITH_OMEGA, self.COFINITE_WITHOUT_OMEGA):
            raise PreconditionViolation(f"unknown YSet kind {kind!r}")
        self.kind = kind
        self.members = tuple(sorted(set(int(k) for k in members)))

    @classmethod
    def finite(cls, members: Iterable[int]) -> "YSet":
        return cls(cls.FINITE, members)

    @classmethod
    def finite_with_omega(cls, members: Iterable[int]) -> "YSet":
        return cls(cls.FINITE_WITH_OMEGA, members)

    @classmethod
    def cofinite_with_omega(cls, excluded: Iterable[int]) -> "YSet":
        return cls(cls.COFINITE_WITH_OMEGA, excluded)

    @classmethod
    def cofinite_without_omega(cls, excluded: Iterable[int]) -> "YSet":
        return cls(cls.COFINITE_WITHOUT_OMEGA, excluded)

    @property
    def contains_omega(self) -> bool:
        return self.kind in (self.FINITE_WITH_OMEGA, self.COFINITE_WITH_OMEGA)

    def __contains__(self, point) -> bool:
        if point is OMEGA:
            return self.contains_omega
        k = int(point)
        if self.kind in (self.FINITE, self.FINITE_WITH_OMEGA):
            return k in self.members
        return k not in self.members

    def complement(self) -> "YSet":
        flip = {
            self.FINITE: self.COFINITE_WITH_OMEGA,
            self.FINITE_WITH_OMEGA: self.COFINITE_WITHOUT_OMEGA,
            self.COFINITE_WITH_OMEGA: self.FINITE,
            self.COFINITE_WITHOUT_OMEGA: self.FINITE_WITH_OMEGA,
        }
        return YSet(flip[self.kind], self.members)

    def is_open(self) -> bool:
        """Open in the compactification: omits omega, or cofinite with omega."""
        return not self.contains_omega or self.kind == self.COFINITE_WITH_OMEGA

    def is_closed(self) -> bool:
        return self.complement().is_open()

    def is_finite(self) -> bool:
        return self.kind in (self.FINITE, self.FINITE_WITH_OMEGA)

    def indicator(self) -> SeqFunc:
        """The 0/1 indicator as a function on the compactified carrier."""
        om = ONE if self.contains_omega else ZERO
        if self.kind in (self.FINITE, self.FINITE_WITH_OMEGA):
            return SeqFunc.from_support({k: 1 for k in self.members}, 0, om)
        return SeqFunc.from_support({k: 0 for k in self.members}, 1, om)

    def __eq__(self, other):
        return (isinstance(other, YSet) and self.kind == other.kind
                and self.members == other.members)

    def __hash__(self):
        return hash((self.kind, self.members))

    def __repr__(self):
        return f"YSet({self.kind}, {list(self.members)})"


class GeoTail:
    """A geometrically decaying tail over a finite prefix.

    Value at k beyond the prefix is q * ratio**(k - prefix length) with the
    ratio strictly between 0 and 1, so the limit is 0.  Supports only
    evaluation, limit, zero-set, and finite-support queries; it is not closed
    under the algebra operations and does not pretend to be.
    """

    def __init__(self, prefix: Iterable = (), q=1, ratio=Fraction(1, 2)):
        self.prefix = tuple(rat(v) for v in prefix)
        self.q = rat(q)
        self.ratio = rat(ratio)
        if not 0 < self.ratio < 1:
            raise PreconditionViolation("ratio must lie strictly between 0 and 1")

    def at(self, k: int) -> Fraction:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.q * self.ratio ** (k - len(self.prefix))

    @property
    def omega(self) -> Fraction:
        return ZERO

    def limit(self) -> Fraction:
        return ZERO

    def has_finite_support(self) -> bool:
        return self.q == 0

    def zero_prefix_indices(self) -> list[int]:
        return [k for k, v in enumerate(self.prefix) if v == 0]

    def __repr__(self):
        return f"GeoTail({list(map(str, self.prefix))}, q={self.q}, ratio={self.ratio})"


def threshold_indicator(f: SeqFunc, level, strict: bool = False) -> SeqFunc:
    """The 0/1 indicator of {x : f(x) >= level} (or > level when strict).

    Level sets of eventually periodic functions are again eventually
    periodic, so the indicator is always representable; it serves as the set
    representation for subsets of the compactification that are not of the
    four finite/cofinite kinds.
    """
    s = rat(level)
    if strict:
        return f.map_values(lambda v: ONE if v > s else ZERO)
    return f.map_values(lambda v: ONE if v >= s else ZERO)


def indicator_is_closed_set(ind: SeqFunc) -> bool:
    """Whether a 0/1 indicator on the compactification names a closed set.

    Every set containing omega is closed (its complement is a subset of the
    isolated naturals, hence open); a set avoiding omega is closed exactly
    when it is finite.  Equivalently: the indicator is upper semicontinuous.
    """
    if not ind.has_omega:
        raise OmegaMissing("set indicators live on the compactified carrier")
    if not ind.is_zero_one_valued():
        raise PreconditionViolation("indicator must be 0/1 valued")
    return semicontinuity_on_y(ind)["usc"]


def urysohn_y(c: SeqFunc, d: SeqFunc) -> SeqFunc:
    """Continuous h on the compactification with h = 0 on c and h = 1 on d.

    c and d are disjoint closed sets given as 0/1 indicators.  A closed set
    missing omega is finite, and the sets are disjoint so at most one
    contains omega; the finite side determines h directly:
    h = 1 - (indicator of c) when omega is in d, otherwise h = indicator
    of d.  Either way h is convergent, hence continuous.
    """
    for ind in (c, d):
        if not indicator_is_closed_set(ind):
            raise PreconditionViolation("both sets must be closed")
    overlap = (c.meet(d)).value_bounds()[1]
    if overlap > 0:
        raise PreconditionViolation("sets must be disjoint")
    if d.omega == 1:
        return ONE - c
    return d


def ideal_membership(f) -> dict:
    """Membership in the compactness ideal and in the radical at omega.

    A convergent function belongs to the compactness ideal iff the closure of
    its cozero set misses omega, i.e. the cozero set is a finite subset of
    the naturals; it belongs to the radical (the maximal ideal at omega) iff
    it vanishes at omega.  Accepts convergent :class:`SeqFunc` values and
    :class:`GeoTail` witnesses; the certificate is the computed coz-closure.
    """
    if isinstance(f, GeoTail):
        if f.has_finite_support():
            support = [k for k, v in enumerate(f.prefix) if v != 0]
            return {"in_I_alpha": True, "in_J_radical": True,
                    "cert": YSet.finite(support)}
        zeros = f.zero_prefix_indices()
        return {"in_I_alpha": False, "in_J_radical": True,
                "cert": YSet.cofinite_with_omega(zeros)}
    if not isinstance(f, SeqFunc) or not f.has_omega or not f.is_convergent():
        raise NotConvergent("ideal membership is defined for convergent functions on the compactification")
    in_j = f.omega == 0
    if in_j:
        support = [k for k, v in enumerate(f.prefix) if v != 0]
        return {"in_I_alpha": True, "in_J_radical": True, "cert": YSet.finite(support)}
    zeros = [k for k, v in enumerate(f.prefix) if v == 0]
    return {"in_I_alpha": False, "in_J_radical": False,
            "cert": YSet.cofinite_with_omega(zeros)}


def alpha_compact_indicator(subset: YSet) -> bool:
    """Whether the indicator of a subset of the naturals is a compact element.

    Compact subsets of the discrete naturals are exactly the finite ones.
    The property-based suite cross-checks this against the cover-based
    definition on sampled families.
    """
    if subset.contains_omega:
        raise ContainsOmega("the subset must lie in the naturals")
    return subset.is_finite()


def local_compact_minorants(b: SeqFunc, depth: int) -> SeqFunc:
    """Truncation minorant: b restricted to indices 0..depth, zero beyond.

    The result has finite support (hence lies in the compactness ideal), is
    below b, and agrees with b up to the depth, so the pointwise supremum of
    the truncations recovers b on the naturals: the constructive witness that
    the model is locally compact.
    """
    if not b.is_convergent():
        raise NotConvergent("minorants are built for convergent b")
    if b.value_bounds()[0] < 0:
        raise NegativeInput("b must be nonnegative")
    values = {k: b.at(k) for k in range(depth + 1)}
    return SeqFunc.from_support(values, 0, ZERO if b.has_omega else None)


def subcover_extract(epsilon, family: Sequence[SeqFunc]):
    """Finite subfamily of a verified cover whose join stays nonnegative.

    The family members are convergent functions on the compactification whose
    pointwise supremum is at least epsilon everywhere.  Greedy selection:
    one member large at omega covers the whole tail; each prefix index where
    it drops to 0 or below is patched by a member that is at least
    epsilon/2 there.  Returns (subfamily indices, certificate).
    """
    eps = rat(epsilon)
    if eps <= 0:
        raise PreconditionViolation("epsilon must be positive")
    family = list(family)
    if not family:
        raise EmptyFamily("cover family must be nonempty")
    for t in family:
        if not (t.has_omega and t.is_convergent()):
            raise NotConvergent("family members must be convergent on the compactification")
    omega_sup = max(t.omega for t in family)
    if omega_sup < eps:
        raise CoverViolation(OMEGA, omega_sup, eps)
    depth = max(len(t.prefix) for t in family)
    for k in range(depth):
        sup_k = max(t.at(k) for t in family)
        if sup_k < eps:
            raise CoverViolation(k, sup_k, eps)
    star = next(i for i, t in enumerate(family) if t.omega > eps / 2)
    chosen = [star]
    patches = []
    t_star = family[star]
    for k in range(len(t_star.prefix)):
        if t_star.at(k) <= 0:
            j = next(i for i, t in enumerate(family) if t.at(k) >= eps / 2)
            if j not in chosen:
                chosen.append(j)
            patches.append({"index": k, "member": j})
    joined = finite_join([family[i] for i in chosen])
    lo = joined.value_bounds()[0]
    cert = {
        "star": star,
        "patches": patches,
        "join_min": lo,
        "join_omega": joined.omega,
    }
    if lo < 0:
        raise PreconditionViolation("greedy subcover failed its own certificate")
    return chosen, cert


def noncompact_family(epsilon, delta):
    """The defeating cover family witnessing the compactness failure on the naturals.

    Member n equals epsilon+delta up to index n and -delta beyond (a
    convergent function with limit -delta).  The pointwise supremum over the
    whole family is epsilon+delta everywhere, yet any finite subfamily's join
    equals -delta at every index past the largest truncation; ``defeat`` maps
    a finite subfamily to that explicit index.
    """
    eps, dlt = rat(epsilon), rat(delta)
    if eps <= 0 or dlt <= 0:
        raise PreconditionViolation("epsilon and delta must be positive")
    hi = eps + dlt

    def member(n: int) -> SeqFunc:
        return SeqFunc([hi] * (n + 1), (-dlt,), -dlt)

    def stream() -> Iterator[SeqFunc]:
        n = 0
        while True:
            yield member(n)
            n += 1

    def defeat(indices: Sequence[int]):
        """(index, join value) refuting the finite subfamily with the given truncations."""
        if not indices:
            return 0, None
        k = max(indices) + 1
        value = max(member(n).at(k) for n in indices)
        return k, value

    return member, stream, defeat


def countable_meet_family(f: SeqFunc):
    """The classical countable selection realizing f as a meet of convergent majorants.

    Member (n, m) takes the value f(n) + 1/m at index n and the sup-norm of f
    everywhere else (including omega), so every member dominates f and the
    truncated meets descend to f pointwise.
    """
    if f.has_omega:
        raise CarrierMismatch("f lives on the naturals")
    bound = f.norm()

    def member(n: int, m: int) -> SeqFunc:
        if m <= 0:
            raise PreconditionViolation("m must be a positive integer")
        return SeqFunc.from_support({n: f.at(n) + Fraction(1, m)}, bound, bound)

    def truncated_meet_at(k: int, m_depth: int) -> Fraction:
        """Meet over members (k, m) for m up to the depth, evaluated at k."""
        return min(f.at(k) + Fraction(1, m_depth), bound)

    return member, truncated_meet_at


def countable_join_family(g: SeqFunc):
    """Dual of :func:`countable_meet_family`: convergent minorants joining up to g."""
    if g.has_omega:
        raise CarrierMismatch("g lives on the naturals")
    bound = -g.norm()

    def member(n: int, m: int) -> SeqFunc:
        if m <= 0:
            raise PreconditionViolation("m must be a positive integer")
        return SeqFunc.from_support({n: g.at(n) - Fraction(1, m)}, bound, bound)

    def truncated_join_at(k: int, m_depth: int) -> Fraction:
        return max(g.at(k) - Fraction(1, m_depth), bound)

    return member, truncated_join_at


def lindelof_extract(epsilon, family: Iterable[SeqFunc], budget: int = 1000):
    """Per-index witnesses from a family whose supremum exceeds epsilon.

    For each natural k the stream is searched for a member exceeding
    epsilon/2 at k; the emitted countable selection has join at least
    epsilon/2.  The family is restarted per index (members are pure values).
    Exhausting the budget raises, which the condition layer reports as an
    unknown verdict at depth, never as a refutation.
    """
    eps = rat(epsilon)
    if eps <= 0:
        raise PreconditionViolation("epsilon must be positive")
    family = family if callable(family) else (lambda fam: (lambda: iter(fam)))(list(family))

    def select(k: int):
        for count, g in enumerate(family()):
            val = g.at(k) if not g.has_omega else g.restrict_to_naturals().at(k)
            if val > eps / 2:
                return count, g
            if count + 1 >= budget:
                raise SearchBudgetExceeded(k, budget)
        raise SearchBudgetExceeded(k, budget)

    def stream() -> Iterator[tuple[int, int, SeqFunc]]:
        k = 0
        while True:
            idx, g = select(k)
            yield k, idx, g
            k += 1

    return select, stream
