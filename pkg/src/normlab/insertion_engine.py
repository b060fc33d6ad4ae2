"""The three constructive insertion procedures, generic over carriers.

Each procedure consumes elements of any :class:`~normlab.lattice_core.AlgElement`
carrier (plus an injected oracle where one is needed) and emits a trace whose
every inequality is re-checkable from the trace alone.  Countable sequences
become finite lists: on the finite model they stabilize, on the sequence
model they are exercised at explicit truncation depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    BoundViolation,
    EmptyFamily,
    NormlabError,
    OracleContractViolation,
    PreconditionViolation,
)
from .finite_space import FiniteSpace, NotSeparable, envelopes, urysohn
from .lattice_core import AlgElement, finite_join, finite_meet, rescale_to_unit, unscale
from .rationals import ONE, ZERO, rat
from .seq_model import (
    SeqFunc,
    semicontinuity_on_y,
    threshold_indicator,
    urysohn_y,
)


@dataclass
class MergeTrace:
    """Full record of a merge run: both approximating sequences and the checks."""
    a_norm: list
    b_norm: list
    u_seq: list
    v_seq: list
    result: AlgElement
    checked_inequalities: list[tuple[str, bool]] = field(default_factory=list)


def tong_merge(a_seq: Sequence[AlgElement], b_seq: Sequence[AlgElement]) -> MergeTrace:
    """Merge a decreasing and an increasing approximation into one element.

    After normalizing (prefix meets of a_seq, prefix joins of b_seq), builds
    u_n = (a_1^b_1) v ... v (a_n^b_n) and v_n = u_n v a_n.  The join of the
    u_n equals the meet of the v_n exactly on these finite carriers; the
    trace records the inequalities the argument rests on, each verified
    pointwise, and the common value is the merged element.
    """
    if not a_seq or not b_seq:
        raise EmptyFamily("merge needs nonempty sequences")
    n = max(len(a_seq), len(b_seq))
    a_seq = list(a_seq) + [a_seq[-1]] * (n - len(a_seq))
    b_seq = list(b_seq) + [b_seq[-1]] * (n - len(b_seq))
    a_norm, b_norm = [], []
    for i in range(n):
        a_norm.append(a_seq[i] if i == 0 else a_norm[-1].meet(a_seq[i]))
        b_norm.append(b_seq[i] if i == 0 else b_norm[-1].join(b_seq[i]))
    f = a_norm[-1]
    bad = f.first_violation(b_norm[-1])
    if bad is not None:
        raise PreconditionViolation(
            f"meet of a_seq exceeds join of b_seq at {bad!r}")
    u_seq, v_seq = [], []
    for i in range(n):
        term = a_norm[i].meet(b_norm[i])
        u_seq.append(term if i == 0 else u_seq[-1].join(term))
        v_seq.append(u_seq[-1].join(a_norm[i]))
    u = u_seq[-1]
    v = finite_meet(v_seq)
    checks = [
        ("f <= u", f.le(u)),
        ("v <= u join f", v.le(u.join(f))),
        ("u = v", u.eq_pointwise(v)),
    ]
    for i, vi in enumerate(v_seq):
        checks.append((f"u <= v_{i + 1}", u.le(vi)))
    if not all(ok for _, ok in checks):
        failed = [name for name, ok in checks if not ok]
        raise PreconditionViolation(f"merge invariants failed: {failed}")
    return MergeTrace(a_norm, b_norm, u_seq, v_seq, u, checks)


@dataclass
class IterationTrace:
    """The refined sequence a_n together with its certified step bounds."""
    a_seq: list
    step_bounds: list[Fraction]

    @property
    def result(self) -> AlgElement:
        return self.a_seq[-1]


Oracle = Callable[[AlgElement, AlgElement, Fraction], AlgElement]


def dieudonne_iterate(oracle: Oracle, f: AlgElement, g: AlgElement, steps: int) -> IterationTrace:
    """Iterate a strict-insertion oracle into a Cauchy refining sequence.

    The oracle takes (lower, upper, epsilon) with lower + epsilon <= upper
    and returns some a with lower <= a <= upper.  Step m+1 squeezes between
    (f - 1/2^{m+1}) v (a_m - 1/2^m) and g ^ (a_m + 1/2^m) at gap 1/2^{m+1}.
    Both loop invariants are checked exactly at every step:
    (1) f - 1/2^n <= a_n <= g, and (2) a_n - 1/2^n <= a_{n+1} <= a_n + 1/2^n;
    the tail bound ||a_{n+p} - a_n|| <= 2^{1-n} is then verified for every
    recorded pair.
    """
    if steps < 1:
        raise PreconditionViolation("at least one step is required")
    bad = f.first_violation(g)
    if bad is not None:
        raise PreconditionViolation(f"f <= g fails at {bad!r}")
    a_seq: list[AlgElement] = []
    bounds: list[Fraction] = []
    for m in range(1, steps + 1):
        eps = Fraction(1, 2 ** m)
        if m == 1:
            lower, upper = f - eps, g
        else:
            prev = a_seq[-1]
            prev_eps = bounds[-1]
            lower = (f - eps).join(prev - prev_eps)
            upper = g.meet(prev + prev_eps)
        gap_bad = (lower + eps).first_violation(upper)
        if gap_bad is not None:
            raise PreconditionViolation(
                f"iteration gap lost at step {m}, point {gap_bad!r}")
        a = oracle(lower, upper, eps)
        if not lower.le(a) or not a.le(upper):
            raise OracleContractViolation(m, a, "witness outside its sandwich")
        if not (f - eps).le(a) or not a.le(g):
            raise OracleContractViolation(m, a, "invariant (1) broken")
        if a_seq:
            prev = a_seq[-1]
            if not (prev - bounds[-1]).le(a) or not a.le(prev + bounds[-1]):
                raise OracleContractViolation(m, a, "invariant (2) broken")
        a_seq.append(a)
        bounds.append(eps)
    for i in range(len(a_seq)):
        tail = Fraction(2, 2 ** (i + 1))
        for j in range(i + 1, len(a_seq)):
            delta = (a_seq[j] - a_seq[i]).norm()
            if delta > tail:
                raise BoundViolation(i + 1, f"tail {delta} exceeds {tail}")
    return IterationTrace(a_seq, bounds)


def midpoint_oracle(lower: AlgElement, upper: AlgElement, eps) -> AlgElement:
    """Reference strict-insertion oracle: the pointwise midpoint."""
    return (lower + upper) * Fraction(1, 2)


def farey_fractions(q_max: int) -> list[Fraction]:
    """All fractions in [0, 1] with denominator at most q_max.

    Enumerated by increasing denominator then numerator; duplicates removed
    keeping first occurrence.  Consecutive values in sorted order differ by
    at most 1/q_max.
    """
    if q_max < 1:
        raise PreconditionViolation("denominator bound must be at least 1")
    seen = []
    for den in range(1, q_max + 1):
        for num in range(den + 1):
            v = Fraction(num, den)
            if v not in seen:
                seen.append(v)
    return seen


class FiniteUrysohnCarrier:
    """Level sets and separation witnesses over a finite space."""

    def __init__(self, space: FiniteSpace):
        self.space = space

    def check_pair(self, f, g):
        upper, _ = envelopes(self.space, f)
        if not upper.eq_pointwise(f):
            raise PreconditionViolation("f is not upper semicontinuous")
        _, lower = envelopes(self.space, g)
        if not lower.eq_pointwise(g):
            raise PreconditionViolation("g is not lower semicontinuous")
        bad = f.first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"f <= g fails at point {bad}")

    def closed_superlevel(self, f, s) -> int:
        return sum(1 << x for x in range(self.space.n) if f.value_at(x) >= s)

    def open_strict_superlevel(self, g, r) -> int:
        return sum(1 << x for x in range(self.space.n) if g.value_at(x) > r)

    def urysohn(self, closed_f: int, open_g: int):
        """Continuous h with h = 1 on the closed set, h = 0 off the open set."""
        off = (~open_g) & ((1 << self.space.n) - 1)
        result = urysohn(self.space, off, closed_f)
        if isinstance(result, NotSeparable):
            raise PreconditionViolation(
                f"level sets not separable: {result.c:#b} vs {result.d:#b}")
        return result


class YUrysohnCarrier:
    """Level sets and separation witnesses over the compactified naturals."""

    def check_pair(self, f: SeqFunc, g: SeqFunc):
        if not semicontinuity_on_y(f)["usc"]:
            raise PreconditionViolation("f is not upper semicontinuous")
        if not semicontinuity_on_y(g)["lsc"]:
            raise PreconditionViolation("g is not lower semicontinuous")
        bad = f.first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"f <= g fails at {bad!r}")

    def closed_superlevel(self, f: SeqFunc, s) -> SeqFunc:
        return threshold_indicator(f, s)

    def open_strict_superlevel(self, g: SeqFunc, r) -> SeqFunc:
        return threshold_indicator(g, r, strict=True)

    def urysohn(self, closed_f: SeqFunc, open_g: SeqFunc) -> SeqFunc:
        off = ONE - open_g
        return urysohn_y(off, closed_f)


def urysohn_join_stream(carrier, f: AlgElement, g: AlgElement, q_max: int):
    """Approximate insertion from below by a finite join of scaled separations.

    For each rational pair r < s with denominators at most q_max (after
    rescaling f, g into the unit interval), a continuous c_rs is built that
    is r on the closed superlevel set {f >= s} and 0 off the open set
    {g > r}, so c_rs <= g.  The join J of all c_rs satisfies J <= g
    everywhere and J >= f - 1/q_max at every point where the rescaled f
    takes a value of denominator at most q_max (at other points the Farey
    mesh only pins f down to its nearest grid values).  Results and
    certificate are reported in original coordinates.
    """
    carrier.check_pair(f, g)
    f1, g1, transform = rescale_to_unit(f, g)
    grid = farey_fractions(q_max)
    mesh = Fraction(1, q_max)
    parts = [f1.const_like(ZERO)]
    pair_log = []
    for s in grid:
        for r in grid:
            if not r < s:
                continue
            level_f = carrier.closed_superlevel(f1, s)
            level_g = carrier.open_strict_superlevel(g1, r)
            try:
                h = carrier.urysohn(level_f, level_g)
            except NormlabError as exc:
                raise PreconditionViolation(
                    f"urysohn oracle failed on pair (r={r}, s={s}): {exc}") from exc
            c_rs = h * r
            below_g = c_rs.le(g1)
            pair_log.append({"r": r, "s": s, "c_below_g": below_g})
            if not below_g:
                raise PreconditionViolation(f"c_rs exceeds g on pair (r={r}, s={s})")
            parts.append(c_rs)
    joined = finite_join(parts)
    guarantee = []
    grid_set = set(grid)
    for p in f1.probe_points():
        fv = f1.value_at(p)
        if fv in grid_set:
            ok = joined.value_at(p) >= fv - mesh
            guarantee.append({"point": repr(p), "f_scaled": fv, "ok": ok})
            if not ok:
                raise BoundViolation(p, f"join below f - 1/{q_max}")
    cert = {
        "q_max": q_max,
        "transform": transform,
        "pairs": pair_log,
        "guarantee_points": guarantee,
        "join_below_g": joined.le(g1),
    }
    return unscale(joined, transform), cert


def increasing_approx(reference: AlgElement, c_seq: Sequence[AlgElement],
                      r_seq: Sequence) -> list[AlgElement]:
    """Monotone below-approximation of a reference element from tagged approximants.

    Each c_n comes with a certified error bound r_n (||reference - c_n||
    <= r_n, verified here; BoundViolation names the first failing n).
    Returns the prefix joins a_n of the shifted elements c_n - r_n; each a_n
    is below the reference with ||reference - a_n|| <= 2 * min(r_1..r_n).
    The factor 2 is sharp: c_n may sit r_n below the reference, and shifting
    by r_n doubles the defect.
    """
    if len(c_seq) != len(r_seq) or not c_seq:
        raise PreconditionViolation("c_seq and r_seq must be nonempty and aligned")
    rates = [rat(r) for r in r_seq]
    out: list[AlgElement] = []
    best = None
    for n, (c, r) in enumerate(zip(c_seq, rates), start=1):
        if (reference - c).norm() > r:
            raise BoundViolation(n, f"||reference - c_{n}|| > {r}")
        shifted = c - r
        a_n = shifted if not out else out[-1].join(shifted)
        best = r if best is None else min(best, r)
        if not a_n.le(reference):
            raise BoundViolation(n, "approximant exceeds the reference")
        if (reference - a_n).norm() > 2 * best:
            raise BoundViolation(n, f"certified rate 2*{best} missed")
        out.append(a_n)
    return out
