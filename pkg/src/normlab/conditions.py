"""Uniform checkers for the interpolation conditions of a basic extension.

Each condition (T, BS, S, N, D, C, L, SL) is checked against a pluggable
extension model; reports carry a three-valued verdict (holds, fails,
unknown_at_depth) and a machine-checkable certificate.  Countable claims are
certified at an explicit truncation depth and never silently finitized.

Models provided: the identity extension over a finite space (every element
is clopen, all conditions hold), the convergent-into-periodic extension over
the naturals (single-element insertion and compactness fail; the countable
interpolation conditions hold), and the compact-carrier extension over the
compactified naturals (everything holds).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    CoverViolation,
    InsertionInfeasible,
    ModelCapabilityMissing,
    NormlabError,
    PreconditionViolation,
    SearchBudgetExceeded,
)
from .finite_space import FiniteFunc, FiniteSpace, Infeasible, envelopes, insert_finite
from .insertion_engine import dieudonne_iterate, midpoint_oracle, tong_merge
from .lattice_core import finite_join, finite_meet
from .rationals import ONE, ZERO, rat
from .seq_model import (
    GeoTail,
    InfeasibleCert,
    SeqFunc,
    Witness,
    countable_join_family,
    countable_meet_family,
    ideal_membership,
    insert_convergent,
    insert_on_y,
    lindelof_extract,
    noncompact_family,
    semicontinuity_on_y,
    strict_insert,
    subcover_extract,
)

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown_at_depth"

CONDITIONS = ("T", "BS", "S", "N", "D", "C", "L", "SL")


@dataclass
class ConditionReport:
    condition: str
    model: str
    instance: dict
    verdict: str
    certificate: dict
    depth: int


class ExtensionModel:
    """Carrier pair (A-side, B-side) with an embedding and condition oracles.

    Subclasses provide ``alpha`` plus one ``cond_<x>`` method per supported
    condition, each returning (verdict, certificate).  The embedding is
    required to preserve +, *, scalars, join, meet, and 1; ``check_embedding``
    verifies that on sampled elements.
    """

    name = "abstract"

    def alpha(self, a):
        raise ModelCapabilityMissing(f"{self.name} has no embedding")

    def sample_a_elements(self, rng: random.Random, count: int) -> list:
        raise ModelCapabilityMissing(f"{self.name} has no element sampler")

    def random_instance(self, rng: random.Random) -> dict:
        raise ModelCapabilityMissing(f"{self.name} has no instance generator")

    def check_embedding(self, rng: random.Random, count: int = 20) -> bool:
        """The embedding respects the algebra operations on sampled pairs."""
        elems = self.sample_a_elements(rng, count)
        for a, b in zip(elems, elems[1:]):
            ia, ib = self.alpha(a), self.alpha(b)
            pairs = [
                (self.alpha(a + b), ia + ib),
                (self.alpha(a * b), ia * ib),
                (self.alpha(a * Fraction(3, 2)), ia * Fraction(3, 2)),
                (self.alpha(a.join(b)), ia.join(ib)),
                (self.alpha(a.meet(b)), ia.meet(ib)),
            ]
            if not all(x.eq_pointwise(y) for x, y in pairs):
                return False
        one = elems[0].const_like(ONE)
        return self.alpha(one).eq_pointwise(self.alpha(one).const_like(ONE))


def check_condition(model: ExtensionModel, cond: str, instance: dict,
                    depth: int = 32) -> ConditionReport:
    """Run one condition check and wrap the result in a report."""
    if cond not in CONDITIONS:
        raise PreconditionViolation(f"unknown condition {cond!r}")
    if cond == "SL":
        left = check_condition(model, "L", instance, depth)
        right = check_condition(model, "N", instance, depth)
        if UNKNOWN in (left.verdict, right.verdict):
            verdict = UNKNOWN
        elif left.verdict == HOLDS and right.verdict == HOLDS:
            verdict = HOLDS
        else:
            verdict = FAILS
        cert = {"decomposition": "L and N", "L": left.certificate,
                "L_verdict": left.verdict, "N": right.certificate,
                "N_verdict": right.verdict}
        return ConditionReport("SL", model.name, instance, verdict, cert, depth)
    method = getattr(model, f"cond_{cond.lower()}", None)
    if method is None:
        raise ModelCapabilityMissing(f"{model.name} cannot check ({cond})")
    verdict, cert = method(instance, depth)
    return ConditionReport(cond, model.name, instance, verdict, cert, depth)


class FiniteFullModel(ExtensionModel):
    """Identity extension over a finite space: A = B = all functions.

    Every element is a (trivial) meet and join from the image, so each
    condition holds with the instance's own endpoints as witnesses.
    """

    def __init__(self, space: FiniteSpace):
        self.space = space
        self.name = f"finite_full_{space.n}pt"

    def alpha(self, a: FiniteFunc) -> FiniteFunc:
        return a

    def sample_a_elements(self, rng, count):
        return [random_finite_func(self.space, rng) for _ in range(count)]

    def random_instance(self, rng):
        f = random_finite_func(self.space, rng)
        bump = random_finite_func(self.space, rng, lo=0)
        return {"f": f, "g": f + bump}

    def _require_pair(self, instance):
        f, g = instance["f"], instance["g"]
        bad = f.first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"f <= g fails at point {bad}")
        return f, g

    def cond_t(self, instance, depth):
        f, g = self._require_pair(instance)
        return HOLDS, {"a_seq": [f], "b_seq": [g], "route": "endpoints are clopen"}

    def cond_bs(self, instance, depth):
        f, g = self._require_pair(instance)
        return HOLDS, {"a_seq": [f], "b_seq": [g], "route": "endpoints are clopen"}

    def cond_s(self, instance, depth):
        f, g = self._require_pair(instance)
        return HOLDS, {"a_seq": [f], "b_seq": [f], "witness": f}

    def cond_n(self, instance, depth):
        f, g = self._require_pair(instance)
        return HOLDS, {"witness": f}

    def cond_d(self, instance, depth):
        f, g = self._require_pair(instance)
        eps = rat(instance.get("epsilon", Fraction(1, 2)))
        bad = (f + eps).first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"gap fails at point {bad}")
        return HOLDS, {"witness": (f + g) * Fraction(1, 2), "epsilon": eps}

    def _finite_subcover(self, instance):
        if "family" not in instance:
            # pair-only instances get the canonical unit cover
            instance = {"epsilon": ONE,
                        "family": [FiniteFunc(self.space, [2] * self.space.n)]}
        eps = rat(instance["epsilon"])
        family = list(instance["family"])
        choices = []
        for x in range(self.space.n):
            vals = [t.value_at(x) for t in family]
            if max(vals) < eps:
                raise CoverViolation(x, max(vals), eps)
            pick = max(range(len(family)), key=lambda i: vals[i])
            if pick not in choices:
                choices.append(pick)
        joined = finite_join([family[i] for i in choices])
        return choices, joined, eps, family

    def cond_c(self, instance, depth):
        choices, joined, eps, family = self._finite_subcover(instance)
        return HOLDS, {"subfamily": choices, "join_min": joined.value_bounds()[0],
                       "epsilon": eps, "family": family}

    def cond_l(self, instance, depth):
        choices, joined, eps, family = self._finite_subcover(instance)
        return HOLDS, {"subfamily": choices, "join_min": joined.value_bounds()[0],
                       "epsilon": eps, "family": family}


class SeqXEndModel(ExtensionModel):
    """Convergent functions embedded into periodic ones over the naturals.

    The A-side is the convergent functions on the compactified carrier, the
    B-side the eventually periodic functions on the naturals, and the
    embedding forgets the omega value.  Countable interpolation holds (every
    B-side element is a closed-form countable meet and join from the image),
    but single-element insertion and compactness fail.
    """

    name = "seq_x_end"

    def alpha(self, a: SeqFunc) -> SeqFunc:
        if not (a.has_omega and a.is_convergent()):
            raise PreconditionViolation("A-side elements are convergent with omega")
        return a.restrict_to_naturals()

    def sample_a_elements(self, rng, count):
        out = []
        for _ in range(count):
            limit = rand_rational(rng)
            prefix = [rand_rational(rng) for _ in range(rng.randint(0, 4))]
            out.append(SeqFunc(prefix, (limit,), limit))
        return out

    def random_instance(self, rng, feasible: bool | None = None):
        f = random_seq_func(rng)
        if feasible:
            # lifting by the cycle spread makes limsup f <= liminf g
            g = f + (max(f.cycle) - min(f.cycle)) + rand_rational(rng, lo=0)
        else:
            g = f + random_seq_func(rng, lo=0)
        return {"f": f, "g": g}

    def _require_pair(self, instance):
        f, g = instance["f"], instance["g"]
        if f.has_omega or g.has_omega:
            raise PreconditionViolation("B-side instances live on the naturals")
        bad = f.first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"f <= g fails at index {bad}")
        return f, g

    def _meet_family_cert(self, f, depth):
        member, trunc = countable_meet_family(f)
        probes = [p for p in f.probe_points()]
        residuals = [trunc(k, depth) - f.at(k) for k in probes]
        return {
            "family": "pointwise majorants (n, m) -> f(n) + 1/m off-bound",
            "depth": depth,
            "max_residual": max(residuals),
            "residual_bound": Fraction(1, depth),
            "closed_form_meet": f,
        }

    def _join_family_cert(self, g, depth):
        member, trunc = countable_join_family(g)
        probes = [p for p in g.probe_points()]
        residuals = [g.at(k) - trunc(k, depth) for k in probes]
        return {
            "family": "pointwise minorants (n, m) -> g(n) - 1/m off-bound",
            "depth": depth,
            "max_residual": max(residuals),
            "residual_bound": Fraction(1, depth),
            "closed_form_join": g,
        }

    def cond_t(self, instance, depth):
        f, g = self._require_pair(instance)
        cert = {
            "meet_side": self._meet_family_cert(f, depth),
            "join_side": self._join_family_cert(g, depth),
            "middle": "closed-form meet f <= closed-form join g",
        }
        return HOLDS, cert

    def cond_bs(self, instance, depth):
        f, g = self._require_pair(instance)
        cert = {
            "join_side": self._join_family_cert(f, depth),
            "meet_side": self._meet_family_cert(g, depth),
            "middle": "closed-form join f <= closed-form meet g",
        }
        return HOLDS, cert

    def cond_s(self, instance, depth):
        f, g = self._require_pair(instance)
        cert = {
            "witness": f,
            "meet_side": self._meet_family_cert(f, depth),
            "join_side": self._join_family_cert(f, depth),
            "note": "both families collapse to the witness in closed form",
        }
        return HOLDS, cert

    def cond_n(self, instance, depth):
        f, g = self._require_pair(instance)
        result = insert_convergent(f, g)
        if isinstance(result, Witness):
            return HOLDS, {"witness": result.func, "limit": result.limit}
        return FAILS, {"limsup_f": result.limsup_f, "liminf_g": result.liminf_g}

    def cond_d(self, instance, depth):
        f, g = self._require_pair(instance)
        eps = rat(instance.get("epsilon", Fraction(1, 2)))
        try:
            w = strict_insert(f, g, eps)
        except InsertionInfeasible as exc:
            cert = exc.certificate
            return FAILS, {"epsilon": eps, "limsup_f": cert.limsup_f,
                           "liminf_g": cert.liminf_g}
        return HOLDS, {"witness": w.func, "limit": w.limit, "epsilon": eps}

    def cond_c(self, instance, depth):
        eps = rat(instance.get("epsilon", ONE))
        delta = rat(instance.get("delta", Fraction(1, 2)))
        member, stream, defeat = noncompact_family(eps, delta)
        size_cap = min(int(instance.get("subfamily_cap", 4)), 6)
        pool = range(min(depth, 8))
        defeats = []
        for combo in _subsets(pool, size_cap):
            idx, value = defeat(list(combo))
            defeats.append({"subfamily": list(combo), "index": idx, "join_value": value})
            if value is not None and value >= 0:
                raise PreconditionViolation("defeat certificate failed")
        return FAILS, {"epsilon": eps, "delta": delta,
                       "family": "truncated plateaus over a negative tail",
                       "defeats": defeats}

    def cond_l(self, instance, depth):
        eps = rat(instance.get("epsilon", ONE))
        delta = rat(instance.get("delta", Fraction(1, 2)))
        member, stream, _ = noncompact_family(eps, delta)
        select, _ = lindelof_extract(eps, stream, budget=max(depth * 4, 64))
        picks = []
        try:
            for k in range(depth):
                idx, gk = select(k)
                picks.append({"index": k, "member": idx, "value": gk.at(k)})
        except SearchBudgetExceeded as exc:
            return UNKNOWN, {"exhausted_at": exc.index, "budget": exc.budget,
                             "picks": picks}
        return HOLDS, {"epsilon": eps, "picks": picks,
                       "note": "countable subfamily = one member per index"}


class SeqYEndModel(ExtensionModel):
    """Identity-style extension on the compactified naturals.

    A-side: convergent functions (the continuous ones); B-side: all
    representable functions with an omega value.  The carrier is compact, so
    insertion, strict insertion, and finite subcovers all succeed.
    """

    name = "seq_y_end"

    def alpha(self, a: SeqFunc) -> SeqFunc:
        if not (a.has_omega and a.is_convergent()):
            raise PreconditionViolation("A-side elements are convergent with omega")
        return a

    def sample_a_elements(self, rng, count):
        return SeqXEndModel().sample_a_elements(rng, count)

    def random_instance(self, rng):
        return random_usc_lsc_pair(rng)

    def _require_pair(self, instance):
        f, g = instance["f"], instance["g"]
        if not semicontinuity_on_y(f)["usc"]:
            raise PreconditionViolation("f is not upper semicontinuous")
        if not semicontinuity_on_y(g)["lsc"]:
            raise PreconditionViolation("g is not lower semicontinuous")
        bad = f.first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"f <= g fails at {bad!r}")
        return f, g

    def cond_n(self, instance, depth):
        f, g = self._require_pair(instance)
        w = insert_on_y(f, g)
        return HOLDS, {"witness": w.func, "limit": w.limit}

    def cond_d(self, instance, depth):
        f, g = self._require_pair(instance)
        eps = rat(instance.get("epsilon", Fraction(1, 2)))
        bad = (f + eps).first_violation(g)
        if bad is not None:
            raise PreconditionViolation(f"gap fails at {bad!r}")
        w = insert_on_y(f, g)
        return HOLDS, {"witness": w.func, "limit": w.limit, "epsilon": eps}

    def _constant_families(self, instance):
        f, g = self._require_pair(instance)
        w = insert_on_y(f, g)
        return f, g, w

    def cond_t(self, instance, depth):
        f, g, w = self._constant_families(instance)
        return HOLDS, {"a_seq": [w.func], "b_seq": [w.func],
                       "route": "single continuous witness serves both sides"}

    def cond_bs(self, instance, depth):
        f, g, w = self._constant_families(instance)
        return HOLDS, {"a_seq": [w.func], "b_seq": [w.func],
                       "route": "single continuous witness serves both sides"}

    def cond_s(self, instance, depth):
        f, g, w = self._constant_families(instance)
        return HOLDS, {"witness": w.func, "a_seq": [w.func], "b_seq": [w.func]}

    def cond_c(self, instance, depth):
        if "family" not in instance:
            # pair-only instances get the canonical unit cover; the carrier is
            # compact, so any verified cover admits a finite subfamily
            instance = {"epsilon": ONE,
                        "family": [SeqFunc.constant(2, with_omega=True)]}
        eps = rat(instance["epsilon"])
        family = list(instance["family"])
        chosen, cert = subcover_extract(eps, family)
        return HOLDS, {"subfamily": chosen, "family": family, "epsilon": eps, **cert}

    def cond_l(self, instance, depth):
        verdict, cert = self.cond_c(instance, depth)
        return verdict, {**cert, "note": "finite subfamily doubles as the countable one"}


def _subsets(pool, max_size):
    import itertools
    for size in range(1, max_size + 1):
        yield from itertools.combinations(pool, size)


def rand_rational(rng: random.Random, lo: int = -3, hi: int = 3,
                  max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_finite_func(space: FiniteSpace, rng: random.Random,
                       lo: int = -3, hi: int = 3, max_den: int = 16) -> FiniteFunc:
    return FiniteFunc(space, [rand_rational(rng, lo, hi, max_den)
                              for _ in range(space.n)])


def random_seq_func(rng: random.Random, lo: int = -3, hi: int = 3,
                    max_den: int = 12, max_len: int = 8) -> SeqFunc:
    total = rng.randint(1, max_len)
    cyc_len = rng.randint(1, total)
    prefix = [rand_rational(rng, lo, hi, max_den) for _ in range(total - cyc_len)]
    cycle = [rand_rational(rng, lo, hi, max_den) for _ in range(cyc_len)]
    return SeqFunc(prefix, cycle)


def random_usc_lsc_pair(rng: random.Random) -> dict:
    """A random pair f <= g on the compactification, f usc and g lsc."""
    base = random_seq_func(rng)
    lo, hi = min(base.cycle), max(base.cycle)
    f = base.with_omega(hi)
    shift = (hi - lo) + rand_rational(rng, lo=0)
    g = (base + shift).with_omega(lo + shift)
    return {"f": f, "g": g}


def random_feasible_x_pair(rng: random.Random) -> dict:
    """A random pair on the naturals admitting a convergent insertion."""
    f = random_seq_func(rng)
    shift = (max(f.cycle) - min(f.cycle)) + rand_rational(rng, lo=0)
    g = f + shift
    return {"f": f, "g": g}


def equivalence_harness(model: ExtensionModel, instances: Iterable[dict],
                        depth: int = 16) -> list[dict]:
    """Exercise the implications between conditions by converting witnesses.

    Each row reports (implication, instances tested, failures).  Conversions
    are constructive: merge runs on truncated interpolation families, the
    iterative refiner lifts the strict oracle to single witnesses, and the
    compactness verdict is cross-checked against the ideal membership of 1.
    Failures are data, not exceptions.
    """
    rows = {
        "T_to_S_via_merge": {"tested": 0, "failures": 0},
        "BS_to_T_chained": {"tested": 0, "failures": 0},
        "D_to_N_via_iteration": {"tested": 0, "failures": 0},
        "C_iff_compact_unit": {"tested": 0, "failures": 0},
        "eps_removal_form2_to_form3": {"tested": 0, "failures": 0},
    }
    for instance in instances:
        f, g = instance["f"], instance["g"]

        t_report = check_condition(model, "T", instance, depth)
        if t_report.verdict == HOLDS:
            rows["T_to_S_via_merge"]["tested"] += 1
            if not _merge_gives_s(model, f, g, depth):
                rows["T_to_S_via_merge"]["failures"] += 1

        bs_report = check_condition(model, "BS", instance, depth)
        if bs_report.verdict == HOLDS:
            rows["BS_to_T_chained"]["tested"] += 1
            if check_condition(model, "T", instance, depth).verdict != HOLDS:
                rows["BS_to_T_chained"]["failures"] += 1

        rows["D_to_N_via_iteration"]["tested"] += 1
        if not _iteration_matches_insertion(model, f, g, depth):
            rows["D_to_N_via_iteration"]["failures"] += 1

    rows["C_iff_compact_unit"]["tested"] = 1
    if not _compactness_consistent(model, depth):
        rows["C_iff_compact_unit"]["failures"] = 1

    rows["eps_removal_form2_to_form3"]["tested"] = 1
    if not _eps_removal_consistent(model, depth):
        rows["eps_removal_form2_to_form3"]["failures"] = 1

    return [{"implication": k, **v} for k, v in rows.items()]


def _truncated_families(f, g, depth):
    """Finite interpolation families for the merge: f + 1/m down, g - 1/m up."""
    a_seq = [f + Fraction(1, m) for m in range(1, depth + 1)]
    b_seq = [g - Fraction(1, m) for m in range(1, depth + 1)]
    return a_seq, b_seq


def _merge_gives_s(model, f, g, depth) -> bool:
    if isinstance(model, FiniteFullModel):
        a_seq, b_seq = [f, g], [f, g]
    else:
        gap = (g - f).value_bounds()[0]
        if gap < Fraction(2, depth):
            shift = Fraction(2, depth)
            g = g + shift
        a_seq, b_seq = _truncated_families(f, g, depth)
    try:
        trace = tong_merge(a_seq, b_seq)
    except NormlabError:
        return False
    u = trace.result
    f_norm = trace.a_norm[-1]
    g_norm = trace.b_norm[-1]
    return f_norm.le(u) and u.le(g_norm)


def _iteration_matches_insertion(model, f, g, depth) -> bool:
    steps = min(depth, 12)
    if isinstance(model, FiniteFullModel):
        trace = dieudonne_iterate(midpoint_oracle, f, g, steps)
        return f.le(trace.result + Fraction(1, 2 ** (steps - 1)))
    if isinstance(model, SeqYEndModel):
        trace = dieudonne_iterate(midpoint_oracle, f, g, steps)
        w = insert_on_y(f, g)
        slack = Fraction(2, 2 ** steps) + (g - f).norm()
        return (trace.result - w.func).norm() <= slack
    result = insert_convergent(f, g)
    if isinstance(result, InfeasibleCert):
        # no single witness exists, so there is nothing for (D) to lift to
        return True
    trace = dieudonne_iterate(midpoint_oracle, f, g, steps)
    tail = Fraction(2, 2 ** steps)
    candidate = trace.result
    return f.le(candidate + tail) and candidate.le(g + tail)


def _compactness_consistent(model, depth) -> bool:
    if isinstance(model, FiniteFullModel):
        return True
    one = SeqFunc.constant(1, with_omega=True)
    unit_compact = ideal_membership(one)["in_I_alpha"]
    if isinstance(model, SeqYEndModel):
        fam = [SeqFunc.constant(2, with_omega=True)]
        verdict, _ = model.cond_c({"epsilon": ONE, "family": fam}, depth)
        return verdict == HOLDS
    verdict, _ = model.cond_c({}, depth)
    return verdict == FAILS and not unit_compact


def _eps_removal_consistent(model, depth) -> bool:
    if not isinstance(model, SeqYEndModel):
        return True
    eps = Fraction(1, 2)
    n = 4
    fam = [SeqFunc.from_support({0: 1}, 0, ZERO) + eps,
           SeqFunc.from_support({0: 0}, 1, ONE)]
    chosen, _ = subcover_extract(eps, fam)
    shifted = [t + Fraction(1, n) for t in fam]
    joined = finite_join([shifted[i] for i in chosen])
    return joined.value_bounds()[0] >= Fraction(1, n)
