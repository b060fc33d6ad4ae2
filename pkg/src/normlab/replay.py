"""Independent certificate verifier.

Re-checks serialized reports (merge traces, iteration traces, condition
reports, insertion certificates, block-indicator traces) from the JSON alone.
The module deliberately shares no evaluation code with the checkers that
produced the certificates: it carries its own tiny evaluators for the two
carrier encodings, so a bug in a searcher cannot hide in its own replay.

``verify_report`` walks any JSON value, verifies every recognizable payload,
and reports one line per check.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _frac(v) -> Fraction:
    if isinstance(v, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v)


# -- minimal evaluators ------------------------------------------------------

def _is_seq(d) -> bool:
    return isinstance(d, dict) and "cycle" in d


def _is_finite_func(d) -> bool:
    return isinstance(d, dict) and "values" in d and "space" in d


def _seq_at(d, k: int) -> Fraction:
    prefix, cycle = d.get("prefix", []), d["cycle"]
    if k < len(prefix):
        return _frac(prefix[k])
    return _frac(cycle[(k - len(prefix)) % len(cycle)])


def _seq_omega(d):
    om = d.get("omega")
    return None if om is None else _frac(om)


def _span(*seqs) -> int:
    p = max((len(d.get("prefix", [])) for d in seqs), default=0)
    cyc = math.lcm(*[len(d["cycle"]) for d in seqs]) if seqs else 1
    return p + cyc


def _points(*elems):
    """Common probe points for a mix of serialized elements."""
    if all(_is_seq(d) for d in elems):
        pts = list(range(_span(*elems)))
        if all(_seq_omega(d) is not None for d in elems):
            pts.append("omega")
        return pts
    if all(_is_finite_func(d) for d in elems):
        return list(range(elems[0]["space"]["points"]))
    raise ValueError("mixed or unknown element encodings")


def _value(d, p) -> Fraction:
    if _is_seq(d):
        return _seq_omega(d) if p == "omega" else _seq_at(d, p)
    if _is_finite_func(d):
        return _frac(d["values"][p])
    raise ValueError("unknown element encoding")


def _le(a, b, pts) -> bool:
    return all(_value(a, p) <= _value(b, p) for p in pts)


def _eq(a, b, pts) -> bool:
    return all(_value(a, p) == _value(b, p) for p in pts)


def _seq_convergent(d) -> bool:
    if len(d["cycle"]) != 1:
        return False
    om = _seq_omega(d)
    return om is None or om == _frac(d["cycle"][0])


def _cycle_bounds(d):
    vals = [_frac(v) for v in d["cycle"]]
    return min(vals), max(vals)


# -- payload verifiers -------------------------------------------------------

def _check(checks, name, ok):
    checks.append({"check": name, "ok": bool(ok)})
    return ok


def _verify_merge(trace, checks) -> None:
    a, b = trace["a_norm"], trace["b_norm"]
    u, v = trace["u_seq"], trace["v_seq"]
    res = trace["result"]
    pts = _points(*(a + b + u + v + [res]))
    n = len(a)
    ok_shape = len(b) == n and len(u) == n and len(v) == n
    _check(checks, "merge: aligned sequence lengths", ok_shape)
    if not ok_shape:
        return
    _check(checks, "merge: a nonincreasing", all(_le(a[i + 1], a[i], pts) for i in range(n - 1)))
    _check(checks, "merge: b nondecreasing", all(_le(b[i], b[i + 1], pts) for i in range(n - 1)))
    for p in pts:
        run = None
        for i in range(n):
            term = min(_value(a[i], p), _value(b[i], p))
            run = term if run is None else max(run, term)
            if run != _value(u[i], p):
                _check(checks, f"merge: u_{i + 1} recomputed", False)
                return
            if max(run, _value(a[i], p)) != _value(v[i], p):
                _check(checks, f"merge: v_{i + 1} recomputed", False)
                return
    _check(checks, "merge: u, v recomputed", True)
    _check(checks, "merge: result = last u", _eq(res, u[-1], pts))
    _check(checks, "merge: result = meet of v",
           all(_value(res, p) == min(_value(vi, p) for vi in v) for p in pts))
    _check(checks, "merge: meet a <= result <= join b",
           _le(a[-1], res, pts) and _le(res, b[-1], pts))
    for i in range(n):
        if not _le(u[-1], v[i], pts):
            _check(checks, f"merge: u <= v_{i + 1}", False)
            return
    _check(checks, "merge: u below every v_n", True)


def _verify_iteration(trace, checks) -> None:
    a = trace["a_seq"]
    bounds = [_frac(b) for b in trace["step_bounds"]]
    pts = _points(*a)
    _check(checks, "iteration: bounds are 1/2^n",
           all(b == Fraction(1, 2 ** (i + 1)) for i, b in enumerate(bounds)))
    ok = True
    for i in range(len(a) - 1):
        for p in pts:
            if abs(_value(a[i + 1], p) - _value(a[i], p)) > bounds[i]:
                ok = False
    _check(checks, "iteration: step bound |a_{n+1} - a_n| <= 1/2^n", ok)
    ok = True
    for i in range(len(a)):
        tail = Fraction(2, 2 ** (i + 1))
        for j in range(i + 1, len(a)):
            delta = max(abs(_value(a[j], p) - _value(a[i], p)) for p in pts)
            if delta > tail:
                ok = False
    _check(checks, "iteration: Cauchy tail ||a_{n+p} - a_n|| <= 2^{1-n}", ok)
    f, g = trace.get("f"), trace.get("g")
    if f is not None and g is not None:
        ok = True
        for i in range(len(a)):
            eps = bounds[i]
            for p in _points(f, g, a[i]):
                if not _value(f, p) - eps <= _value(a[i], p) <= _value(g, p):
                    ok = False
        _check(checks, "iteration: sandwich f - 1/2^n <= a_n <= g", ok)


def _verify_infeasible(cert, checks) -> None:
    f, g = cert["f"], cert["g"]
    lsf, lig = _frac(cert["limsup_f"]), _frac(cert["liminf_g"])
    _check(checks, "infeasible: limsup f recomputed", _cycle_bounds(f)[1] == lsf)
    _check(checks, "infeasible: liminf g recomputed", _cycle_bounds(g)[0] == lig)
    _check(checks, "infeasible: limsup exceeds liminf", lsf > lig)


def _noncompact_member_at(eps, delta, n, k):
    return eps + delta if k <= n else -delta


def _verify_condition(report, checks) -> None:
    cond = report["condition"]
    verdict = report["verdict"]
    inst = report.get("instance", {})
    cert = report.get("certificate", {})
    label = f"{cond} {verdict}"
    if verdict == "unknown_at_depth":
        _check(checks, f"{label}: nothing to certify", True)
        return
    if cond == "SL":
        _verify_condition({"condition": "L", "verdict": cert["L_verdict"],
                           "instance": inst, "certificate": cert["L"]}, checks)
        _verify_condition({"condition": "N", "verdict": cert["N_verdict"],
                           "instance": inst, "certificate": cert["N"]}, checks)
        agree = {"holds": cert["L_verdict"] == cert["N_verdict"] == "holds",
                 "fails": "fails" in (cert["L_verdict"], cert["N_verdict"])}
        _check(checks, f"{label}: decomposition consistent", agree.get(verdict, False))
        return
    f, g = inst.get("f"), inst.get("g")
    if cond in ("N", "D"):
        if verdict == "holds":
            w = cert["witness"]
            pts = _points(f, g, w) if _is_seq(w) and _seq_omega(w) is not None \
                else _points(f, g, w)
            _check(checks, f"{label}: witness convergent",
                   not _is_seq(w) or _seq_convergent(w))
            _check(checks, f"{label}: f <= witness <= g",
                   _le(f, w, pts) and _le(w, g, pts))
        else:
            _verify_infeasible({"f": f, "g": g, **cert}, checks)
        if cond == "D" and "epsilon" in cert:
            eps = _frac(cert["epsilon"])
            pts = _points(f, g)
            _check(checks, f"{label}: gap f + eps <= g",
                   all(_value(f, p) + eps <= _value(g, p) for p in pts))
        return
    if cond in ("T", "BS", "S"):
        pts = _points(f, g)
        _check(checks, f"{label}: f <= g", _le(f, g, pts))
        if "witness" in cert:
            w = cert["witness"]
            wpts = _points(f, g, w)
            _check(checks, f"{label}: witness between endpoints",
                   _le(f, w, wpts) and _le(w, g, wpts))
        if "a_seq" in cert and "b_seq" in cert:
            a, b = cert["a_seq"], cert["b_seq"]
            apts = _points(f, g, *a, *b)
            meet_of = lambda xs, p: min(_value(x, p) for x in xs)
            join_of = lambda xs, p: max(_value(x, p) for x in xs)
            if cond == "T":
                ok = all(_value(f, p) <= meet_of(a, p) <= join_of(b, p) <= _value(g, p)
                         for p in apts)
            elif cond == "BS":
                # a_seq carries the join side, b_seq the meet side
                ok = all(_value(f, p) <= join_of(a, p) <= meet_of(b, p) <= _value(g, p)
                         for p in apts)
            else:
                ok = all(meet_of(a, p) == join_of(b, p) for p in apts) and \
                     all(_value(f, p) <= meet_of(a, p) <= _value(g, p) for p in apts)
            _check(checks, f"{label}: interpolation chain", ok)
        for side in ("meet_side", "join_side"):
            if side in cert:
                data = cert[side]
                _check(checks, f"{label}: {side} residual within bound",
                       _frac(data["max_residual"]) <= _frac(data["residual_bound"]))
        return
    if cond in ("C", "L"):
        fam = inst.get("family", cert.get("family"))
        if verdict == "holds" and "subfamily" in cert and fam is not None:
            chosen = [fam[i] for i in cert["subfamily"]]
            pts = _points(*fam)
            join_min = min(max(_value(t, p) for t in chosen) for p in pts)
            _check(checks, f"{label}: subfamily join nonnegative", join_min >= 0)
            if "join_min" in cert:
                _check(checks, f"{label}: recorded join minimum matches",
                       join_min == _frac(cert["join_min"]))
            eps = _frac(inst.get("epsilon", cert.get("epsilon")))
            _check(checks, f"{label}: full family covers at level eps",
                   all(max(_value(t, p) for t in fam) >= eps for p in pts))
            return
        if verdict == "fails" and "defeats" in cert:
            eps, delta = _frac(cert["epsilon"]), _frac(cert["delta"])
            ok = True
            for entry in cert["defeats"]:
                sub = entry["subfamily"]
                idx = entry["index"]
                best = max(_noncompact_member_at(eps, delta, n, idx) for n in sub)
                if idx <= max(sub) or best != _frac(entry["join_value"]) or best >= 0:
                    ok = False
            _check(checks, f"{label}: every listed subfamily defeated", ok)
            return
        if verdict == "holds" and "picks" in cert:
            eps = _frac(cert["epsilon"])
            delta = Fraction(1, 2)
            ok = all(_frac(p["value"]) > eps / 2 for p in cert["picks"])
            _check(checks, f"{label}: per-index witnesses exceed eps/2", ok)
            return
        _check(checks, f"{label}: certificate recognized", False)
        return
    _check(checks, f"{label}: condition recognized", False)


def _clamp01(v: Fraction) -> Fraction:
    return min(max(v, Fraction(0)), Fraction(1))


def _verify_ideal(payload, checks) -> None:
    """Re-derive ideal membership of an element from its serialized values."""
    elem = payload["element"]
    in_i, in_j = payload["in_I_alpha"], payload["in_J_radical"]
    cert = payload["cert"]
    prefix = elem.get("prefix", [])
    if "ratio" in elem:  # geometric tail: limit 0, finite support iff q = 0
        _check(checks, "ideal: tail lies in the radical", in_j is True)
        _check(checks, "ideal: compact-support membership matches q",
               in_i == (_frac(elem["q"]) == 0))
    else:
        om = _seq_omega(elem)
        ok = _seq_convergent(elem) and om is not None
        _check(checks, "ideal: element convergent", ok)
        if not ok:
            return
        _check(checks, "ideal: radical membership = vanishing at omega",
               in_j == (om == 0))
        _check(checks, "ideal: compact support iff limit zero", in_i == in_j)
    if in_i:
        support = [k for k, v in enumerate(prefix) if _frac(v) != 0]
        _check(checks, "ideal: closure certificate is the finite support",
               cert["kind"] == "finite" and list(cert["members"]) == support)
    else:
        zeros = [k for k, v in enumerate(prefix) if _frac(v) == 0]
        _check(checks, "ideal: closure certificate is cofinite with omega",
               cert["kind"] == "cofinite_with_omega"
               and list(cert["members"]) == zeros)


def _verify_block_replay(payload, checks) -> None:
    """Rebuild block indicators from their traces with local arithmetic only."""
    gens = payload["generators"]
    n = gens[0]["space"]["points"]
    for trace, ind in zip(payload["traces"], payload["indicators"]):
        values = [Fraction(1)] * n
        for ch in trace["choices"]:
            g = gens[ch["g_index"]]
            gx, gy = _frac(ch["gx"]), _frac(ch["gy"])
            for x in range(n):
                h = _clamp01((_frac(g["values"][x]) - gy) / (gx - gy))
                values[x] = min(values[x], h)
        expected = [_frac(v) for v in ind["values"]]
        block = set(trace["block"])
        ok = values == expected
        ok = ok and all((values[x] == 1) == (x in block) for x in range(n))
        if not _check(checks, f"block {sorted(block)}: trace replays to 0/1 indicator", ok):
            return
    _check(checks, "block traces: all replayed", True)


def verify_report(data) -> dict:
    """Verify every recognizable certificate in a JSON report.

    Returns {"ok": bool, "verified": payload count, "checks": [...]}, where
    each check entry names what was re-derived and whether it held.
    """
    checks: list[dict] = []
    count = 0

    def walk(node):
        nonlocal count
        if isinstance(node, dict):
            if node.get("trace") == "merge":
                count += 1
                _verify_merge(node, checks)
                return
            if node.get("trace") == "iteration":
                count += 1
                _verify_iteration(node, checks)
                return
            if "condition" in node and "verdict" in node:
                count += 1
                _verify_condition(node, checks)
                return
            if node.get("infeasible") and "f" in node and "g" in node:
                count += 1
                _verify_infeasible(node, checks)
                return
            if "ideal_membership" in node:
                count += 1
                _verify_ideal(node["ideal_membership"], checks)
                return
            if "block_replay" in node:
                count += 1
                _verify_block_replay(node["block_replay"], checks)
                return
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)

    walk(data)
    ok = bool(checks) and all(c["ok"] for c in checks)
    return {"ok": ok, "verified": count, "checks": checks}
