"""Text and CSV rendering of inference and maximality results."""

from __future__ import annotations

import csv
import io

from .inference import EndoReport, LKVerdict
from .modell import LADIC_NOTE, MaximalityVerdict, ResidualElement


def _field(m: int | None) -> str:
    return "?" if m is None else f"Q(sqrt {m})"


def render_endo_report(rep: EndoReport) -> str:
    lines = [f"base field: {'Q' if rep.d == 1 else f'Q(sqrt {rep.d})'}",
             f"assumed quaternion discriminant: {rep.assumed_D}",
             f"End_K (x) Q: {rep.end_K}",
             f"Gal(L/K): {rep.gal_LK}"]
    if rep.assignments:
        lines.append("intermediate algebras:")
        for delta, m in rep.assignments:
            lines.append(f"  K(sqrt {delta}) -> {_field(m)}")
    if rep.outcomes:
        lines.append("candidate extensions:")
        for o in rep.outcomes:
            if o.accepted:
                fields = "any" if o.fields is None else ", ".join(map(str, o.fields))
                lines.append(f"  delta={o.delta}: accepted (fields {fields}; "
                             f"{len(o.split)} split, {len(o.inert)} inert)")
            else:
                lines.append(f"  delta={o.delta}: eliminated at {o.witness} ({o.reason})")
    if rep.selected:
        lines.append("selected factorizations:")
        for s in rep.selected:
            tag = " (ambiguous)" if s.ambiguous else ""
            lines.append(f"  {s.prime}: {s.choice if s.choice else 'none'}{tag}")
    lines.append("notes:")
    lines.extend(f"  - {f}" for f in rep.flags)
    return "\n".join(lines) + "\n"


def _tag(q) -> str:
    return f"{q.p}:{q.r}"


def endo_csv(rep: EndoReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "verdict", "m", "witnesses"])
    assigned = dict(rep.assignments)
    for o in rep.outcomes:
        if o.accepted:
            w.writerow([o.delta, "accepted", assigned.get(o.delta, ""),
                        ";".join(_tag(q) for q in o.split)])
        else:
            w.writerow([o.delta, "eliminated", "", _tag(o.witness)])
    return buf.getvalue()


def render_lk(v: LKVerdict) -> str:
    lines = ["L = K: " + ("confirmed" if v.confirmed else "inconclusive")]
    for delta, q, a in v.witnesses:
        lines.append(f"  delta={delta}: eliminated by {q}, inert with a_p={a}")
    if v.survivors:
        lines.append("  surviving delta: " + ", ".join(map(str, v.survivors)))
    return "\n".join(lines) + "\n"


def describe_element(e: ResidualElement) -> str:
    head = f"{e.label or '?'}: t={e.t} det={e.n}"
    if e.kind == "split":
        a, b = e.eigenvalues
        o1, o2 = e.eigenvalue_orders
        return (f"{head} split eigenvalues {{{a}, {b}}} orders {{{o1}, {o2}}} "
                f"projective order {e.projective_order}")
    if e.kind == "nonsplit":
        return (f"{head} nonsplit, eigenvalue order {e.eigenvalue_orders[0]} in "
                f"F_{e.ell}^2*, projective order {e.projective_order}")
    return f"{head} repeated eigenvalue"


def render_maximality(v: MaximalityVerdict, elems: list[ResidualElement]) -> str:
    ell = v.ell
    lines = [f"ell = {ell}", "elements:"]
    lines.extend(f"  {describe_element(e)}" for e in elems)
    if v.maximal:
        lines.append(f"verdict: maximal (image is GL(2, F_{ell}))")
    else:
        lines.append("verdict: inconclusive; not eliminated: " + ", ".join(v.remaining))
    for name, wit in v.witnesses.items():
        if isinstance(wit, ResidualElement):
            lines.append(f"  {name} eliminated by {wit.label or wit}")
        else:
            lines.append(f"  {name} eliminated: determinants {list(wit)} generate F_{ell}^*")
    if v.order_witness is not None:
        a, b = v.order_witness.eigenvalues
        lines.append(f"split element with an eigenvalue of order {ell - 1}: "
                     f"{v.order_witness.label} eigenvalues {{{a}, {b}}}")
    if v.nonsplit_witness is not None:
        lines.append(f"nonsplit element: {v.nonsplit_witness.label} "
                     f"(eigenvalue order {v.nonsplit_witness.eigenvalue_orders[0]})")
    lines.append(f"note: {LADIC_NOTE}")
    if v.maximal:
        lines.append("consequence: the representation is not potentially abelian")
    return "\n".join(lines) + "\n"
