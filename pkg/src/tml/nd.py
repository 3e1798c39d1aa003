"""Natural deduction with hypothesis discharge, and the two-way
translation between sequent proofs and deductions.

Deductions are trees whose leaves are marked hypotheses; |E, ~&E and
the starred box introduction close hypothesis classes by marker.  The
forward translation turns a cut-free sequent proof of G => D into a
deduction of the disjunction of D from G; the reverse translation uses
weakening and cut to rebuild a sequent proof from a deduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Sequence

from . import sc
from .sc import ScProof, ScRule
from .sequents import Sequent
from .syntax import And, BOT, Box, Formula, Neg, Or, parse

__all__ = [
    "NDDeduction", "NdCheckError", "NdResult", "check_nd", "verify_nd",
    "open_assumptions", "disjunction_of", "sc_to_nd", "nd_to_sc",
    "NdTranslationError", "nd_to_json", "nd_from_json", "render_nd",
    "hyp", "distribute_join_over_meet", "collapse_boxed_contradiction",
]

ND_RULES = {
    "hyp": 0, "ma": 0,
    "and_i": 2, "and_e1": 1, "and_e2": 1,
    "neg_and_i1": 1, "neg_and_i2": 1, "neg_and_e": 3,
    "or_i1": 1, "or_i2": 1, "or_e": 3,
    "neg_or_i": 2, "neg_or_e1": 1, "neg_or_e2": 1,
    "neg_neg_i": 1, "neg_neg_e": 1,
    "box_i_star": 2, "box_e": 1,
    "neg_box_i": 1, "neg_box_e": 2,
    "bot_i": 1, "bot_e": 1,
}

# which premise index each discharge slot of a rule closes
_DISCHARGE_AT = {"neg_and_e": (1, 2), "or_e": (1, 2), "box_i_star": (1,)}


@dataclass(frozen=True)
class NDDeduction:
    rule: str
    conclusion: Formula
    premises: tuple["NDDeduction", ...] = ()
    marker: Optional[str] = None                       # hyp nodes only
    discharges: tuple[tuple[str, Formula], ...] = ()   # (marker, assumption)


def hyp(f: Formula, marker: str) -> NDDeduction:
    return NDDeduction("hyp", f, marker=marker)


class NdCheckError(ValueError):
    def __init__(self, path: tuple[int, ...], reason: str):
        super().__init__(f"node {list(path)}: {reason}")
        self.path = path
        self.reason = reason


@dataclass(frozen=True)
class NdResult:
    ok: bool
    conclusion: Formula
    open: frozenset[Formula]
    error: Optional[str] = None


def _shape_error(path, rule):
    raise NdCheckError(path, f"conclusion/premises do not fit rule {rule!r}")


def _check_schema(node: NDDeduction, path: tuple[int, ...]) -> None:
    """Local shape check: arity, marker placement, discharge slots, and
    the premise/conclusion pattern of the rule."""
    r = node.rule
    if r not in ND_RULES:
        raise NdCheckError(path, f"unknown rule {r!r}")
    if len(node.premises) != ND_RULES[r]:
        raise NdCheckError(path, f"rule {r!r} takes {ND_RULES[r]} premise(s)")
    if r != "hyp" and node.marker is not None:
        raise NdCheckError(path, "only hypotheses carry a marker")
    if r in _DISCHARGE_AT:
        if len(node.discharges) != len(_DISCHARGE_AT[r]):
            raise NdCheckError(path, f"rule {r!r} discharges {len(_DISCHARGE_AT[r])} class(es)")
    elif node.discharges:
        raise NdCheckError(path, f"rule {r!r} does not discharge hypotheses")

    c = node.conclusion
    prem = [q.conclusion for q in node.premises]
    ok = False
    if r == "hyp":
        ok = node.marker is not None
    elif r == "ma":
        ok = (isinstance(c, Or) and isinstance(c.right, Neg)
              and isinstance(c.right.child, Box) and c.right.child.child is c.left)
    elif r == "and_i":
        ok = isinstance(c, And) and prem == [c.left, c.right]
    elif r == "and_e1":
        ok = isinstance(prem[0], And) and prem[0].left is c
    elif r == "and_e2":
        ok = isinstance(prem[0], And) and prem[0].right is c
    elif r in ("neg_and_i1", "neg_and_i2"):
        if isinstance(c, Neg) and isinstance(c.child, And) and isinstance(prem[0], Neg):
            part = c.child.left if r == "neg_and_i1" else c.child.right
            ok = prem[0].child is part
    elif r == "neg_and_e":
        p0 = prem[0]
        if isinstance(p0, Neg) and isinstance(p0.child, And) and prem[1] is c and prem[2] is c:
            want = (Neg(p0.child.left), Neg(p0.child.right))
            ok = tuple(f for _, f in node.discharges) == want
    elif r == "or_i1":
        ok = isinstance(c, Or) and c.left is prem[0]
    elif r == "or_i2":
        ok = isinstance(c, Or) and c.right is prem[0]
    elif r == "or_e":
        p0 = prem[0]
        if isinstance(p0, Or) and prem[1] is c and prem[2] is c:
            ok = tuple(f for _, f in node.discharges) == (p0.left, p0.right)
    elif r == "neg_or_i":
        ok = (isinstance(c, Neg) and isinstance(c.child, Or)
              and isinstance(prem[0], Neg) and isinstance(prem[1], Neg)
              and prem[0].child is c.child.left and prem[1].child is c.child.right)
    elif r in ("neg_or_e1", "neg_or_e2"):
        p0 = prem[0]
        if isinstance(p0, Neg) and isinstance(p0.child, Or) and isinstance(c, Neg):
            part = p0.child.left if r == "neg_or_e1" else p0.child.right
            ok = c.child is part
    elif r == "neg_neg_i":
        ok = isinstance(c, Neg) and isinstance(c.child, Neg) and c.child.child is prem[0]
    elif r == "neg_neg_e":
        p0 = prem[0]
        ok = isinstance(p0, Neg) and isinstance(p0.child, Neg) and p0.child.child is c
    elif r == "box_i_star":
        if (isinstance(c, Or) and isinstance(c.right, Box)
                and isinstance(prem[0], Or) and prem[0].left is c.left
                and prem[0].right is c.right.child and prem[1] is c.left):
            ok = tuple(f for _, f in node.discharges) == (Neg(c.right.child),)
    elif r == "box_e":
        ok = isinstance(prem[0], Box) and prem[0].child is c
    elif r == "neg_box_i":
        ok = (isinstance(c, Neg) and isinstance(c.child, Box)
              and isinstance(prem[0], Neg) and prem[0].child is c.child.child)
    elif r == "neg_box_e":
        p0 = prem[0]
        ok = (isinstance(p0, Neg) and isinstance(p0.child, Box) and isinstance(c, Neg)
              and p0.child.child is prem[1] and c.child is prem[1])
    elif r == "bot_i":
        p0 = prem[0]
        ok = (c is BOT and isinstance(p0, And) and isinstance(p0.left, Neg)
              and isinstance(p0.right, Box) and p0.left.child is p0.right.child)
    elif r == "bot_e":
        ok = prem[0] is BOT
    if not ok:
        _shape_error(path, r)


def verify_nd(d: NDDeduction) -> frozenset[Formula]:
    """Validate schemas and discharge bookkeeping; return open assumptions."""
    used_discharge_markers: set[str] = set()

    def visit(node: NDDeduction, path: tuple[int, ...]) -> dict[str, set[Formula]]:
        _check_schema(node, path)
        if node.rule == "hyp":
            return {node.marker: {node.conclusion}}
        opens: list[dict[str, set[Formula]]] = [
            visit(q, path + (i,)) for i, q in enumerate(node.premises)]
        for slot, (marker, assumption) in enumerate(node.discharges):
            if marker in used_discharge_markers:
                raise NdCheckError(path, f"marker {marker!r} discharged twice")
            used_discharge_markers.add(marker)
            at = _DISCHARGE_AT[node.rule][slot]
            for i, om in enumerate(opens):
                if i == at:
                    continue
                if marker in om:
                    raise NdCheckError(
                        path, f"marker {marker!r} is open outside its designated subtree")
            closed = opens[at].pop(marker, set())
            if not closed <= {assumption}:
                raise NdCheckError(
                    path, f"marker {marker!r} closes hypotheses other than its class")
        merged: dict[str, set[Formula]] = {}
        for om in opens:
            for marker, fs in om.items():
                if marker in used_discharge_markers:
                    raise NdCheckError(
                        path, f"marker {marker!r} occurs both open and discharged")
                merged.setdefault(marker, set()).update(fs)
        return merged

    opens = visit(d, ())
    return frozenset(itertools.chain.from_iterable(opens.values()))


def check_nd(d: NDDeduction) -> NdResult:
    try:
        open_set = verify_nd(d)
    except NdCheckError as e:
        return NdResult(False, d.conclusion, frozenset(), str(e))
    return NdResult(True, d.conclusion, open_set)


def open_assumptions(d: NDDeduction) -> frozenset[Formula]:
    return verify_nd(d)


# ---------------------------------------------------------------------------
# Canonical disjunctions.

def _elems(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(set(fs), key=lambda f: f.text)


def _fold(elems: Sequence[Formula]) -> Formula:
    if not elems:
        return BOT
    out = elems[-1]
    for e in reversed(elems[:-1]):
        out = Or(e, out)
    return out


def disjunction_of(delta: Iterable[Formula]) -> Formula:
    """Right-fold of the formulas in sorted rendering order; the empty
    disjunction is bot."""
    return _fold(_elems(delta))


# ---------------------------------------------------------------------------
# Closed macro deductions.

class _Markers:
    def __init__(self, prefix: str = "u"):
        self.prefix = prefix
        self.n = 0

    def fresh(self) -> str:
        self.n += 1
        return f"{self.prefix}{self.n}"


def _clone_fresh(d: NDDeduction, mk: _Markers) -> NDDeduction:
    mapping: dict[str, str] = {}

    def rn(m: str) -> str:
        if m not in mapping:
            mapping[m] = mk.fresh()
        return mapping[m]

    def go(node: NDDeduction) -> NDDeduction:
        return NDDeduction(
            node.rule, node.conclusion, tuple(go(q) for q in node.premises),
            marker=rn(node.marker) if node.marker is not None else None,
            discharges=tuple((rn(m), f) for m, f in node.discharges))

    return go(d)


def _relabel_open(d: NDDeduction, assumption: Formula, marker: str) -> NDDeduction:
    """Give every open hypothesis of the given formula the same marker."""

    def go(node: NDDeduction, shadowed: frozenset[str]) -> NDDeduction:
        if node.rule == "hyp":
            if node.conclusion is assumption and node.marker not in shadowed:
                return replace(node, marker=marker)
            return node
        sh = shadowed | {m for m, _ in node.discharges}
        return replace(node, premises=tuple(go(q, sh) for q in node.premises))

    return go(d, frozenset())


def _graft(d: NDDeduction, assumption: Formula,
           builder: Callable[[], NDDeduction]) -> NDDeduction:
    """Replace open hypotheses of the given formula by fresh instances of
    a deduction concluding it."""

    def go(node: NDDeduction, shadowed: frozenset[str]) -> NDDeduction:
        if node.rule == "hyp":
            if node.conclusion is assumption and node.marker not in shadowed:
                return builder()
            return node
        sh = shadowed | {m for m, _ in node.discharges}
        return replace(node, premises=tuple(go(q, sh) for q in node.premises))

    return go(d, frozenset())


def distribute_join_over_meet(gamma: Formula, x: Formula, y: Formula,
                              conj: NDDeduction, mk: _Markers) -> NDDeduction:
    """From a deduction of (gamma|x) & (gamma|y) conclude gamma | (x&y)."""
    target = Or(gamma, And(x, y))
    left = NDDeduction("and_e1", Or(gamma, x), (conj,))
    right = NDDeduction("and_e2", Or(gamma, y), (_clone_fresh(conj, mk),))
    u1, u2, v1, v2 = (mk.fresh() for _ in range(4))
    inner = NDDeduction(
        "or_e", target,
        (right,
         NDDeduction("or_i1", target, (hyp(gamma, v1),)),
         NDDeduction("or_i2", target,
                     (NDDeduction("and_i", And(x, y), (hyp(x, u2), hyp(y, v2))),))),
        discharges=((v1, gamma), (v2, y)))
    return NDDeduction(
        "or_e", target,
        (left,
         NDDeduction("or_i1", target, (hyp(gamma, u1),)),
         inner),
        discharges=((u1, gamma), (u2, x)))


def _bot_from_boxed_pair(conj_of: Callable[[], NDDeduction], gamma: Formula) -> NDDeduction:
    """From deductions of #g & ~#g (one per call of conj_of) build bot:
    extract #g and ~#g, recover g, derive ~g, and hit the falsum
    introduction shape ~g & #g."""
    box_g = NDDeduction("and_e1", Box(gamma), (conj_of(),))
    neg_box_g = NDDeduction("and_e2", Neg(Box(gamma)), (conj_of(),))
    g = NDDeduction("box_e", gamma, (box_g,))
    neg_g = NDDeduction("neg_box_e", Neg(gamma), (neg_box_g, g))
    pair = NDDeduction("and_i", And(Neg(gamma), Box(gamma)),
                       (neg_g, NDDeduction("and_e1", Box(gamma), (conj_of(),))))
    return NDDeduction("bot_i", BOT, (pair,))


def collapse_boxed_contradiction(gamma: Formula, alpha: Formula,
                                 mk: Optional[_Markers] = None) -> NDDeduction:
    """Closed deduction of a | bot from the assumption a | (#g & ~#g)."""
    mk = mk or _Markers("w")
    source = Or(alpha, And(Box(gamma), Neg(Box(gamma))))
    target = Or(alpha, BOT)
    u, v, w = mk.fresh(), mk.fresh(), mk.fresh()
    conj = And(Box(gamma), Neg(Box(gamma)))
    to_bot = _bot_from_boxed_pair(lambda: hyp(conj, v), gamma)
    branch2 = NDDeduction("or_i2", target, (to_bot,))
    return NDDeduction(
        "or_e", target,
        (hyp(source, w),
         NDDeduction("or_i1", target, (hyp(alpha, u),)),
         branch2),
        discharges=((u, alpha), (v, conj)))


# ---------------------------------------------------------------------------
# Sequent proof -> deduction.

class NdTranslationError(ValueError):
    pass


class _ToNd:
    def __init__(self):
        self.mk = _Markers()

    # -- generic disjunction surgery ------------------------------------

    def embed(self, ded: NDDeduction, elem: Formula,
              target_elems: Sequence[Formula]) -> NDDeduction:
        """Wrap a deduction of one element into the right-fold of the
        target elements via or-introductions."""
        if elem is BOT and elem not in target_elems:
            return self.bot_to(ded, _fold(target_elems))
        if elem not in target_elems:
            raise NdTranslationError(f"{elem} is not a disjunct of the target")
        return self._embed(ded, elem, list(target_elems))

    def _embed(self, ded: NDDeduction, elem: Formula,
               elems: list[Formula]) -> NDDeduction:
        if len(elems) == 1:
            return ded
        head, rest = elems[0], elems[1:]
        if elem is head:
            return NDDeduction("or_i1", _fold(elems), (ded,))
        inner = self._embed(ded, elem, rest)
        return NDDeduction("or_i2", _fold(elems), (inner,))

    def bot_to(self, ded: NDDeduction, target: Formula) -> NDDeduction:
        return ded if target is BOT else NDDeduction("bot_e", target, (ded,))

    def or_elim_shape(self, ded: NDDeduction, shape: Sequence[Formula],
                      target: Formula,
                      branch: Callable[[NDDeduction, Formula], NDDeduction],
                      ) -> NDDeduction:
        """Case-split a deduction of the right-fold of `shape`; every
        branch function must conclude `target`."""
        if len(shape) == 1:
            return branch(ded, shape[0])
        head, rest = shape[0], list(shape[1:])
        u, v = self.mk.fresh(), self.mk.fresh()
        b1 = branch(hyp(head, u), head)
        b2 = self.or_elim_shape(hyp(_fold(rest), v), rest, target, branch)
        return NDDeduction("or_e", target, (ded, b1, b2),
                           discharges=((u, head), (v, _fold(rest))))

    def remap(self, ded: NDDeduction, source: Iterable[Formula],
              target_set: Iterable[Formula],
              override: Optional[dict[Formula, Callable[[NDDeduction], NDDeduction]]] = None,
              ) -> NDDeduction:
        """Turn a deduction of the disjunction of `source` into one of the
        disjunction of `target_set`.  Elements default to or-intro
        embedding; `override` supplies custom element handlers."""
        override = override or {}
        src = _elems(source)
        tgt = _elems(target_set)
        target = _fold(tgt)
        if not src:
            return self.bot_to(ded, target)
        if src == tgt and not override:
            return ded

        def branch(sub: NDDeduction, e: Formula) -> NDDeduction:
            if e in override:
                return override[e](sub)
            return self.embed(sub, e, tgt)

        return self.or_elim_shape(ded, src, target, branch)

    # -- the rule cases ---------------------------------------------------

    def translate(self, node: ScProof) -> NDDeduction:
        seq = node.sequent
        delta = _elems(seq.right)
        target = _fold(delta)
        rule = node.rule

        if rule is ScRule.AXIOM:
            (alpha,) = node.principal
            return self.embed(hyp(alpha, self.mk.fresh()), alpha, delta)

        if rule is ScRule.CUT:
            raise NdTranslationError("translation requires a cut-free proof")

        if rule is ScRule.WEAK_L:
            (beta,) = node.principal
            d = self.translate(node.premises[0])
            conj = And(target, beta)
            glued = NDDeduction("and_i", conj, (d, hyp(beta, self.mk.fresh())))
            return NDDeduction("and_e1", target, (glued,))

        if rule is ScRule.WEAK_R:
            d = self.translate(node.premises[0])
            return self.remap(d, node.premises[0].sequent.right, seq.right)

        (pi,) = node.principal

        if rule is ScRule.OR_R:
            a, b = pi.left, pi.right
            d = self.translate(node.premises[0])
            override = {
                a: lambda s: self.embed(NDDeduction("or_i1", pi, (s,)), pi, delta),
                b: lambda s: self.embed(NDDeduction("or_i2", pi, (s,)), pi, delta),
            }
            return self.remap(d, node.premises[0].sequent.right, seq.right, override)

        if rule is ScRule.OR_L:
            a, b = pi.left, pi.right
            d1 = self.translate(node.premises[0])
            d2 = self.translate(node.premises[1])
            u, v = self.mk.fresh(), self.mk.fresh()
            return NDDeduction(
                "or_e", target,
                (hyp(pi, self.mk.fresh()),
                 _relabel_open(d1, a, u),
                 _relabel_open(d2, b, v)),
                discharges=((u, a), (v, b)))

        if rule is ScRule.NEG_OR_L:
            a, b = pi.child.left, pi.child.right
            d = self.translate(node.premises[0])
            d = _graft(d, Neg(a), lambda: NDDeduction(
                "neg_or_e1", Neg(a), (hyp(pi, self.mk.fresh()),)))
            d = _graft(d, Neg(b), lambda: NDDeduction(
                "neg_or_e2", Neg(b), (hyp(pi, self.mk.fresh()),)))
            return d

        if rule is ScRule.NEG_OR_R:
            a, b = pi.child.left, pi.child.right
            d1 = self.translate(node.premises[0])
            d2 = self.translate(node.premises[1])
            src1 = node.premises[0].sequent.right
            src2 = node.premises[1].sequent.right

            def with_na(s_na: NDDeduction) -> NDDeduction:
                override2 = {Neg(b): lambda s_nb: self.embed(
                    NDDeduction("neg_or_i", pi, (s_na, s_nb)), pi, delta)}
                return self.remap(_clone_fresh(d2, self.mk), src2, seq.right, override2)

            return self.remap(d1, src1, seq.right, {Neg(a): with_na})

        if rule is ScRule.AND_L:
            a, b = pi.left, pi.right
            d = self.translate(node.premises[0])
            d = _graft(d, a, lambda: NDDeduction(
                "and_e1", a, (hyp(pi, self.mk.fresh()),)))
            d = _graft(d, b, lambda: NDDeduction(
                "and_e2", b, (hyp(pi, self.mk.fresh()),)))
            return d

        if rule is ScRule.AND_R:
            a, b = pi.left, pi.right
            d1 = self.translate(node.premises[0])
            d2 = self.translate(node.premises[1])
            src1 = node.premises[0].sequent.right
            src2 = node.premises[1].sequent.right

            def with_a(s_a: NDDeduction) -> NDDeduction:
                override2 = {b: lambda s_b: self.embed(
                    NDDeduction("and_i", pi, (s_a, s_b)), pi, delta)}
                return self.remap(_clone_fresh(d2, self.mk), src2, seq.right, override2)

            return self.remap(d1, src1, seq.right, {a: with_a})

        if rule is ScRule.NEG_AND_L:
            a, b = pi.child.left, pi.child.right
            d1 = self.translate(node.premises[0])
            d2 = self.translate(node.premises[1])
            u, v = self.mk.fresh(), self.mk.fresh()
            return NDDeduction(
                "neg_and_e", target,
                (hyp(pi, self.mk.fresh()),
                 _relabel_open(d1, Neg(a), u),
                 _relabel_open(d2, Neg(b), v)),
                discharges=((u, Neg(a)), (v, Neg(b))))

        if rule is ScRule.NEG_AND_R:
            a, b = pi.child.left, pi.child.right
            d = self.translate(node.premises[0])
            override = {
                Neg(a): lambda s: self.embed(
                    NDDeduction("neg_and_i1", pi, (s,)), pi, delta),
                Neg(b): lambda s: self.embed(
                    NDDeduction("neg_and_i2", pi, (s,)), pi, delta),
            }
            return self.remap(d, node.premises[0].sequent.right, seq.right, override)

        if rule is ScRule.NEG_NEG_L:
            a = pi.child.child
            d = self.translate(node.premises[0])
            return _graft(d, a, lambda: NDDeduction(
                "neg_neg_e", a, (hyp(pi, self.mk.fresh()),)))

        if rule is ScRule.NEG_NEG_R:
            a = pi.child.child
            d = self.translate(node.premises[0])
            override = {a: lambda s: self.embed(
                NDDeduction("neg_neg_i", pi, (s,)), pi, delta)}
            return self.remap(d, node.premises[0].sequent.right, seq.right, override)

        if rule is ScRule.BOX_L1:
            a = pi.child
            d = self.translate(node.premises[0])
            return _graft(d, a, lambda: NDDeduction(
                "box_e", a, (hyp(pi, self.mk.fresh()),)))

        if rule is ScRule.BOX_L2:
            a = pi.child
            d = self.translate(node.premises[0])

            def kill(s_na: NDDeduction) -> NDDeduction:
                pair = NDDeduction("and_i", And(Neg(a), pi),
                                   (s_na, hyp(pi, self.mk.fresh())))
                return self.bot_to(NDDeduction("bot_i", BOT, (pair,)), target)

            return self.remap(d, node.premises[0].sequent.right, seq.right,
                              {Neg(a): kill})

        if rule is ScRule.BOX_R:
            return self._box_right(node, pi, delta, target)

        if rule is ScRule.NEG_BOX_L:
            return self._neg_box_left(node, pi, delta, target)

        if rule is ScRule.NEG_BOX_R1:
            a = pi.child.child
            d = self.translate(node.premises[0])
            u, v = self.mk.fresh(), self.mk.fresh()
            ma = NDDeduction("ma", Or(a, pi))
            body = self.remap(_relabel_open(d, a, u),
                              node.premises[0].sequent.right, seq.right)
            side = self.embed(hyp(pi, v), pi, delta)
            return NDDeduction("or_e", target, (ma, body, side),
                               discharges=((u, a), (v, pi)))

        if rule is ScRule.NEG_BOX_R2:
            a = pi.child.child
            d = self.translate(node.premises[0])
            override = {Neg(a): lambda s: self.embed(
                NDDeduction("neg_box_i", pi, (s,)), pi, delta)}
            return self.remap(d, node.premises[0].sequent.right, seq.right, override)

        raise AssertionError(f"unhandled rule {rule}")

    def _box_right(self, node: ScProof, pi: Formula, delta: list[Formula],
                   target: Formula) -> NDDeduction:
        a = pi.child
        d1 = self.translate(node.premises[0])
        d2 = self.translate(node.premises[1])
        src1 = node.premises[0].sequent.right
        src2 = node.premises[1].sequent.right
        rest = [f for f in delta if f is not pi]
        u = self.mk.fresh()

        if rest:
            psi = _fold(rest)
            shape = Or(psi, a)

            def route1(s: NDDeduction, e: Formula) -> NDDeduction:
                if e is a:
                    return NDDeduction("or_i2", shape, (s,))
                if e is pi:  # the premise may retain the boxed conclusion
                    got_a = NDDeduction("box_e", a, (s,))
                    return NDDeduction("or_i2", shape, (got_a,))
                return NDDeduction("or_i1", shape, (self.embed(s, e, rest),))

            d0 = self.or_elim_shape(d1, _elems(src1), shape, route1)

            def kill_box(s: NDDeduction) -> NDDeduction:
                pair = NDDeduction("and_i", And(Neg(a), s.conclusion),
                                   (hyp(Neg(a), u), s))
                return self.bot_to(NDDeduction("bot_i", BOT, (pair,)), psi)

            body = self.remap(d2, src2, rest, {pi: kill_box} if pi in src2 else None)
            body = _relabel_open(body, Neg(a), u)
            starred = NDDeduction("box_i_star", Or(psi, pi), (d0, body),
                                  discharges=((u, Neg(a)),))

            def final(s: NDDeduction, e: Formula) -> NDDeduction:
                if e is pi:
                    return self.embed(s, pi, delta)
                return self.remap(s, rest, delta)

            return self.or_elim_shape(starred, [psi, pi], target, final)

        # no other conclusions: derive #a with psi := #a
        shape = Or(pi, a)

        def route1(s: NDDeduction, e: Formula) -> NDDeduction:
            if e is a:
                return NDDeduction("or_i2", shape, (s,))
            return NDDeduction("or_i1", shape, (s,))

        d0 = self.or_elim_shape(d1, _elems(src1), shape, route1)
        if _elems(src2) and _elems(src2) != [pi]:
            raise NdTranslationError("unexpected premise shape for box introduction")
        if not _elems(src2):
            body = self.bot_to(d2, pi)
        else:
            body = d2
        body = _relabel_open(body, Neg(a), u)
        starred = NDDeduction("box_i_star", Or(pi, pi), (d0, body),
                              discharges=((u, Neg(a)),))
        v1, v2 = self.mk.fresh(), self.mk.fresh()
        return NDDeduction("or_e", pi,
                           (starred, hyp(pi, v1), hyp(pi, v2)),
                           discharges=((v1, pi), (v2, pi)))

    def _neg_box_left(self, node: ScProof, pi: Formula, delta: list[Formula],
                      target: Formula) -> NDDeduction:
        a = pi.child.child
        d1 = self.translate(node.premises[0])
        d2 = self.translate(node.premises[1])
        src1 = node.premises[0].sequent.right
        src2 = node.premises[1].sequent.right

        if not delta:
            got_a = d1 if d1.conclusion is a else self.remap(d1, src1, [a])
            neg_a = NDDeduction("neg_box_e", Neg(a),
                                (hyp(pi, self.mk.fresh()), got_a))
            return _graft(d2, Neg(a), lambda: _clone_fresh(neg_a, self.mk))

        psi = target
        u = self.mk.fresh()
        shape = Or(psi, a)

        def route1(s: NDDeduction, e: Formula) -> NDDeduction:
            if e is a:
                return NDDeduction("or_i2", shape, (s,))
            return NDDeduction("or_i1", shape, (self.embed(s, e, delta),))

        d0 = self.or_elim_shape(d1, _elems(src1), shape, route1)
        body = _relabel_open(self.remap(d2, src2, delta), Neg(a), u)
        starred = NDDeduction("box_i_star", Or(psi, Box(a)), (d0, body),
                              discharges=((u, Neg(a)),))
        with_neg = NDDeduction("or_i2", Or(psi, pi), (hyp(pi, self.mk.fresh()),))
        conj = NDDeduction("and_i", And(Or(psi, Box(a)), Or(psi, pi)),
                           (starred, with_neg))
        distributed = distribute_join_over_meet(psi, Box(a), pi, conj, self.mk)

        inner_conj = And(Box(a), pi)
        w1, w2 = self.mk.fresh(), self.mk.fresh()
        crushed = self.bot_to(
            _bot_from_boxed_pair(lambda: hyp(inner_conj, w2), a), psi)
        return NDDeduction(
            "or_e", psi,
            (distributed, hyp(psi, w1), crushed),
            discharges=((w1, psi), (w2, inner_conj)))


def sc_to_nd(p: ScProof) -> NDDeduction:
    """Translate a cut-free sequent proof of G => D into a deduction of
    the canonical disjunction of D whose open assumptions lie in G."""
    sc.verify_sc_proof(p, allow_cut=False)
    return _ToNd().translate(p)


# ---------------------------------------------------------------------------
# Deduction -> sequent proof (may use cut).

def _axiom(f: Formula) -> ScProof:
    return sc.axiom([f], [f])


def _lemma_and_proj(a: Formula, b: Formula, first: bool) -> ScProof:
    out = a if first else b
    base = sc.weaken(_axiom(out), [a, b], [out])
    return ScProof(ScRule.AND_L, Sequent.of([And(a, b)], [out]), (And(a, b),), (base,))


def _lemma_or_inj(a: Formula, b: Formula, first: bool) -> ScProof:
    src = a if first else b
    base = sc.weaken(_axiom(src), [src], [a, b])
    return ScProof(ScRule.OR_R, Sequent.of([src], [Or(a, b)]), (Or(a, b),), (base,))


def _lemma_neg_or_out(a: Formula, b: Formula, first: bool) -> ScProof:
    out = Neg(a) if first else Neg(b)
    base = sc.weaken(_axiom(out), [Neg(a), Neg(b)], [out])
    return ScProof(ScRule.NEG_OR_L, Sequent.of([Neg(Or(a, b))], [out]),
                   (Neg(Or(a, b)),), (base,))


def _lemma_box_out(a: Formula) -> ScProof:
    return ScProof(ScRule.BOX_L1, Sequent.of([Box(a)], [a]), (Box(a),), (_axiom(a),))


def _lemma_nn_out(a: Formula) -> ScProof:
    return sc.double_neg_elim(a)


def _lemma_box_vs_plain(phi: Formula) -> ScProof:
    """Proof of phi & ~#phi => phi & ~phi."""
    conj_box = And(phi, Neg(Box(phi)))
    conj_plain = And(phi, Neg(phi))
    left = sc.weaken(_axiom(phi), [phi, Neg(Box(phi))], [phi])
    r1 = sc.weaken(_axiom(phi), [phi], [Neg(phi), phi])
    r2 = sc.weaken(_axiom(Neg(phi)), [phi, Neg(phi)], [Neg(phi)])
    neg_branch = ScProof(ScRule.NEG_BOX_L, Sequent.of([phi, Neg(Box(phi))], [Neg(phi)]),
                         (Neg(Box(phi)),), (r1, r2))
    both = ScProof(ScRule.AND_R, Sequent.of([phi, Neg(Box(phi))], [conj_plain]),
                   (conj_plain,), (left, neg_branch))
    return ScProof(ScRule.AND_L, Sequent.of([conj_box], [conj_plain]),
                   (conj_box,), (both,))


class _ToSc:
    """Reverse translation; the worker returns a proof of open => concl,
    with an empty right side for deductions ending in the falsum
    introduction (the falsum constant has no sequent rules)."""

    def translate(self, d: NDDeduction) -> ScProof:
        proof, empty = self.go(d)
        if empty:
            return sc.weaken(proof, proof.sequent.left, [BOT])
        return proof

    def _mat(self, pair: tuple[ScProof, bool], phi: Formula) -> ScProof:
        proof, empty = pair
        if empty:
            return sc.weaken(proof, proof.sequent.left, [phi])
        return proof

    def go(self, d: NDDeduction) -> tuple[ScProof, bool]:
        r = d.rule
        c = d.conclusion

        if r == "hyp":
            return _axiom(c), False

        if r == "ma":
            a = c.left
            base = _axiom(a)
            step = ScProof(ScRule.NEG_BOX_R1, Sequent.of([], [a, Neg(Box(a))]),
                           (Neg(Box(a)),), (sc.weaken(base, [a], [a]),))
            full = ScProof(ScRule.OR_R, Sequent.of([], [c]), (c,), (step,))
            return full, False

        if r == "and_i":
            p1 = self._mat(self.go(d.premises[0]), c.left)
            p2 = self._mat(self.go(d.premises[1]), c.right)
            left = p1.sequent.left | p2.sequent.left
            w1 = sc.weaken(p1, left, [c.left])
            w2 = sc.weaken(p2, left, [c.right])
            return ScProof(ScRule.AND_R, Sequent(left, frozenset({c})), (c,), (w1, w2)), False

        if r in ("and_e1", "and_e2"):
            conj = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), conj)
            lemma = _lemma_and_proj(conj.left, conj.right, r == "and_e1")
            return sc.cut(p, lemma, conj, p.sequent.left, [c]), False

        if r in ("neg_and_i1", "neg_and_i2"):
            na = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), na)
            base = sc.weaken(_axiom(na), [na], [Neg(c.child.left), Neg(c.child.right)])
            lemma = ScProof(ScRule.NEG_AND_R, Sequent.of([na], [c]), (c,), (base,))
            return sc.cut(p, lemma, na, p.sequent.left, [c]), False

        if r == "neg_and_e":
            p0 = self._mat(self.go(d.premises[0]), d.premises[0].conclusion)
            return self._case_split(
                d, p0, d.premises[0].conclusion,
                (Neg(d.premises[0].conclusion.child.left),
                 Neg(d.premises[0].conclusion.child.right)),
                ScRule.NEG_AND_L)

        if r in ("or_i1", "or_i2"):
            src = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), src)
            lemma = _lemma_or_inj(c.left, c.right, r == "or_i1")
            return sc.cut(p, lemma, src, p.sequent.left, [c]), False

        if r == "or_e":
            p0 = self._mat(self.go(d.premises[0]), d.premises[0].conclusion)
            disj = d.premises[0].conclusion
            return self._case_split(d, p0, disj, (disj.left, disj.right), ScRule.OR_L)

        if r == "neg_or_i":
            na, nb = d.premises[0].conclusion, d.premises[1].conclusion
            p1 = self._mat(self.go(d.premises[0]), na)
            p2 = self._mat(self.go(d.premises[1]), nb)
            left = p1.sequent.left | p2.sequent.left
            w1 = sc.weaken(p1, left, [na])
            w2 = sc.weaken(p2, left, [nb])
            return ScProof(ScRule.NEG_OR_R, Sequent(left, frozenset({c})), (c,), (w1, w2)), False

        if r in ("neg_or_e1", "neg_or_e2"):
            src = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), src)
            lemma = _lemma_neg_or_out(src.child.left, src.child.right, r == "neg_or_e1")
            return sc.cut(p, lemma, src, p.sequent.left, [c]), False

        if r == "neg_neg_i":
            p = self._mat(self.go(d.premises[0]), d.premises[0].conclusion)
            return ScProof(ScRule.NEG_NEG_R, Sequent(p.sequent.left, frozenset({c})),
                           (c,), (p,)), False

        if r == "neg_neg_e":
            src = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), src)
            lemma = _lemma_nn_out(c)
            return sc.cut(p, lemma, src, p.sequent.left, [c]), False

        if r == "box_i_star":
            return self._box_i_star(d)

        if r == "box_e":
            src = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), src)
            lemma = _lemma_box_out(c)
            return sc.cut(p, lemma, src, p.sequent.left, [c]), False

        if r == "neg_box_i":
            p = self._mat(self.go(d.premises[0]), d.premises[0].conclusion)
            return ScProof(ScRule.NEG_BOX_R2, Sequent(p.sequent.left, frozenset({c})),
                           (c,), (p,)), False

        if r == "neg_box_e":
            phi = d.premises[1].conclusion
            nb = d.premises[0].conclusion
            p0 = self._mat(self.go(d.premises[0]), nb)
            p1 = self._mat(self.go(d.premises[1]), phi)
            left = p0.sequent.left | p1.sequent.left
            conj_box = And(phi, nb)
            w0 = sc.weaken(p0, left, [nb])
            w1 = sc.weaken(p1, left, [phi])
            both = ScProof(ScRule.AND_R, Sequent(left, frozenset({conj_box})),
                           (conj_box,), (w1, w0))
            conj_plain = And(phi, Neg(phi))
            eq = _lemma_box_vs_plain(phi)
            to_plain = sc.cut(both, eq, conj_box, left, [conj_plain])
            drop = _lemma_and_proj(phi, Neg(phi), first=False)
            return sc.cut(to_plain, drop, conj_plain, left, [Neg(phi)]), False

        if r == "bot_i":
            src = d.premises[0].conclusion
            p = self._mat(self.go(d.premises[0]), src)
            lemma = sc.falsum_proof(src.right.child)
            return sc.cut(p, lemma, src, p.sequent.left, []), True

        if r == "bot_e":
            proof, empty = self.go(d.premises[0])
            if not empty:
                raise NdTranslationError(
                    "falsum obtained from a bare hypothesis cannot be expressed "
                    "in the sequent calculus")
            if c is BOT:
                return proof, True
            return sc.weaken(proof, proof.sequent.left, [c]), False

        raise NdTranslationError(f"unknown rule {r!r}")

    def _case_split(self, d: NDDeduction, p0: ScProof, main: Formula,
                    cases: tuple[Formula, Formula], rule: ScRule,
                    ) -> tuple[ScProof, bool]:
        c = d.conclusion
        pair1 = self.go(d.premises[1])
        pair2 = self.go(d.premises[2])
        empty = pair1[1] and pair2[1]
        right: list[Formula] = [] if empty else [c]
        q1 = pair1[0] if empty else self._mat(pair1, c)
        q2 = pair2[0] if empty else self._mat(pair2, c)
        a, b = cases
        left = (p0.sequent.left | (q1.sequent.left - {a}) | (q2.sequent.left - {b}))
        w1 = sc.weaken(q1, left | {a}, right)
        w2 = sc.weaken(q2, left | {b}, right)
        node = ScProof(rule, Sequent(left | {main}, frozenset(right)), (main,), (w1, w2))
        return sc.cut(p0, node, main, left, right), empty

    def _box_i_star(self, d: NDDeduction) -> tuple[ScProof, bool]:
        c = d.conclusion
        psi, boxed = c.left, c.right
        a = boxed.child
        p0 = self._mat(self.go(d.premises[0]), d.premises[0].conclusion)
        p1 = self._mat(self.go(d.premises[1]), psi)
        disj = d.premises[0].conclusion  # psi | a
        left = p0.sequent.left | (p1.sequent.left - {Neg(a)})
        # split psi | a into psi, a
        s1 = sc.weaken(_axiom(psi), [psi], [psi, a])
        s2 = sc.weaken(_axiom(a), [a], [psi, a])
        split = ScProof(ScRule.OR_L, Sequent.of([disj], [psi, a]), (disj,), (s1, s2))
        opened = sc.cut(p0, split, disj, left, [psi, a])
        side = sc.weaken(p1, left | {Neg(a)}, [psi])
        boxed_in = ScProof(ScRule.BOX_R, Sequent(left, frozenset({psi, boxed})),
                           (boxed,), (opened, side))
        folded = ScProof(ScRule.OR_R, Sequent(left, frozenset({c})), (c,), (boxed_in,))
        return folded, False


def nd_to_sc(d: NDDeduction) -> ScProof:
    """Translate a checked deduction into a sequent proof of
    open_assumptions => conclusion; the result may use cut."""
    verify_nd(d)
    return _ToSc().translate(d)


# ---------------------------------------------------------------------------
# Serialization and rendering.

def nd_to_json(d: NDDeduction) -> dict:
    doc: dict = {"rule": d.rule, "conclusion": d.conclusion.text}
    if d.marker is not None:
        doc["marker"] = d.marker
    if d.discharges:
        doc["discharges"] = [{"marker": m, "formula": f.text} for m, f in d.discharges]
    if d.premises:
        doc["premises"] = [nd_to_json(q) for q in d.premises]
    return doc


def nd_from_json(doc: dict) -> NDDeduction:
    return NDDeduction(
        rule=doc["rule"],
        conclusion=parse(doc["conclusion"]),
        premises=tuple(nd_from_json(q) for q in doc.get("premises", [])),
        marker=doc.get("marker"),
        discharges=tuple((e["marker"], parse(e["formula"]))
                         for e in doc.get("discharges", [])),
    )


def render_nd(d: NDDeduction, indent: int = 0) -> str:
    lines = [render_nd(q, indent + 1) for q in d.premises]
    pad = "    " * indent
    if d.rule == "hyp":
        lines.append(f"{pad}[{d.conclusion.text}]^{d.marker}")
    else:
        tag = d.rule
        if d.discharges:
            tag += "," + ",".join(m for m, _ in d.discharges)
        lines.append(f"{pad}{d.conclusion.text}   [{tag}]")
    return "\n".join(lines)
