"""Single-conclusion calculus G: checking and bounded cut-free search.

The calculus has the structural axiom a => a, the modal axiom
=> a | ~#a, weakening and cut, and the logic rules displayed by its
definition, including the context-free contraposition rule and the two
box rules that rewrite ~a to ~#a on the left and a & ~a to a & ~#a on
the right.  Cut-free backward search is exhaustive up to a height
bound; it exists to probe which sequents have no cut-free proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .matrix import M4, matrix_consequence
from .sc import is_cut_free, prove
from .sequents import Sequent
from .syntax import And, BOT, Box, Formula, Neg, Or, formula_key, parse

__all__ = [
    "GRule", "GSequent", "GProof", "GCheckError", "check_g_proof",
    "verify_g_proof", "g_search_cutfree", "cut_necessity_probe",
    "ProbeReport", "g_proof_to_json", "g_proof_from_json", "render_g_proof",
]


class GRule(str, Enum):
    STRUCT_AX = "g.struct_ax"
    MODAL_AX = "g.modal_ax"
    WEAK = "g.weak"
    CUT = "g.cut"
    AND_L = "g.and_l"
    AND_R = "g.and_r"
    OR_L = "g.or_l"
    OR_R1 = "g.or_r1"
    OR_R2 = "g.or_r2"
    NEG = "g.neg"
    BOT_RULE = "g.bot"
    NEG_NEG_L = "g.neg_neg_l"
    NEG_NEG_R = "g.neg_neg_r"
    BOX_L = "g.box_l"
    BOX_R = "g.box_r"


@dataclass(frozen=True)
class GSequent:
    left: frozenset[Formula]
    right: Formula

    @staticmethod
    def of(left: Iterable[Formula], right: Formula) -> "GSequent":
        return GSequent(frozenset(left), right)

    def __str__(self) -> str:
        lhs = ", ".join(f.text for f in sorted(self.left, key=formula_key))
        return f"{lhs} => {self.right.text}".strip()


@dataclass(frozen=True)
class GProof:
    rule: GRule
    sequent: GSequent
    premises: tuple["GProof", ...] = ()


def _modal_axiom_shape(f: Formula) -> bool:
    return (isinstance(f, Or) and isinstance(f.right, Neg)
            and isinstance(f.right.child, Box) and f.right.child.child is f.left)


class GCheckError(ValueError):
    def __init__(self, path: tuple[int, ...], rule: GRule, reason: str):
        super().__init__(f"node {list(path)} ({rule.value}): {reason}")
        self.path = path
        self.rule = rule
        self.reason = reason


def verify_g_proof(p: GProof, allow_cut: bool = False) -> None:
    def fail(path, rule, reason):
        raise GCheckError(path, rule, reason)

    def visit(node: GProof, path: tuple[int, ...]) -> None:
        seq = node.sequent
        L, phi = seq.left, seq.right
        prems = [q.sequent for q in node.premises]
        n = len(prems)
        rule = node.rule
        ok = False
        if rule is GRule.STRUCT_AX:
            ok = n == 0 and L == frozenset({phi})
        elif rule is GRule.MODAL_AX:
            ok = n == 0 and not L and _modal_axiom_shape(phi)
        elif rule is GRule.WEAK:
            ok = (n == 1 and prems[0].right is phi and prems[0].left <= L
                  and len(L - prems[0].left) <= 1)
        elif rule is GRule.CUT:
            if not allow_cut:
                fail(path, rule, "cut is not allowed here")
            ok = (n == 2 and prems[0].left == L and prems[1].right is phi
                  and prems[1].left == L | {prems[0].right})
        elif rule is GRule.AND_L:
            if n == 1 and prems[0].right is phi:
                for pi in L:
                    if isinstance(pi, And):
                        for ctx in (L - {pi}, L):
                            if prems[0].left == ctx | {pi.left, pi.right}:
                                ok = True
        elif rule is GRule.AND_R:
            ok = (n == 2 and isinstance(phi, And)
                  and prems[0] == GSequent(L, phi.left)
                  and prems[1] == GSequent(L, phi.right))
        elif rule is GRule.OR_L:
            if n == 2 and all(q.right is phi for q in prems):
                for pi in L:
                    if isinstance(pi, Or):
                        for ctx in (L - {pi}, L):
                            if (prems[0].left == ctx | {pi.left}
                                    and prems[1].left == ctx | {pi.right}):
                                ok = True
        elif rule in (GRule.OR_R1, GRule.OR_R2):
            if n == 1 and isinstance(phi, Or) and prems[0].left == L:
                want = phi.left if rule is GRule.OR_R1 else phi.right
                ok = prems[0].right is want
        elif rule is GRule.NEG:
            # contraposition carries no context: from a => b to ~b => ~a
            if (n == 1 and isinstance(phi, Neg) and len(L) == 1):
                (lone,) = L
                if isinstance(lone, Neg):
                    ok = prems[0] == GSequent(frozenset({phi.child}), lone.child)
        elif rule is GRule.BOT_RULE:
            ok = n == 1 and prems[0] == GSequent(L, BOT)
        elif rule is GRule.NEG_NEG_L:
            if n == 1 and prems[0].right is phi:
                for pi in L:
                    if isinstance(pi, Neg) and isinstance(pi.child, Neg):
                        for ctx in (L - {pi}, L):
                            if prems[0].left == ctx | {pi.child.child}:
                                ok = True
        elif rule is GRule.NEG_NEG_R:
            ok = (n == 1 and isinstance(phi, Neg) and isinstance(phi.child, Neg)
                  and prems[0] == GSequent(L, phi.child.child))
        elif rule is GRule.BOX_L:
            # from D, a, ~a => c conclude D, a, ~#a => c
            if n == 1 and prems[0].right is phi:
                for pi in L:
                    if (isinstance(pi, Neg) and isinstance(pi.child, Box)
                            and pi.child.child in L):
                        alpha = pi.child.child
                        for ctx in (L - {pi}, L):
                            if prems[0].left == ctx | {alpha, Neg(alpha)}:
                                ok = True
        elif rule is GRule.BOX_R:
            # from D => a & ~a conclude D => a & ~#a
            if (n == 1 and isinstance(phi, And) and isinstance(phi.right, Neg)
                    and isinstance(phi.right.child, Box)
                    and phi.right.child.child is phi.left):
                alpha = phi.left
                ok = prems[0] == GSequent(L, And(alpha, Neg(alpha)))
        else:  # pragma: no cover
            fail(path, rule, "unknown rule")
        if not ok:
            fail(path, rule, "premises do not instantiate the schema")
        for i, q in enumerate(node.premises):
            visit(q, path + (i,))

    visit(p, ())


def check_g_proof(p: GProof, allow_cut: bool = False) -> bool:
    try:
        verify_g_proof(p, allow_cut)
        return True
    except GCheckError:
        return False


# ---------------------------------------------------------------------------
# Bounded cut-free backward search.

def _backward_steps(seq: GSequent) -> list[tuple[GRule, list[GSequent]]]:
    L, phi = seq.left, seq.right
    out: list[tuple[GRule, list[GSequent]]] = []

    for beta in sorted(L, key=formula_key):
        out.append((GRule.WEAK, [GSequent(L - {beta}, phi)]))

    for pi in sorted(L, key=formula_key):
        if isinstance(pi, And):
            for ctx in (L - {pi}, L):
                out.append((GRule.AND_L, [GSequent(ctx | {pi.left, pi.right}, phi)]))
        elif isinstance(pi, Or):
            for ctx in (L - {pi}, L):
                out.append((GRule.OR_L, [GSequent(ctx | {pi.left}, phi),
                                         GSequent(ctx | {pi.right}, phi)]))
        elif isinstance(pi, Neg) and isinstance(pi.child, Neg):
            for ctx in (L - {pi}, L):
                out.append((GRule.NEG_NEG_L, [GSequent(ctx | {pi.child.child}, phi)]))
        elif (isinstance(pi, Neg) and isinstance(pi.child, Box)
              and pi.child.child in L):
            alpha = pi.child.child
            for ctx in (L - {pi}, L):
                out.append((GRule.BOX_L, [GSequent(ctx | {alpha, Neg(alpha)}, phi)]))

    if isinstance(phi, And):
        out.append((GRule.AND_R, [GSequent(L, phi.left), GSequent(L, phi.right)]))
        if (isinstance(phi.right, Neg) and isinstance(phi.right.child, Box)
                and phi.right.child.child is phi.left):
            out.append((GRule.BOX_R, [GSequent(L, And(phi.left, Neg(phi.left)))]))
    elif isinstance(phi, Or):
        out.append((GRule.OR_R1, [GSequent(L, phi.left)]))
        out.append((GRule.OR_R2, [GSequent(L, phi.right)]))
    elif isinstance(phi, Neg):
        if isinstance(phi.child, Neg):
            out.append((GRule.NEG_NEG_R, [GSequent(L, phi.child.child)]))
        if len(L) == 1:
            (lone,) = L
            if isinstance(lone, Neg):
                out.append((GRule.NEG, [GSequent(frozenset({phi.child}), lone.child)]))

    if phi is not BOT:
        out.append((GRule.BOT_RULE, [GSequent(L, BOT)]))

    return out


def g_search_cutfree(s: GSequent, depth: int) -> Optional[GProof]:
    """Exhaustive backward search over the cut-free rules, bounded by
    tree height.  Monotone in depth: more depth never loses proofs."""
    failed_at: dict[GSequent, int] = {}

    def search(seq: GSequent, budget: int) -> Optional[GProof]:
        if budget <= 0:
            return None
        if failed_at.get(seq, -1) >= budget:
            return None
        if seq.left == frozenset({seq.right}):
            return GProof(GRule.STRUCT_AX, seq)
        if not seq.left and _modal_axiom_shape(seq.right):
            return GProof(GRule.MODAL_AX, seq)
        for rule, prems in _backward_steps(seq):
            if any(p == seq for p in prems):
                continue
            subs = []
            for p in prems:
                sub = search(p, budget - 1)
                if sub is None:
                    break
                subs.append(sub)
            else:
                return GProof(rule, seq, tuple(subs))
        prev = failed_at.get(seq, -1)
        if budget > prev:
            failed_at[seq] = budget
        return None

    return search(s, depth)


@dataclass(frozen=True)
class ProbeReport:
    alpha: Formula
    depth: int
    valid: bool
    g_cutfree_found: bool
    sc_cutfree_found: bool
    vacuous_bound: bool

    def __str__(self) -> str:
        goal = Box(Or(self.alpha, Neg(Box(self.alpha))))
        lines = [
            f"goal: => {goal.text}",
            f"semantically valid: {self.valid}",
            f"cut-free G proof within height {self.depth}: {self.g_cutfree_found}",
            f"cut-free two-sided proof: {self.sc_cutfree_found}",
        ]
        if self.vacuous_bound:
            lines.append("note: height bound is vacuous (no proofs of any kind fit)")
        lines.append("empirical evidence only: the bounded search does not "
                     "decide unbounded cut-free provability")
        return "\n".join(lines)


def cut_necessity_probe(alpha: Formula, depth: int) -> ProbeReport:
    """Probe => #(a | ~#a): semantically valid and cut-free provable in
    the two-sided calculus, yet no cut-free G proof exists within the
    height bound."""
    goal_formula = Box(Or(alpha, Neg(Box(alpha))))
    g_found = g_search_cutfree(GSequent.of([], goal_formula), depth) is not None
    valid = matrix_consequence([], [goal_formula], M4)
    sc_proof = prove(Sequent.of([], [goal_formula]))
    sc_found = sc_proof is not None and is_cut_free(sc_proof)
    return ProbeReport(alpha, depth, valid, g_found, sc_found, vacuous_bound=depth <= 0)


# ---------------------------------------------------------------------------
# Serialization and rendering (mirrors the two-sided proof format).

def g_proof_to_json(p: GProof) -> dict:
    return {
        "rule": p.rule.value,
        "sequent": {
            "left": [f.text for f in sorted(p.sequent.left, key=formula_key)],
            "right": [p.sequent.right.text],
        },
        "premises": [g_proof_to_json(q) for q in p.premises],
    }


def g_proof_from_json(doc: dict) -> GProof:
    right = doc["sequent"]["right"]
    if len(right) != 1:
        raise ValueError("G sequents have exactly one conclusion")
    seq = GSequent.of([parse(t) for t in doc["sequent"]["left"]], parse(right[0]))
    return GProof(GRule(doc["rule"]), seq,
                  tuple(g_proof_from_json(q) for q in doc.get("premises", [])))


def render_g_proof(p: GProof, indent: int = 0) -> str:
    lines = [render_g_proof(q, indent + 1) for q in p.premises]
    lines.append(f"{'    ' * indent}{p.sequent}   [{p.rule.value}]")
    return "\n".join(lines)
