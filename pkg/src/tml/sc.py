"""Cut-free two-sided sequent calculus: checking, search, transformations.

The calculus has the axiom a => a, weakening, cut, and sixteen logical
rules keyed on the shapes |, &, ~|, ~&, ~~, # and ~# on either side.
Sequents are read as sets and the axiom absorbs weakening, so backward
search with premises that retain the principal formula saturates inside
a finite space and is a decision procedure.  Search never emits cut;
the checker accepts cut only when asked to.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .algebra import Algebra, algebra_evaluate, m4_algebra, product_algebra
from .sequents import Sequent, render_sequent
from .syntax import And, Box, Formula, Neg, Or, Var, formula_key, parse

__all__ = [
    "ScRule", "ScProof", "ScCheckError", "check_sc_proof", "verify_sc_proof",
    "prove", "contrapose", "necessitate", "denecessitate", "rule_soundness",
    "schema_counterexample", "falsum_proof", "proof_to_json", "proof_from_json",
    "render_proof", "proof_size", "is_cut_free",
]


class ScRule(str, Enum):
    AXIOM = "axiom"
    WEAK_L = "weak_l"
    WEAK_R = "weak_r"
    CUT = "cut"
    OR_L = "or_l"
    OR_R = "or_r"
    NEG_OR_L = "neg_or_l"
    NEG_OR_R = "neg_or_r"
    AND_L = "and_l"
    AND_R = "and_r"
    NEG_AND_L = "neg_and_l"
    NEG_AND_R = "neg_and_r"
    NEG_NEG_L = "neg_neg_l"
    NEG_NEG_R = "neg_neg_r"
    BOX_L1 = "box_l1"
    BOX_L2 = "box_l2"
    BOX_R = "box_r"
    NEG_BOX_L = "neg_box_l"
    NEG_BOX_R1 = "neg_box_r1"
    NEG_BOX_R2 = "neg_box_r2"


@dataclass(frozen=True)
class ScProof:
    rule: ScRule
    sequent: Sequent
    principal: tuple[Formula, ...] = ()
    premises: tuple["ScProof", ...] = ()


def is_cut_free(p: ScProof) -> bool:
    return p.rule is not ScRule.CUT and all(is_cut_free(q) for q in p.premises)


def proof_size(p: ScProof) -> int:
    return 1 + sum(proof_size(q) for q in p.premises)


# ---------------------------------------------------------------------------
# Rule schemas.  For a logical rule: the side its principal lives on, a
# decomposition of the principal, and per-premise side-formula additions.

def _or_parts(f: Formula):
    return (f.left, f.right) if isinstance(f, Or) else None


def _and_parts(f: Formula):
    return (f.left, f.right) if isinstance(f, And) else None


def _neg_or_parts(f: Formula):
    if isinstance(f, Neg) and isinstance(f.child, Or):
        return (f.child.left, f.child.right)
    return None


def _neg_and_parts(f: Formula):
    if isinstance(f, Neg) and isinstance(f.child, And):
        return (f.child.left, f.child.right)
    return None


def _neg_neg_parts(f: Formula):
    if isinstance(f, Neg) and isinstance(f.child, Neg):
        return (f.child.child,)
    return None


def _box_parts(f: Formula):
    return (f.child,) if isinstance(f, Box) else None


def _neg_box_parts(f: Formula):
    if isinstance(f, Neg) and isinstance(f.child, Box):
        return (f.child.child,)
    return None


@dataclass(frozen=True)
class _Schema:
    side: str  # "L" or "R"
    parts: Callable[[Formula], Optional[tuple[Formula, ...]]]
    # given decomposed parts, the (left-additions, right-additions) per premise
    deltas: Callable[[tuple[Formula, ...]], list[tuple[tuple[Formula, ...], tuple[Formula, ...]]]]


_SCHEMAS: dict[ScRule, _Schema] = {
    ScRule.OR_L: _Schema("L", _or_parts, lambda ps: [((ps[0],), ()), ((ps[1],), ())]),
    ScRule.OR_R: _Schema("R", _or_parts, lambda ps: [((), (ps[0], ps[1]))]),
    ScRule.NEG_OR_L: _Schema("L", _neg_or_parts,
                             lambda ps: [((Neg(ps[0]), Neg(ps[1])), ())]),
    ScRule.NEG_OR_R: _Schema("R", _neg_or_parts,
                             lambda ps: [((), (Neg(ps[0]),)), ((), (Neg(ps[1]),))]),
    ScRule.AND_L: _Schema("L", _and_parts, lambda ps: [((ps[0], ps[1]), ())]),
    ScRule.AND_R: _Schema("R", _and_parts, lambda ps: [((), (ps[0],)), ((), (ps[1],))]),
    ScRule.NEG_AND_L: _Schema("L", _neg_and_parts,
                              lambda ps: [((Neg(ps[0]),), ()), ((Neg(ps[1]),), ())]),
    ScRule.NEG_AND_R: _Schema("R", _neg_and_parts,
                              lambda ps: [((), (Neg(ps[0]), Neg(ps[1])))]),
    ScRule.NEG_NEG_L: _Schema("L", _neg_neg_parts, lambda ps: [((ps[0],), ())]),
    ScRule.NEG_NEG_R: _Schema("R", _neg_neg_parts, lambda ps: [((), (ps[0],))]),
    ScRule.BOX_L1: _Schema("L", _box_parts, lambda ps: [((ps[0],), ())]),
    ScRule.BOX_L2: _Schema("L", _box_parts, lambda ps: [((), (Neg(ps[0]),))]),
    ScRule.BOX_R: _Schema("R", _box_parts,
                          lambda ps: [((), (ps[0],)), ((Neg(ps[0]),), ())]),
    ScRule.NEG_BOX_L: _Schema("L", _neg_box_parts,
                              lambda ps: [((), (ps[0],)), ((Neg(ps[0]),), ())]),
    ScRule.NEG_BOX_R1: _Schema("R", _neg_box_parts, lambda ps: [((ps[0],), ())]),
    ScRule.NEG_BOX_R2: _Schema("R", _neg_box_parts, lambda ps: [((), (Neg(ps[0]),))]),
}


class ScCheckError(ValueError):
    def __init__(self, path: tuple[int, ...], rule: ScRule, reason: str):
        super().__init__(f"node {list(path)} ({rule.value}): {reason}")
        self.path = path
        self.rule = rule
        self.reason = reason


def verify_sc_proof(p: ScProof, allow_cut: bool = False) -> None:
    """Raise ScCheckError at the first node violating its rule schema."""

    def visit(node: ScProof, path: tuple[int, ...]) -> None:
        seq = node.sequent
        if node.rule is ScRule.AXIOM:
            if node.premises:
                raise ScCheckError(path, node.rule, "axiom must be a leaf")
            if not (seq.left & seq.right):
                raise ScCheckError(path, node.rule,
                                   "left and right sides do not share a formula")
        elif node.rule in (ScRule.WEAK_L, ScRule.WEAK_R):
            if len(node.premises) != 1 or len(node.principal) != 1:
                raise ScCheckError(path, node.rule, "weakening needs one premise and one principal")
            (alpha,) = node.principal
            prem = node.premises[0].sequent
            if node.rule is ScRule.WEAK_L:
                ok = (alpha in seq.left and prem.right == seq.right
                      and prem.left | {alpha} == seq.left)
            else:
                ok = (alpha in seq.right and prem.left == seq.left
                      and prem.right | {alpha} == seq.right)
            if not ok:
                raise ScCheckError(path, node.rule, "premise is not the weakened sequent")
        elif node.rule is ScRule.CUT:
            if not allow_cut:
                raise ScCheckError(path, node.rule, "cut is not allowed here")
            if len(node.premises) != 2 or len(node.principal) != 1:
                raise ScCheckError(path, node.rule, "cut needs two premises and a cut formula")
            (chi,) = node.principal
            p1, p2 = (q.sequent for q in node.premises)
            if not (p1.left == seq.left and p1.right == seq.right | {chi}
                    and p2.left == seq.left | {chi} and p2.right == seq.right):
                raise ScCheckError(path, node.rule, "premises do not match the cut schema")
        else:
            schema = _SCHEMAS[node.rule]
            if len(node.principal) != 1:
                raise ScCheckError(path, node.rule, "logical rule needs its principal formula")
            (pi,) = node.principal
            pool = seq.left if schema.side == "L" else seq.right
            if pi not in pool:
                raise ScCheckError(path, node.rule, "principal formula is not in the sequent")
            parts = schema.parts(pi)
            if parts is None:
                raise ScCheckError(path, node.rule, "principal has the wrong shape")
            deltas = schema.deltas(parts)
            if len(node.premises) != len(deltas):
                raise ScCheckError(
                    path, node.rule,
                    f"expected {len(deltas)} premise(s), found {len(node.premises)}")
            base_variants = []
            if schema.side == "L":
                base_variants = [(seq.left - {pi}, seq.right), (seq.left, seq.right)]
            else:
                base_variants = [(seq.left, seq.right - {pi}), (seq.left, seq.right)]
            ok = False
            for bl, br in base_variants:
                want = [Sequent(bl | frozenset(dl), br | frozenset(dr))
                        for dl, dr in deltas]
                if all(q.sequent == w for q, w in zip(node.premises, want)):
                    ok = True
                    break
            if not ok:
                raise ScCheckError(path, node.rule, "premises do not instantiate the schema")
        for i, q in enumerate(node.premises):
            visit(q, path + (i,))

    visit(p, ())


def check_sc_proof(p: ScProof, allow_cut: bool = False) -> bool:
    try:
        verify_sc_proof(p, allow_cut)
        return True
    except ScCheckError:
        return False


# ---------------------------------------------------------------------------
# Backward proof search.
#
# Single-premise decompositions are tried before branching rules; inside a
# tier, candidates are ordered by principal (size, text) and then by the
# priority below.  box_l2 precedes box_l1 and neg_box_r1 precedes
# neg_box_r2; together with the tiers this pins down which proof is found.

_TIER1 = (ScRule.NEG_NEG_L, ScRule.NEG_NEG_R, ScRule.AND_L, ScRule.OR_R,
          ScRule.NEG_OR_L, ScRule.NEG_AND_R, ScRule.NEG_BOX_R1,
          ScRule.NEG_BOX_R2, ScRule.BOX_L2, ScRule.BOX_L1)
_TIER2 = (ScRule.OR_L, ScRule.AND_R, ScRule.NEG_OR_R, ScRule.NEG_AND_L,
          ScRule.BOX_R, ScRule.NEG_BOX_L)
_PRIORITY = {rule: i for i, rule in enumerate(_TIER1 + _TIER2)}
_TIER = {rule: (1 if rule in _TIER1 else 2) for rule in _TIER1 + _TIER2}

_RULES_LEFT: dict[type, tuple[ScRule, ...]] = {}
_RULES_RIGHT: dict[type, tuple[ScRule, ...]] = {}


def _rules_for(side: str, f: Formula) -> tuple[ScRule, ...]:
    if isinstance(f, Or):
        return (ScRule.OR_L,) if side == "L" else (ScRule.OR_R,)
    if isinstance(f, And):
        return (ScRule.AND_L,) if side == "L" else (ScRule.AND_R,)
    if isinstance(f, Box):
        return (ScRule.BOX_L2, ScRule.BOX_L1) if side == "L" else (ScRule.BOX_R,)
    if isinstance(f, Neg):
        g = f.child
        if isinstance(g, Or):
            return (ScRule.NEG_OR_L,) if side == "L" else (ScRule.NEG_OR_R,)
        if isinstance(g, And):
            return (ScRule.NEG_AND_L,) if side == "L" else (ScRule.NEG_AND_R,)
        if isinstance(g, Neg):
            return (ScRule.NEG_NEG_L,) if side == "L" else (ScRule.NEG_NEG_R,)
        if isinstance(g, Box):
            if side == "L":
                return (ScRule.NEG_BOX_L,)
            return (ScRule.NEG_BOX_R1, ScRule.NEG_BOX_R2)
    return ()


_MISS = object()


def prove(s: Sequent) -> Optional[ScProof]:
    """Cut-free backward search; returns a proof iff the sequent is valid
    over the four-valued matrix.  Deterministic: the first proof in the
    documented candidate order is returned.

    The calculus has no rules for the constant bot (it is definable as
    ~a & #a), so sequents mentioning it are rejected up front rather
    than searched incompletely."""
    from .syntax import Bot, subformulas
    for f in s.left | s.right:
        if any(isinstance(g, Bot) for g in subformulas(f)):
            raise ValueError(
                "the two-sided calculus has no rules for 'bot'; encode it as ~a & #a")
    memo: dict[Sequent, Optional[ScProof]] = {}

    def axiom_witness(seq: Sequent) -> Optional[Formula]:
        common = seq.left & seq.right
        if not common:
            return None
        return min(common, key=formula_key)

    def candidates(seq: Sequent) -> list[tuple[tuple, ScRule, Formula]]:
        out = []
        for side, pool in (("L", seq.left), ("R", seq.right)):
            for f in pool:
                for rule in _rules_for(side, f):
                    key = (_TIER[rule],) + formula_key(f) + (_PRIORITY[rule],)
                    out.append((key, rule, f))
        out.sort(key=lambda t: t[0])
        return out

    def search(seq: Sequent) -> Optional[ScProof]:
        hit = memo.get(seq, _MISS)
        if hit is not _MISS:
            return hit
        witness = axiom_witness(seq)
        if witness is not None:
            proof = ScProof(ScRule.AXIOM, seq, (witness,))
            memo[seq] = proof
            return proof
        memo[seq] = None  # premises grow strictly, so recursion cannot revisit seq
        result: Optional[ScProof] = None
        for _, rule, pi in candidates(seq):
            schema = _SCHEMAS[rule]
            deltas = schema.deltas(schema.parts(pi))
            prem_seqs = [Sequent(seq.left | frozenset(dl), seq.right | frozenset(dr))
                         for dl, dr in deltas]
            if any(ps == seq for ps in prem_seqs):
                continue
            subs = []
            for ps in prem_seqs:
                sub = search(ps)
                if sub is None:
                    break
                subs.append(sub)
            else:
                result = ScProof(rule, seq, (pi,), tuple(subs))
                break
        memo[seq] = result
        return result

    return search(s)


# ---------------------------------------------------------------------------
# Small constructed proofs and composition helpers.

def axiom(left: Iterable[Formula], right: Iterable[Formula]) -> ScProof:
    seq = Sequent.of(left, right)
    assert seq.left & seq.right
    return ScProof(ScRule.AXIOM, seq, (min(seq.left & seq.right, key=formula_key),))


def weaken(p: ScProof, left: Iterable[Formula], right: Iterable[Formula]) -> ScProof:
    """Extend a proof to a superset sequent with explicit weakenings."""
    left = frozenset(left)
    right = frozenset(right)
    if not (p.sequent.left <= left and p.sequent.right <= right):
        raise ValueError("weaken target must extend the proved sequent")
    cur = p
    for f in sorted(left - p.sequent.left, key=formula_key):
        seq = Sequent(cur.sequent.left | {f}, cur.sequent.right)
        cur = ScProof(ScRule.WEAK_L, seq, (f,), (cur,))
    for f in sorted(right - p.sequent.right, key=formula_key):
        seq = Sequent(cur.sequent.left, cur.sequent.right | {f})
        cur = ScProof(ScRule.WEAK_R, seq, (f,), (cur,))
    return cur


def cut(p_right: ScProof, p_left: ScProof, chi: Formula,
        left: Iterable[Formula], right: Iterable[Formula]) -> ScProof:
    """Cut chi out: p_right proves a sequent with chi on the right,
    p_left one with chi on the left; both are weakened to the shared
    context first."""
    left = frozenset(left)
    right = frozenset(right)
    p1 = weaken(p_right, left, right | {chi})
    p2 = weaken(p_left, left | {chi}, right)
    return ScProof(ScRule.CUT, Sequent(left, right), (chi,), (p1, p2))


def double_neg_intro(alpha: Formula) -> ScProof:
    """Proof of alpha => ~~alpha."""
    base = axiom([alpha], [alpha])
    seq = Sequent.of([alpha], [Neg(Neg(alpha))])
    return ScProof(ScRule.NEG_NEG_R, seq, (Neg(Neg(alpha)),), (base,))


def double_neg_elim(alpha: Formula) -> ScProof:
    """Proof of ~~alpha => alpha."""
    base = axiom([alpha], [alpha])
    seq = Sequent.of([Neg(Neg(alpha))], [alpha])
    return ScProof(ScRule.NEG_NEG_L, seq, (Neg(Neg(alpha)),), (base,))


def falsum_proof(alpha: Formula) -> ScProof:
    """Proof of ~a & #a => ; the definable falsum of the calculus."""
    na = Neg(alpha)
    base = axiom([na], [na])
    step = ScProof(ScRule.BOX_L2, Sequent.of([na, Box(alpha)], []), (Box(alpha),), (base,))
    conj = And(na, Box(alpha))
    return ScProof(ScRule.AND_L, Sequent.of([conj], []), (conj,), (step,))


def _neg_set(fs: frozenset[Formula]) -> frozenset[Formula]:
    return frozenset(Neg(f) for f in fs)


# ---------------------------------------------------------------------------
# Contraposition: from a cut-free proof of G => D build a proof of
# ~D => ~G.  The |, &, ~~ cases commute directly; the cases that move a
# formula across ~~ use the closed proofs of a => ~~a and ~~a => a plus
# cut, and the box cases re-enter through the dual box rule.

def contrapose(p: ScProof, rederive_cutfree: bool = False) -> ScProof:
    verify_sc_proof(p, allow_cut=False)
    result = _contrapose(p)
    if rederive_cutfree:
        reproved = prove(result.sequent)
        if reproved is None:
            raise RuntimeError("contraposed sequent unexpectedly unprovable")
        return reproved
    return result


def _apply(rule: ScRule, conclusion: Sequent, principal: Formula,
           subs: Sequence[ScProof]) -> ScProof:
    """Build a rule node with the retained-context reading, weakening
    each subproof up to its required premise sequent."""
    schema = _SCHEMAS[rule]
    deltas = schema.deltas(schema.parts(principal))
    reqs = [Sequent(conclusion.left | frozenset(dl), conclusion.right | frozenset(dr))
            for dl, dr in deltas]
    prems = tuple(weaken(s, r.left, r.right) for s, r in zip(subs, reqs))
    return ScProof(rule, conclusion, (principal,), prems)


def _replace_nn_right(q: ScProof, alpha: Formula) -> ScProof:
    """From a proof of G => D, ~~a derive G => (D - ~~a), a via cut."""
    nn = Neg(Neg(alpha))
    left = q.sequent.left
    right = (q.sequent.right - {nn}) | {alpha}
    return cut(q, double_neg_elim(alpha), nn, left, right)


def _replace_nn_left(q: ScProof, alpha: Formula) -> ScProof:
    """From a proof of G, ~~a => D derive G - ~~a, a => D via cut."""
    nn = Neg(Neg(alpha))
    left = (q.sequent.left - {nn}) | {alpha}
    right = q.sequent.right
    return cut(double_neg_intro(alpha), q, nn, left, right)


def _contrapose(node: ScProof) -> ScProof:
    seq = node.sequent
    target = Sequent(_neg_set(seq.right), _neg_set(seq.left))

    if node.rule is ScRule.AXIOM:
        (alpha,) = node.principal
        return ScProof(ScRule.AXIOM, target, (Neg(alpha),))

    if node.rule in (ScRule.WEAK_L, ScRule.WEAK_R):
        return weaken(_contrapose(node.premises[0]), target.left, target.right)

    if node.rule is ScRule.CUT:
        raise ValueError("contrapose requires a cut-free proof")

    (pi,) = node.principal
    parts = _SCHEMAS[node.rule].parts(pi)
    subs = [_contrapose(q) for q in node.premises]
    npi = Neg(pi)

    if node.rule is ScRule.OR_R:
        return _apply(ScRule.NEG_OR_L, target, npi, subs)
    if node.rule is ScRule.OR_L:
        return _apply(ScRule.NEG_OR_R, target, npi, subs)
    if node.rule is ScRule.AND_L:
        return _apply(ScRule.NEG_AND_R, target, npi, subs)
    if node.rule is ScRule.AND_R:
        return _apply(ScRule.NEG_AND_L, target, npi, subs)

    if node.rule is ScRule.NEG_OR_L:
        a, b = parts
        q = _replace_nn_right(_replace_nn_right(subs[0], a), b)
        inner = Or(a, b)
        step = _apply(ScRule.OR_R, Sequent(target.left, target.right | {inner}), inner, [q])
        return _apply(ScRule.NEG_NEG_R, target, npi, [step])
    if node.rule is ScRule.NEG_AND_R:
        a, b = parts
        q = _replace_nn_left(_replace_nn_left(subs[0], a), b)
        inner = And(a, b)
        step = _apply(ScRule.AND_L, Sequent(target.left | {inner}, target.right), inner, [q])
        return _apply(ScRule.NEG_NEG_L, target, npi, [step])
    if node.rule is ScRule.NEG_OR_R:
        a, b = parts
        q1 = _replace_nn_left(subs[0], a)
        q2 = _replace_nn_left(subs[1], b)
        inner = Or(a, b)
        step = _apply(ScRule.OR_L, Sequent(target.left | {inner}, target.right),
                      inner, [q1, q2])
        return _apply(ScRule.NEG_NEG_L, target, npi, [step])
    if node.rule is ScRule.NEG_AND_L:
        a, b = parts
        q1 = _replace_nn_right(subs[0], a)
        q2 = _replace_nn_right(subs[1], b)
        inner = And(a, b)
        step = _apply(ScRule.AND_R, Sequent(target.left, target.right | {inner}),
                      inner, [q1, q2])
        return _apply(ScRule.NEG_NEG_R, target, npi, [step])

    if node.rule is ScRule.NEG_NEG_L:
        return _apply(ScRule.NEG_NEG_R, target, npi, subs)
    if node.rule is ScRule.NEG_NEG_R:
        return _apply(ScRule.NEG_NEG_L, target, npi, subs)

    if node.rule is ScRule.BOX_L1:
        return _apply(ScRule.NEG_BOX_R2, target, npi, subs)
    if node.rule is ScRule.BOX_L2:
        (a,) = parts
        q = _replace_nn_left(subs[0], a)
        return _apply(ScRule.NEG_BOX_R1, target, npi, [q])
    if node.rule is ScRule.BOX_R:
        (a,) = parts
        q1 = _replace_nn_right(subs[1], a)  # ~D => ~G..., a
        return _apply(ScRule.NEG_BOX_L, target, npi, [q1, subs[0]])
    if node.rule is ScRule.NEG_BOX_L:
        (a,) = parts
        q1 = _replace_nn_right(subs[1], a)
        inner = Box(a)
        step = _apply(ScRule.BOX_R, Sequent(target.left, target.right | {inner}),
                      inner, [q1, subs[0]])
        return _apply(ScRule.NEG_NEG_R, target, npi, [step])
    if node.rule is ScRule.NEG_BOX_R1:
        (a,) = parts
        inner = Box(a)
        step = _apply(ScRule.BOX_L2, Sequent(target.left | {inner}, target.right),
                      inner, subs)
        return _apply(ScRule.NEG_NEG_L, target, npi, [step])
    if node.rule is ScRule.NEG_BOX_R2:
        (a,) = parts
        q = _replace_nn_left(subs[0], a)
        inner = Box(a)
        step = _apply(ScRule.BOX_L1, Sequent(target.left | {inner}, target.right),
                      inner, [q])
        return _apply(ScRule.NEG_NEG_L, target, npi, [step])

    raise AssertionError(f"unhandled rule {node.rule}")


# ---------------------------------------------------------------------------
# Necessitation and its inverse.

def necessitate(p: ScProof) -> ScProof:
    """From a cut-free proof of => psi build a proof of => #psi."""
    seq = p.sequent
    if seq.left or len(seq.right) != 1:
        raise ValueError("necessitate expects a proof of '=> psi'")
    (psi,) = seq.right
    negated = contrapose(p)  # ~psi =>
    conclusion = Sequent.of([], [Box(psi)])
    return ScProof(ScRule.BOX_R, conclusion, (Box(psi),), (p, negated))


def denecessitate(p: ScProof) -> ScProof:
    """From a proof of => #psi recover a proof of => psi.

    The root must reduce to the right box rule once weakenings are
    skipped (for cut-free proofs this is forced); its first premise is
    returned when it proves => psi exactly, otherwise (search proofs
    keep the boxed formula in the premise context) the premise sequent
    is re-derived.
    """
    verify_sc_proof(p, allow_cut=True)
    seq = p.sequent
    if seq.left or len(seq.right) != 1 or not isinstance(next(iter(seq.right)), Box):
        raise ValueError("denecessitate expects a proof of '=> #psi'")
    (boxed,) = seq.right
    psi = boxed.child
    node = p
    while node.rule in (ScRule.WEAK_L, ScRule.WEAK_R):
        node = node.premises[0]
    if node.rule is not ScRule.BOX_R or node.principal != (boxed,):
        raise ValueError("root inference does not introduce the boxed formula")
    first = node.premises[0]
    goal = Sequent.of([], [psi])
    probe = first
    while True:
        if probe.sequent == goal:
            return probe
        if probe.rule in (ScRule.WEAK_L, ScRule.WEAK_R):
            probe = probe.premises[0]
        else:
            break
    reproved = prove(goal)
    if reproved is None:
        raise ValueError("first premise does not reduce to a proof of => psi")
    return reproved


# ---------------------------------------------------------------------------
# Local degree-soundness of the rule schemas over the algebra and a
# product of it with itself.

_G, _D, _A, _B = Var("g"), Var("d"), Var("a"), Var("b")

_SOUNDNESS_SCHEMA: dict[ScRule, tuple[list[tuple[list, list]], tuple[list, list]]] = {
    ScRule.AXIOM: ([], ([_A], [_A])),
    ScRule.WEAK_L: ([([_G], [_D])], ([_G, _A], [_D])),
    ScRule.WEAK_R: ([([_G], [_D])], ([_G], [_D, _A])),
    ScRule.CUT: ([([_G], [_D, _A]), ([_G, _A], [_D])], ([_G], [_D])),
    ScRule.OR_L: ([([_G, _A], [_D]), ([_G, _B], [_D])], ([_G, Or(_A, _B)], [_D])),
    ScRule.OR_R: ([([_G], [_D, _A, _B])], ([_G], [_D, Or(_A, _B)])),
    ScRule.NEG_OR_L: ([([_G, Neg(_A), Neg(_B)], [_D])], ([_G, Neg(Or(_A, _B))], [_D])),
    ScRule.NEG_OR_R: ([([_G], [_D, Neg(_A)]), ([_G], [_D, Neg(_B)])],
                      ([_G], [_D, Neg(Or(_A, _B))])),
    ScRule.AND_L: ([([_G, _A, _B], [_D])], ([_G, And(_A, _B)], [_D])),
    ScRule.AND_R: ([([_G], [_D, _A]), ([_G], [_D, _B])], ([_G], [_D, And(_A, _B)])),
    ScRule.NEG_AND_L: ([([_G, Neg(_A)], [_D]), ([_G, Neg(_B)], [_D])],
                       ([_G, Neg(And(_A, _B))], [_D])),
    ScRule.NEG_AND_R: ([([_G], [_D, Neg(_A), Neg(_B)])], ([_G], [_D, Neg(And(_A, _B))])),
    ScRule.NEG_NEG_L: ([([_G, _A], [_D])], ([_G, Neg(Neg(_A))], [_D])),
    ScRule.NEG_NEG_R: ([([_G], [_D, _A])], ([_G], [_D, Neg(Neg(_A))])),
    ScRule.BOX_L1: ([([_G, _A], [_D])], ([_G, Box(_A)], [_D])),
    ScRule.BOX_L2: ([([_G], [_D, Neg(_A)])], ([_G, Box(_A)], [_D])),
    ScRule.BOX_R: ([([_G], [_D, _A]), ([_G, Neg(_A)], [_D])], ([_G], [_D, Box(_A)])),
    ScRule.NEG_BOX_L: ([([_G], [_D, _A]), ([_G, Neg(_A)], [_D])],
                       ([_G, Neg(Box(_A))], [_D])),
    ScRule.NEG_BOX_R1: ([([_G, _A], [_D])], ([_G], [_D, Neg(Box(_A))])),
    ScRule.NEG_BOX_R2: ([([_G], [_D, Neg(_A)])], ([_G], [_D, Neg(Box(_A))])),
}


def _schema_vars(premises, conclusion) -> list[str]:
    from .syntax import variables
    names: set[str] = set()
    for left, right in itertools.chain(premises, [conclusion]):
        for f in itertools.chain(left, right):
            names |= variables(f)
    return sorted(names)


def schema_counterexample(premises: list[tuple[list, list]],
                          conclusion: tuple[list, list],
                          algebras: Optional[Sequence[Algebra]] = None,
                          ) -> Optional[dict]:
    """Search all assignments for one where every premise inequality
    meet(left) <= join(right) holds but the conclusion's fails."""
    if algebras is None:
        base = m4_algebra()
        algebras = (base, product_algebra(base, base))
    names = _schema_vars(premises, conclusion)

    def holds(alg: Algebra, assign: dict, left: list, right: list) -> bool:
        lo = alg.one
        for f in left:
            lo = alg.meet[(lo, algebra_evaluate(f, assign, alg))]
        hi = alg.zero
        for f in right:
            hi = alg.join[(hi, algebra_evaluate(f, assign, alg))]
        return alg.leq(lo, hi)

    for alg in algebras:
        for combo in itertools.product(alg.carrier, repeat=len(names)):
            assign = dict(zip(names, combo))
            if all(holds(alg, assign, l, r) for l, r in premises) and \
                    not holds(alg, assign, *conclusion):
                return assign
    return None


def rule_soundness(rule: ScRule) -> bool:
    """Premise validity implies conclusion validity, degree-wise, over
    the four-element algebra and its square."""
    premises, conclusion = _SOUNDNESS_SCHEMA[rule]
    return schema_counterexample(premises, conclusion) is None


# ---------------------------------------------------------------------------
# Serialization and text rendering.

def proof_to_json(p: ScProof) -> dict:
    return {
        "rule": p.rule.value,
        "sequent": {
            "left": [f.text for f in sorted(p.sequent.left, key=formula_key)],
            "right": [f.text for f in sorted(p.sequent.right, key=formula_key)],
        },
        "principal": [f.text for f in p.principal],
        "premises": [proof_to_json(q) for q in p.premises],
    }


def proof_from_json(doc: dict) -> ScProof:
    seq = Sequent.of([parse(t) for t in doc["sequent"]["left"]],
                     [parse(t) for t in doc["sequent"]["right"]])
    return ScProof(
        rule=ScRule(doc["rule"]),
        sequent=seq,
        principal=tuple(parse(t) for t in doc.get("principal", [])),
        premises=tuple(proof_from_json(q) for q in doc.get("premises", [])),
    )


def render_proof(p: ScProof, indent: int = 0) -> str:
    lines = []
    for q in p.premises:
        lines.append(render_proof(q, indent + 1))
    lines.append(f"{'    ' * indent}{render_sequent(p.sequent)}   [{p.rule.value}]")
    return "\n".join(lines)
