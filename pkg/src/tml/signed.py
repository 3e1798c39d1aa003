"""Generic signed-formula calculus for a finite matrix, with n-sequents.

For an n-valued matrix the calculus has the single axiom scheme "one
formula under every sign", weakening, and one logical rule per pair of
a connective and an argument-value tuple: from premises adding sign
a_i to argument i, conclude the table output sign on the compound.
For the four-valued instance this yields exactly forty logical rules.
Bounded data: all rule applications stay inside the subformulas of the
goal, so memoized backward search terminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .matrix import LogicalMatrix, M4, TruthValue, Valuation, evaluate
from .syntax import And, Box, Formula, Neg, Or, formula_key, parse

__all__ = [
    "SignedFormula", "NSequent", "SignedRule", "SFDerivation",
    "generate_sf_rules", "nsequent_satisfied", "embed_two_sided",
    "check_sf_derivation", "sf_prove", "SFCheckError",
    "derivation_to_json", "derivation_from_json", "parse_signed",
]


class SignedFormula(NamedTuple):
    sign: TruthValue
    formula: Formula

    def __str__(self) -> str:
        return f"{self.sign}:{self.formula.text}"


def parse_signed(text: str) -> SignedFormula:
    sign, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"signed formula must look like 'sign:formula': {text!r}")
    return SignedFormula(sign.strip(), parse(body))


@dataclass(frozen=True)
class NSequent:
    """Tuple of formula sets, one component per truth value."""

    components: tuple[frozenset[Formula], ...]

    @staticmethod
    def of(*components: Iterable[Formula]) -> "NSequent":
        return NSequent(tuple(frozenset(c) for c in components))

    def signed_set(self, m: LogicalMatrix) -> frozenset[SignedFormula]:
        out = set()
        for value, comp in zip(m.values, self.components):
            out.update(SignedFormula(value, f) for f in comp)
        return frozenset(out)

    def __str__(self) -> str:
        return " | ".join(
            ", ".join(f.text for f in sorted(c, key=formula_key))
            for c in self.components)


_CONNECTIVE_AST = {"neg": Neg, "box": Box, "and": And, "or": Or}


@dataclass(frozen=True)
class SignedRule:
    name: str
    kind: str  # "axiom" | "weakening" | "logical"
    connective: Optional[str] = None
    arg_signs: tuple[TruthValue, ...] = ()
    out_sign: Optional[TruthValue] = None


def generate_sf_rules(m: LogicalMatrix) -> list[SignedRule]:
    """Axiom, weakening, and the logical rules of the matrix.

    Logical rules cover connectives of arity >= 1; a nullary constant
    contributes no decomposition rule.  Emission order: connective,
    then argument tuple by value index.
    """
    rules = [SignedRule("axiom", "axiom"), SignedRule("weaken", "weakening")]
    for conn in m.connective_order:
        op = m.ops[conn]
        if op.arity == 0:
            continue
        for signs in itertools.product(m.values, repeat=op.arity):
            out = op.table[signs]
            name = f"{conn}_{'_'.join(signs)}"
            rules.append(SignedRule(name, "logical", conn, signs, out))
    return rules


def nsequent_satisfied(v: Valuation, s: NSequent, m: LogicalMatrix = M4) -> bool:
    """True iff some formula of some component takes that component's value."""
    if len(s.components) != len(m.values):
        raise ValueError("n-sequent arity does not match the matrix")
    for value, comp in zip(m.values, s.components):
        for f in comp:
            if evaluate(f, v, m) == value:
                return True
    return False


def _designated_start(m: LogicalMatrix) -> int:
    """Index d such that designated values are exactly values[d:]."""
    flags = [v in m.designated for v in m.values]
    if True not in flags:
        raise ValueError("matrix has no designated values")
    d = flags.index(True)
    if not all(flags[d:]) or any(flags[:d]):
        raise ValueError("designated values must form a suffix of the value order")
    return d


def embed_two_sided(gamma: Iterable[Formula], delta: Iterable[Formula],
                    m: LogicalMatrix = M4) -> NSequent:
    """Embed an ordinary sequent: premises fill the non-designated
    components, conclusions the designated ones."""
    d = _designated_start(m)
    g = frozenset(gamma)
    dd = frozenset(delta)
    comps = [g] * d + [dd] * (len(m.values) - d)
    return NSequent(tuple(comps))


@dataclass(frozen=True)
class SFDerivation:
    rule: str
    signed: frozenset[SignedFormula]
    premises: tuple["SFDerivation", ...] = ()


class SFCheckError(ValueError):
    def __init__(self, path: tuple[int, ...], reason: str):
        super().__init__(f"node {list(path)}: {reason}")
        self.path = path
        self.reason = reason


def _is_axiom_set(signed: frozenset[SignedFormula], m: LogicalMatrix) -> bool:
    by_formula: dict[Formula, set[str]] = {}
    for sf in signed:
        by_formula.setdefault(sf.formula, set()).add(sf.sign)
    return any(signs == set(m.values) for signs in by_formula.values())


def verify_sf_derivation(d: SFDerivation, m: LogicalMatrix = M4) -> None:
    """Raise SFCheckError at the first node that fails its schema."""
    rules = {r.name: r for r in generate_sf_rules(m)}

    def visit(node: SFDerivation, path: tuple[int, ...]) -> None:
        if node.rule == "axiom":
            if node.premises:
                raise SFCheckError(path, "axiom node must be a leaf")
            if not _is_axiom_set(node.signed, m):
                raise SFCheckError(path, "no formula carries every sign")
        elif node.rule == "weaken":
            if len(node.premises) != 1:
                raise SFCheckError(path, "weakening takes exactly one premise")
            if not node.premises[0].signed <= node.signed:
                raise SFCheckError(path, "weakening premise is not a subset")
        else:
            rule = rules.get(node.rule)
            if rule is None or rule.kind != "logical":
                raise SFCheckError(path, f"unknown rule {node.rule!r}")
            if len(node.premises) != len(rule.arg_signs):
                raise SFCheckError(path, "premise count does not match rule arity")
            if not _matches_logical(node, rule):
                raise SFCheckError(path, f"premises do not instantiate {rule.name}")
        for i, prem in enumerate(node.premises):
            visit(prem, path + (i,))

    visit(d, ())


def _matches_logical(node: SFDerivation, rule: SignedRule) -> bool:
    ctor = _CONNECTIVE_AST[rule.connective]
    for sf in node.signed:
        if sf.sign != rule.out_sign or not isinstance(sf.formula, ctor):
            continue
        if isinstance(sf.formula, (Neg, Box)):
            args = (sf.formula.child,)
        else:
            args = (sf.formula.left, sf.formula.right)
        if len(args) != len(rule.arg_signs):
            continue
        # the context may either drop or retain the principal signed formula
        for omega in (node.signed - {sf}, node.signed):
            want = [omega | {SignedFormula(s, a)}
                    for s, a in zip(rule.arg_signs, args)]
            if all(p.signed == w for p, w in zip(node.premises, want)):
                return True
    return False


def check_sf_derivation(d: SFDerivation, m: LogicalMatrix = M4) -> bool:
    try:
        verify_sf_derivation(d, m)
        return True
    except SFCheckError:
        return False


def sf_prove(goal: Iterable[SignedFormula], m: LogicalMatrix = M4,
             ) -> Optional[SFDerivation]:
    """Backward proof search; succeeds exactly on valid goals.

    Premises keep the conclusion's signed set and add one signed
    subformula, so the space is bounded by subformulas x signs and the
    memoized search terminates.
    """
    from .syntax import Bot, subformulas
    goal_set = frozenset(goal)
    for sf in goal_set:
        if any(isinstance(g, Bot) for g in subformulas(sf.formula)):
            raise ValueError("the signed calculus has no decomposition rule for 'bot'")
    tuples_for: dict[tuple[str, TruthValue], list[tuple[TruthValue, ...]]] = {}
    for rule in generate_sf_rules(m):
        if rule.kind == "logical":
            tuples_for.setdefault((rule.connective, rule.out_sign), []).append(rule.arg_signs)

    memo: dict[frozenset[SignedFormula], Optional[SFDerivation]] = {}
    in_progress: set[frozenset[SignedFormula]] = set()
    sign_index = {v: i for i, v in enumerate(m.values)}

    def candidates(omega: frozenset[SignedFormula]) -> list[SignedFormula]:
        compounds = [sf for sf in omega
                     if isinstance(sf.formula, (Neg, Box, And, Or))]
        compounds.sort(key=lambda sf: (sign_index[sf.sign],) + formula_key(sf.formula))
        return compounds

    def search(omega: frozenset[SignedFormula]) -> Optional[SFDerivation]:
        if omega in memo:
            return memo[omega]
        if omega in in_progress:
            return None
        if _is_axiom_set(omega, m):
            d = SFDerivation("axiom", omega)
            memo[omega] = d
            return d
        in_progress.add(omega)
        result: Optional[SFDerivation] = None
        for sf in candidates(omega):
            f = sf.formula
            if isinstance(f, (Neg, Box)):
                conn = "neg" if isinstance(f, Neg) else "box"
                args: tuple[Formula, ...] = (f.child,)
            else:
                conn = "and" if isinstance(f, And) else "or"
                args = (f.left, f.right)
            for signs in tuples_for.get((conn, sf.sign), ()):
                premises = [omega | {SignedFormula(s, a)}
                            for s, a in zip(signs, args)]
                if any(p == omega for p in premises):
                    continue
                subs = []
                for p in premises:
                    sub = search(p)
                    if sub is None:
                        break
                    subs.append(sub)
                else:
                    result = SFDerivation(f"{conn}_{'_'.join(signs)}", omega, tuple(subs))
                    break
            if result is not None:
                break
        in_progress.discard(omega)
        memo[omega] = result
        return result

    return search(goal_set)


# ---------------------------------------------------------------------------
# JSON format

def derivation_to_json(d: SFDerivation) -> dict:
    signed = sorted(d.signed, key=lambda sf: (sf.sign, formula_key(sf.formula)))
    return {
        "signed": [str(sf) for sf in signed],
        "rule": d.rule,
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(doc: dict) -> SFDerivation:
    return SFDerivation(
        rule=doc["rule"],
        signed=frozenset(parse_signed(s) for s in doc["signed"]),
        premises=tuple(derivation_from_json(p) for p in doc.get("premises", [])),
    )


def render_sf_derivation(d: SFDerivation, indent: int = 0) -> str:
    signed = ", ".join(str(sf) for sf in
                       sorted(d.signed, key=lambda sf: (sf.sign, formula_key(sf.formula))))
    lines = [render_sf_derivation(p, indent + 1) for p in d.premises]
    lines.append(f"{'    ' * indent}{{{signed}}}   [{d.rule}]")
    return "\n".join(lines)
