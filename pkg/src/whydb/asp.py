"""Emit repair and causality logic programs as solver-ready text.

Nothing here is executed: the emitted programs document the repair/causality
encoding and allow external cross-validation with an ASP solver. Every tuple
becomes a fact whose first argument is its tid, and each predicate P gets a
nickname predicate p_x carrying one extra trailing annotation argument, `d`
for "delete" and `s` for "stays".

Dialects: `core_disjunctive` uses disjunctive heads (`|`), `core_normalized`
rewrites each disjunction into one rule per disjunct with the other
disjuncts negated in the body, and `extended` targets DLV/DLV-Complex
(`v` disjunction, set built-ins, count aggregate, legacy weak constraints).
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from ._version import __version__
from .core import Instance
from .errors import EmitError
from .query import DC, ConstraintSet, UCQ, Var, negate_query
from .repair import HardConstraint, ReferentialConstraint


class AspDialect(enum.Enum):
    CORE_DISJUNCTIVE = "core_disjunctive"
    CORE_NORMALIZED = "core_normalized"
    EXTENDED = "extended"


@dataclass(frozen=True)
class CausalityOptions:
    cause_rules: bool = True
    contingency_union: bool = False
    responsibility_rules: bool = False
    weak_constraints: bool = False
    hard_constraints: tuple[HardConstraint, ...] = ()


@dataclass(frozen=True)
class AspProgram:
    text: str
    dialect: AspDialect
    predicate_map: Mapping[str, str]


_SAFE_CONSTANT = re.compile(r"[a-z][A-Za-z0-9_]*|\d+")
_RESERVED = ("cause", "ans", "con", "pre_rho", "rho")


def _emit_constant(value: str) -> str:
    if _SAFE_CONSTANT.fullmatch(value):
        return value
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _argument_pool(count: int, names: tuple[str, str, str]) -> list[str]:
    return [names[i] if i < 3 else f"{names[0]}{i + 1}" for i in range(count)]


def _collect_predicates(
    inst: Instance, cs: ConstraintSet, hard: Sequence[HardConstraint]
) -> dict[str, int]:
    """Predicate -> arity over everything the program mentions."""
    arities: dict[str, int] = dict(inst.arities)

    def note(name: str, arity: int) -> None:
        known = arities.get(name)
        if known is None:
            arities[name] = arity
        elif known != arity:
            raise EmitError(f"arity clash for {name}: {known} vs {arity}")

    for dc in cs.dcs:
        for atom in dc.body.atoms:
            note(atom.predicate, len(atom.terms))
    for constraint in hard:
        if isinstance(constraint, ReferentialConstraint):
            for name, positions in (
                (constraint.source, constraint.source_positions),
                (constraint.target, constraint.target_positions),
            ):
                if name not in arities:
                    raise EmitError(
                        f"unknown arity for predicate {name!r} in hard constraint"
                    )
                if max(positions) > arities[name]:
                    raise EmitError(
                        f"position {max(positions)} out of range for "
                        f"{name}/{arities[name]}"
                    )
        else:
            for atom in constraint.body.atoms:
                note(atom.predicate, len(atom.terms))
    return arities


def _name_predicates(
    arities: Mapping[str, int], *, causality: bool
) -> tuple[dict[str, str], dict[str, str]]:
    """Base and nickname names per predicate, with collision checks."""
    base = {p: p.lower() for p in arities}
    nick = {p: p.lower() + "_x" for p in arities}
    taken: dict[str, str] = {}
    for p in sorted(arities):
        for name in (base[p], nick[p]):
            if name in taken:
                raise EmitError(
                    f"predicate name collision: {p} and {taken[name]} both "
                    f"need the emitted name {name!r}"
                )
            taken[name] = p
    if causality:
        for reserved in _RESERVED:
            if reserved in taken:
                raise EmitError(
                    f"predicate {taken[reserved]} collides with the reserved "
                    f"emitted name {reserved!r}"
                )
    return base, nick


def _dc_variable_map(dc: DC) -> tuple[list[str], dict[str, str]]:
    """Tid variables per atom plus a deterministic source-var -> ASP-var map."""
    tid_vars = [f"T{i + 1}" for i in range(len(dc.body.atoms))]
    used = set(tid_vars)
    mapping: dict[str, str] = {}

    def admit(name: str) -> None:
        if name in mapping:
            return
        candidate = name[0].upper() + name[1:]
        while candidate in used:
            candidate = "V" + candidate
        mapping[name] = candidate
        used.add(candidate)

    for atom in dc.body.atoms:
        for term in atom.terms:
            if isinstance(term, Var):
                admit(term.name)
    for left, right in dc.body.inequalities:
        for term in (left, right):
            if isinstance(term, Var):
                admit(term.name)
    return tid_vars, mapping


def _term_text(term, mapping: dict[str, str]) -> str:
    if isinstance(term, Var):
        return mapping[term.name]
    return _emit_constant(term)


def _dc_rule_lines(
    dc: DC,
    label: str,
    dialect: AspDialect,
    base: Mapping[str, str],
    nick: Mapping[str, str],
    stays_seen: set[str],
) -> list[str]:
    tid_vars, mapping = _dc_variable_map(dc)
    atoms = dc.body.atoms
    body_atoms = []
    delete_atoms = []
    stays_rules = []
    for i, atom in enumerate(atoms):
        args = ",".join(_term_text(t, mapping) for t in atom.terms)
        body_atoms.append(f"{base[atom.predicate]}({tid_vars[i]},{args})")
        delete_atoms.append(f"{nick[atom.predicate]}({tid_vars[i]},{args},d)")
        stays_rules.append(
            f"{nick[atom.predicate]}({tid_vars[i]},{args},s) :- "
            f"{base[atom.predicate]}({tid_vars[i]},{args}), "
            f"not {nick[atom.predicate]}({tid_vars[i]},{args},d)."
        )
    inequalities = [
        f"{_term_text(l, mapping)} != {_term_text(r, mapping)}"
        for l, r in dc.body.inequalities
    ]
    body = ", ".join(body_atoms + inequalities)

    lines = [f"% constraint: {label}"]
    if dialect is AspDialect.CORE_NORMALIZED:
        for i in range(len(atoms)):
            negated = [f"not {delete_atoms[j]}" for j in range(len(atoms)) if j != i]
            rule_body = ", ".join([body] + negated) if negated else body
            lines.append(f"{delete_atoms[i]} :- {rule_body}.")
    else:
        joiner = " v " if dialect is AspDialect.EXTENDED else " | "
        lines.append(f"{joiner.join(delete_atoms)} :- {body}.")
    for rule in stays_rules:
        if rule not in stays_seen:
            stays_seen.add(rule)
            lines.append(rule)
    return lines


def _fact_lines(inst: Instance, base: Mapping[str, str]) -> list[str]:
    lines = []
    for fact in inst.facts:
        args = ",".join(_emit_constant(a) for a in fact.args)
        lines.append(f"{base[fact.predicate]}({fact.tid},{args}).")
    return lines


def _program_body(
    inst: Instance,
    cs: ConstraintSet,
    dialect: AspDialect,
    base: Mapping[str, str],
    nick: Mapping[str, str],
) -> list[str]:
    lines: list[str] = []
    if len(inst):
        lines.append("% facts")
        lines.extend(_fact_lines(inst, base))
    stays_seen: set[str] = set()
    for dc, label in zip(cs.dcs, cs.labels):
        lines.extend(_dc_rule_lines(dc, label, dialect, base, nick, stays_seen))
    return lines


def _header(kind: str, dialect: AspDialect) -> list[str]:
    return [
        f"% whydb {__version__} {kind} program",
        f"% dialect: {dialect.value}",
    ]


def emit_repair_program(
    inst: Instance, cs: ConstraintSet, dialect: AspDialect
) -> AspProgram:
    """The repair program: instance facts plus, per denial constraint, one
    disjunctive delete rule (or its normalized rewriting) and one stays rule
    per constraint atom."""
    arities = _collect_predicates(inst, cs, ())
    base, nick = _name_predicates(arities, causality=False)
    lines = _header("repair", dialect)
    lines.extend(_program_body(inst, cs, dialect, base, nick))
    return AspProgram("\n".join(lines) + "\n", dialect, dict(nick))


def _cause_rule_lines(cs: ConstraintSet, nick, arities) -> list[str]:
    lines = ["% cause rules"]
    seen: set[str] = set()
    for dc in cs.dcs:
        order: list[str] = []
        for atom in dc.body.atoms:
            if atom.predicate not in order:
                order.append(atom.predicate)
        for left, right in itertools.product(order, repeat=2):
            first = _argument_pool(arities[left], ("X", "Y", "Z"))
            second = _argument_pool(arities[right], ("U", "V", "W"))
            body = (
                f"{nick[left]}(T,{','.join(first)},d), "
                f"{nick[right]}(Tp,{','.join(second)},d)"
            )
            if left == right:
                body += ", T != Tp"
            rule = f"cause(T,Tp) :- {body}."
            if rule not in seen:
                seen.add(rule)
                lines.append(rule)
    return lines


def _answer_rule_lines(cs: ConstraintSet, nick, arities) -> list[str]:
    lines = ["% actual causes by tid (query under brave semantics)"]
    order: list[str] = []
    for dc in cs.dcs:
        for atom in dc.body.atoms:
            if atom.predicate not in order:
                order.append(atom.predicate)
    for predicate in order:
        args = ",".join(_argument_pool(arities[predicate], ("X", "Y", "Z")))
        lines.append(f"ans(T) :- {nick[predicate]}(T,{args},d).")
    return lines


def _contingency_lines() -> list[str]:
    return [
        "% contingency sets as set terms (needs set built-ins)",
        "con(T,{Tp}) :- cause(T,Tp).",
        "con(T,#union(C1,C2)) :- con(T,C1), con(T,C2), "
        "#member(M,C1), not #member(M,C2).",
    ]


def _responsibility_lines() -> list[str]:
    return [
        "% responsibility via counting",
        "% caveat: integer-only solvers cannot represent 1/k, so rho below has",
        "% no solution for positive counts; kept for documentation and",
        "% cross-checking, native computation stays authoritative.",
        "pre_rho(T,N) :- #count{Tp : con(T,Tp)} = N.",
        "rho(T,M) :- M * (pre_rho(T,M) + 1) = 1.",
    ]


def _hard_constraint_lines(
    hard: Sequence[HardConstraint], base, nick, arities
) -> list[str]:
    lines = ["% hard integrity constraints (filter models violating them)"]
    aux_index = 0
    for constraint in hard:
        if isinstance(constraint, ReferentialConstraint):
            aux_index += 1
            aux = "aux" if aux_index == 1 else f"aux{aux_index}"
            if aux in set(base.values()) | set(nick.values()):
                raise EmitError(
                    f"predicate collides with the reserved emitted name {aux!r}"
                )
            target_args = _argument_pool(
                arities[constraint.target], ("X", "Y", "Z")
            )
            projected = [target_args[p - 1] for p in constraint.target_positions]
            lines.append(
                f"{aux}({','.join(projected)}) :- "
                f"{nick[constraint.target]}(Tp,{','.join(target_args)},s)."
            )
            source_args = _argument_pool(
                arities[constraint.source], ("X", "Y", "Z")
            )
            held = [source_args[p - 1] for p in constraint.source_positions]
            lines.append(
                f":- {nick[constraint.source]}(T,{','.join(source_args)},s), "
                f"not {aux}({','.join(held)})."
            )
        else:
            tid_vars, mapping = _dc_variable_map(constraint)
            atoms = [
                f"{nick[a.predicate]}({tid_vars[i]},"
                f"{','.join(_term_text(t, mapping) for t in a.terms)},s)"
                for i, a in enumerate(constraint.body.atoms)
            ]
            ineqs = [
                f"{_term_text(l, mapping)} != {_term_text(r, mapping)}"
                for l, r in constraint.body.inequalities
            ]
            lines.append(f":- {', '.join(atoms + ineqs)}.")
    return lines


def _weak_constraint_lines(dialect: AspDialect, base, nick, arities) -> list[str]:
    lines = ["% weak constraints: minimize the number of deleted tuples"]
    for predicate in sorted(arities, key=lambda p: base[p]):
        args = ",".join(_argument_pool(arities[predicate], ("X", "Y", "Z")))
        body = f"{base[predicate]}(T,{args}), {nick[predicate]}(T,{args},d)"
        if dialect is AspDialect.EXTENDED:
            lines.append(f":~ {body}. [1:1]")
        else:
            lines.append(f":~ {body}. [1@1, T]")
    return lines


def emit_causality_program(
    inst: Instance,
    q: UCQ,
    dialect: AspDialect,
    opts: CausalityOptions = CausalityOptions(),
) -> AspProgram:
    """The repair program of the negated query, extended with cause rules,
    answer projection, and the optional contingency-union, responsibility,
    hard-constraint and weak-constraint blocks."""
    if opts.contingency_union and dialect is not AspDialect.EXTENDED:
        raise EmitError("the contingency union block needs the extended dialect")
    if opts.responsibility_rules:
        if dialect is not AspDialect.EXTENDED:
            raise EmitError("responsibility rules need the extended dialect")
        if not opts.contingency_union:
            raise EmitError(
                "responsibility rules build on the contingency union block"
            )
    cs = negate_query(q)
    arities = _collect_predicates(inst, cs, opts.hard_constraints)
    base, nick = _name_predicates(arities, causality=True)
    lines = _header("causality", dialect)
    lines.extend(_program_body(inst, cs, dialect, base, nick))
    if opts.cause_rules:
        lines.extend(_cause_rule_lines(cs, nick, arities))
    lines.extend(_answer_rule_lines(cs, nick, arities))
    if opts.contingency_union:
        lines.extend(_contingency_lines())
    if opts.responsibility_rules:
        lines.extend(_responsibility_lines())
    if opts.hard_constraints:
        lines.extend(
            _hard_constraint_lines(opts.hard_constraints, base, nick, arities)
        )
    if opts.weak_constraints:
        lines.extend(_weak_constraint_lines(dialect, base, nick, arities))
    return AspProgram("\n".join(lines) + "\n", dialect, dict(nick))
