"""whydb: causes, contingency sets and responsibilities for boolean
conjunctive query answers over relational instances, via database repairs.

The library also emits the equivalent repair/causality answer-set programs
as text for external cross-validation, and ships a brute-force oracle used
as ground truth by the test suite.
"""

from ._version import __version__
from .asp import (
    AspDialect,
    AspProgram,
    CausalityOptions,
    emit_causality_program,
    emit_repair_program,
)
from .causality import (
    CauseReport,
    DiffSet,
    actual_causes,
    causes_under_ics,
    contingency_sets,
    counterfactual_causes,
    dif_c,
    dif_s,
    most_responsible_causes,
    responsibility,
)
from .core import Fact, Instance, dump_instance, load_instance, tuple_by_tid
from .errors import (
    ArityMismatchError,
    EmitError,
    IrreparableError,
    OpenQueryError,
    OracleGuardError,
    ParseError,
    PreconditionError,
    SafetyError,
    UnknownTidError,
    WhydbError,
)
from .oracle import (
    OracleRepair,
    brute_causes,
    brute_causes_from_repairs,
    brute_repairs,
    brute_responsibility,
)
from .query import (
    CQ,
    DC,
    FD,
    Atom,
    ConstraintSet,
    UCQ,
    Var,
    ViolationEdge,
    answers,
    eval_bcq,
    fd_to_dc,
    negate_query,
    parse_constraints,
    parse_query,
    violations,
)
from .repair import (
    Repair,
    ReferentialConstraint,
    c_repairs,
    classify_subset,
    parse_hard_constraints,
    s_repairs,
    satisfies_hard,
)

__all__ = [
    "__version__",
    "Atom",
    "AspDialect",
    "AspProgram",
    "ArityMismatchError",
    "CQ",
    "CauseReport",
    "CausalityOptions",
    "ConstraintSet",
    "DC",
    "DiffSet",
    "EmitError",
    "FD",
    "Fact",
    "Instance",
    "IrreparableError",
    "OpenQueryError",
    "OracleGuardError",
    "OracleRepair",
    "ParseError",
    "PreconditionError",
    "Repair",
    "ReferentialConstraint",
    "SafetyError",
    "UCQ",
    "UnknownTidError",
    "Var",
    "ViolationEdge",
    "WhydbError",
    "actual_causes",
    "answers",
    "brute_causes",
    "brute_causes_from_repairs",
    "brute_repairs",
    "brute_responsibility",
    "c_repairs",
    "causes_under_ics",
    "classify_subset",
    "contingency_sets",
    "counterfactual_causes",
    "dif_c",
    "dif_s",
    "dump_instance",
    "emit_causality_program",
    "emit_repair_program",
    "eval_bcq",
    "fd_to_dc",
    "load_instance",
    "most_responsible_causes",
    "negate_query",
    "parse_constraints",
    "parse_hard_constraints",
    "parse_query",
    "responsibility",
    "s_repairs",
    "satisfies_hard",
    "tuple_by_tid",
    "violations",
]
