"""
Named real Lie algebras of dimension at most five.

Records hold the commutation relations in the basis ``e1..en`` (or
``Q1..Qn``), the parameters of a family with their admissible range and a
generic value inside that range.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from lieheat.algebra.structure import StructureConstants


@dataclass(frozen=True)
class AlgebraRecord:
    """
    Entry of the registry.

    Attributes
    ----------
    name : str
        Canonical label, e.g. ``A_{3.9}``.
    dim : int
        Dimension.
    relations : str
        Nonzero brackets.
    params : tuple of str
        Parameter names.
    constraint : str
        Admissible range, human readable.
    generic : dict
        Parameter values inside the range used for checks.
    aliases : tuple of str
        Other names of the same algebra.
    description : str
        Short description.
    """

    name: str
    dim: int
    relations: str
    params: tuple = ()
    constraint: str = ""
    generic: dict = field(default_factory=dict)
    aliases: tuple = ()
    description: str = ""

    def structure(self) -> StructureConstants:
        return StructureConstants.from_relations(self.dim, self.relations, self.params)

    def instance(self, **values) -> StructureConstants:
        chosen = {**self.generic, **values}
        return self.structure().subs({k: sp.Rational(Fraction(str(v))) for k, v in chosen.items()})


_RECORDS = [
    AlgebraRecord("A_1", 1, "", description="one-dimensional"),
    AlgebraRecord("A_{2.1}", 2, "", aliases=("2A_1",), description="abelian"),
    AlgebraRecord("A_{2.2}", 2, "[e1, e2] = e2", description="non-abelian"),
    AlgebraRecord("A_{3.1}", 3, "", aliases=("3A_1",), description="abelian"),
    AlgebraRecord("A_{3.2}", 3, "[e1, e2] = e2", aliases=("A_{2.2}+A_1",)),
    AlgebraRecord(
        "A_{3.3}",
        3,
        "[e1, e3] = -2*e2; [e1, e2] = e1; [e2, e3] = e3",
        aliases=("sl(2,R)",),
        description="sl(2,R)",
    ),
    AlgebraRecord(
        "A_{3.4}",
        3,
        "[e1, e2] = e3; [e2, e3] = e1; [e3, e1] = e2",
        aliases=("so(3)",),
        description="so(3)",
    ),
    AlgebraRecord("A_{3.5}", 3, "[e2, e3] = e1", description="Heisenberg"),
    AlgebraRecord("A_{3.6}", 3, "[e1, e3] = e1; [e2, e3] = e1 + e2"),
    AlgebraRecord("A_{3.7}", 3, "[e1, e3] = e1; [e2, e3] = e2"),
    AlgebraRecord("A_{3.8}", 3, "[e1, e3] = e1; [e2, e3] = -e2"),
    AlgebraRecord(
        "A_{3.9}",
        3,
        "[e1, e3] = e1; [e2, e3] = q*e2",
        ("q",),
        "0 < |q| < 1",
        {"q": "1/3"},
    ),
    AlgebraRecord("A_{3.10}", 3, "[e1, e3] = -e2; [e2, e3] = e1"),
    AlgebraRecord(
        "A_{3.11}",
        3,
        "[e1, e3] = q*e1 - e2; [e2, e3] = e1 + q*e2",
        ("q",),
        "q > 0",
        {"q": "1/2"},
    ),
    AlgebraRecord("A_{4.1}", 4, "[e2, e4] = e1; [e3, e4] = e2"),
    AlgebraRecord(
        "A_{4.2}",
        4,
        "[e1, e4] = q*e1; [e2, e4] = e2; [e3, e4] = e2 + e3",
        ("q",),
        "q != 0",
        {"q": "2"},
    ),
    AlgebraRecord("A_{4.3}", 4, "[e1, e4] = e1; [e3, e4] = e2"),
    AlgebraRecord("A_{4.4}", 4, "[e1, e4] = e1; [e2, e4] = e1 + e2; [e3, e4] = e2 + e3"),
    AlgebraRecord(
        "A_{4.5}",
        4,
        "[e1, e4] = e1; [e2, e4] = q*e2; [e3, e4] = p*e3",
        ("q", "p"),
        "-1 <= p <= q <= 1, p*q != 0",
        {"q": "1/2", "p": "-1/3"},
    ),
    AlgebraRecord(
        "A_{4.6}",
        4,
        "[e1, e4] = q*e1; [e2, e4] = p*e2 - e3; [e3, e4] = e2 + p*e3",
        ("q", "p"),
        "q != 0, p >= 0",
        {"q": "2", "p": "1/3"},
    ),
    AlgebraRecord("A_{4.7}", 4, "[e2, e3] = e1; [e1, e4] = 2*e1; [e2, e4] = e2; [e3, e4] = e2 + e3"),
    AlgebraRecord(
        "A_{4.8}",
        4,
        "[e2, e3] = e1; [e1, e4] = (1 + q)*e1; [e2, e4] = e2; [e3, e4] = q*e3",
        ("q",),
        "|q| <= 1",
        {"q": "1/3"},
    ),
    AlgebraRecord(
        "A_{4.9}",
        4,
        "[e2, e3] = e1; [e1, e4] = 2*q*e1; [e2, e4] = q*e2 - e3; [e3, e4] = e2 + q*e3",
        ("q",),
        "q >= 0",
        {"q": "1/2"},
    ),
    AlgebraRecord(
        "A_{4.10}",
        4,
        "[e1, e3] = e1; [e2, e3] = e2; [e1, e4] = -e2; [e2, e4] = e1",
    ),
    AlgebraRecord(
        "L1",
        5,
        "[e1, e4] = e1; [e3, e4] = b*e3; [e2, e5] = e2; [e3, e5] = c*e3",
        ("b", "c"),
        "b^2 + c^2 != 0",
        {"b": "1/2", "c": "1/3"},
    ),
    AlgebraRecord(
        "L2",
        5,
        "[e1, e4] = a*e1; [e2, e4] = e2; [e3, e4] = e3; [e1, e5] = e1; [e3, e5] = e2",
        ("a",),
        "",
        {"a": "1/2"},
    ),
    AlgebraRecord(
        "L3",
        5,
        "[e1, e4] = a*e1; [e2, e4] = e2; [e3, e4] = e3; [e1, e5] = d*e1; [e2, e5] = -e3; [e3, e5] = e2",
        ("a", "d"),
        "a^2 + d^2 != 0",
        {"a": "1/2", "d": "1/3"},
    ),
    AlgebraRecord(
        "L4",
        5,
        "[e2, e3] = e1; [e1, e4] = e1; [e2, e4] = e2; [e2, e5] = -e2; [e3, e5] = e3",
    ),
    AlgebraRecord(
        "L5",
        5,
        "[e2, e3] = e1; [e1, e4] = 2*e1; [e2, e4] = e2; [e3, e4] = e3; [e2, e5] = -e3; [e3, e5] = e2",
    ),
    AlgebraRecord("L6", 5, "[e1, e4] = e1; [e2, e5] = e2; [e4, e5] = e3"),
    AlgebraRecord(
        "L7",
        5,
        "[e1, e4] = e1; [e2, e4] = e2; [e1, e5] = -e2; [e2, e5] = e1; [e4, e5] = e3",
    ),
]

REGISTRY = {record.name: record for record in _RECORDS}
ALIASES = {alias: record.name for record in _RECORDS for alias in record.aliases}
ALIASES.update({"2A_{2.2}": "A_{2.2}+A_{2.2}", "4A_1": "A_{3.1}+A_1", "A_{2.2}+2A_1": "A_{3.2}+A_1", "5A_1": "A_{3.1}+2A_1"})


def canonical_name(name: str) -> str:
    """Canonical form of a label, resolving aliases such as ``3A_1``."""
    name = name.replace(" ", "").replace("⊕", "+")
    parts = name.split("+")
    if len(parts) > 1:
        parts = [ALIASES.get(p, p) for p in parts]
        name = "+".join(parts)
    return ALIASES.get(name, name)


def lookup(name: str) -> AlgebraRecord:
    return REGISTRY[canonical_name(name)]


def records(dim: int | None = None) -> list:
    return [r for r in _RECORDS if dim is None or r.dim == dim]
