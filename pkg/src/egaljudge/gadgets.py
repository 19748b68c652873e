"""Hardness gadget: reduce 1-in-3 satisfiability of a 3CNF formula to the
existence of an equidistant judgment over a free agenda.

Given a formula with n variables and b clauses, the construction uses
2n + 5 issues (two blocks y_1..y_n, y'_1..y'_n mirroring the variables,
plus five tag issues z_1..z_5) and a profile of 2n + 3b judgments:

* one "unit" row per variable (that variable's bit set in both blocks),
* one complement row per variable (everything but that bit, in both blocks),
* three rows per clause, encoding the clause's literal signs into the two
  blocks with three distinct z-tags.

Some judgment is equidistant to the whole profile exactly when the formula
is 1-in-3-satisfiable; the equidistant witness built from a 1-in-3
assignment sits at distance n + 1 from every row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .core import Agenda, Judgment, Profile, enumeration_cap
from .errors import CapacityError, ValidationError

Z_PATTERNS = ("00001", "00111", "11001")  # z-tags of the three clause rows


@dataclass(frozen=True)
class ThreeCnf:
    """A 3CNF formula: clauses of exactly three literals (signed 1-based
    variable indices), no clause containing complementary or repeated
    variables."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValidationError("formula needs at least one variable")
        if not self.clauses:
            raise ValidationError("formula needs at least one clause")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValidationError(f"clause {clause} must have exactly 3 literals")
            if any(lit == 0 or abs(lit) > self.num_vars for lit in clause):
                raise ValidationError(f"clause {clause} has a literal out of range")
            if len({abs(lit) for lit in clause}) != 3:
                raise ValidationError(
                    f"clause {clause} repeats a variable (complementary or duplicate literals)"
                )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_dimacs(cls, text: str) -> "ThreeCnf":
        """Parse DIMACS CNF text restricted to 3-literal clauses."""
        num_vars = None
        num_clauses = None
        literals: list[int] = []
        clauses: list[tuple[int, int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValidationError(f"line {lineno}: malformed problem line {line!r}")
                num_vars, num_clauses = int(parts[2]), int(parts[3])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    if len(literals) != 3:
                        raise ValidationError(
                            f"line {lineno}: clause {literals} does not have exactly 3 literals"
                        )
                    clauses.append(tuple(literals))
                    literals = []
                else:
                    literals.append(lit)
        if literals:
            raise ValidationError("unterminated clause (missing trailing 0)")
        if num_vars is None:
            raise ValidationError("missing 'p cnf' problem line")
        if num_clauses is not None and num_clauses != len(clauses):
            raise ValidationError(
                f"problem line declares {num_clauses} clauses, found {len(clauses)}"
            )
        return cls(num_vars, tuple(clauses))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GadgetInstance:
    """The constructed agenda (free domain) and profile, plus a per-row
    provenance label of the form unit(i) / complement(i) / clause(k,t)."""

    agenda: Agenda
    profile: Profile
    provenance: tuple[str, ...]

    @property
    def m(self) -> int:
        return self.agenda.m


def gadget_issue_labels(n: int) -> tuple[str, ...]:
    return tuple(
        [f"y{i}" for i in range(1, n + 1)]
        + [f"yp{i}" for i in range(1, n + 1)]
        + [f"z{i}" for i in range(1, 6)]
    )


def _clause_row_word(clause: tuple[int, int, int], n: int, mirrored: bool, z_tag: str) -> int:
    y = [0] * n
    yp = [0] * n
    for lit in clause:
        var = abs(lit) - 1
        positive = lit > 0
        if positive != mirrored:
            y[var] = 1
        else:
            yp[var] = 1
    bits = y + yp + [int(c) for c in z_tag]
    word = 0
    for bit in bits:
        word = (word << 1) | bit
    return word


def build_gadget(f: ThreeCnf) -> GadgetInstance:
    """Deterministically construct the judgment profile for a formula."""
    n = f.num_vars
    m = 2 * n + 5
    words: list[int] = []
    provenance: list[str] = []
    z_zero = 0
    for i in range(n):
        # unit row: y_i and y'_i set, everything else 0
        unit = (1 << (m - 1 - i)) | (1 << (m - 1 - (n + i)))
        words.append(unit | z_zero)
        provenance.append(f"unit({i + 1})")
    y_mask = ((1 << (2 * n)) - 1) << 5
    for i in range(n):
        unit = (1 << (m - 1 - i)) | (1 << (m - 1 - (n + i)))
        words.append((unit ^ y_mask) | z_zero)
        provenance.append(f"complement({i + 1})")
    for k, clause in enumerate(f.clauses, start=1):
        for t, (mirrored, z_tag) in enumerate(
            [(False, Z_PATTERNS[0]), (True, Z_PATTERNS[1]), (True, Z_PATTERNS[2])], start=1
        ):
            words.append(_clause_row_word(clause, n, mirrored, z_tag))
            provenance.append(f"clause({k},{t})")
    agenda = Agenda(gadget_issue_labels(n))
    profile = Profile(Judgment.from_word(w, m) for w in words)
    return GadgetInstance(agenda, profile, tuple(provenance))


def one_in_three_assignments(f: ThreeCnf, cap: int = 20) -> Iterator[tuple[int, ...]]:
    """All assignments satisfying exactly one literal per clause (brute force)."""
    if f.num_vars > cap:
        raise CapacityError(f"1-in-3 scan over n={f.num_vars} variables exceeds cap {cap}")
    for word in range(1 << f.num_vars):
        bits = tuple((word >> (f.num_vars - 1 - i)) & 1 for i in range(f.num_vars))
        if all(
            sum(bits[abs(lit) - 1] == (lit > 0) for lit in clause) == 1
            for clause in f.clauses
        ):
            yield bits


def one_in_three_oracle(f: ThreeCnf, cap: int = 20) -> bool:
    """Whether some assignment satisfies exactly one literal in each clause."""
    return next(one_in_three_assignments(f, cap), None) is not None


def equidistant_witness_word(assignment: tuple[int, ...], n: int) -> int:
    """The judgment built from a 1-in-3 assignment: y_i = a_i, y'_i = 1 - a_i,
    z block 00001."""
    bits = list(assignment) + [1 - a for a in assignment] + [0, 0, 0, 0, 1]
    word = 0
    for bit in bits:
        word = (word << 1) | bit
    return word


@dataclass(frozen=True)
class GadgetReport:
    formula: ThreeCnf
    one_in_three: bool
    min_inequity: int
    equidistant_exists: bool
    best_judgment: Judgment
    uniform_distance: Optional[int]  # distance of the assignment witness, when satisfiable


class GadgetVerificationError(ValidationError):
    """A property the construction guarantees failed to hold."""


def verify_gadget(f: ThreeCnf, *, precondition_two: bool = False,
                  cap: Optional[int] = None) -> GadgetReport:
    """Scan the full hypercube against the gadget profile.

    Checks that an equidistant judgment exists iff the formula is 1-in-3
    satisfiable; with ``precondition_two`` (caller vouches for the
    admissible-partial-assignment precondition) additionally checks that the
    minimum inequity of an unsatisfiable instance is exactly 2.
    """
    instance = build_gadget(f)
    m = instance.m
    limit = enumeration_cap(cap)
    if m > limit:
        raise CapacityError(f"gadget scan over m={m} issues exceeds cap {limit}")
    cands = np.arange(1 << m, dtype=np.uint64)
    mx, mn = kernels.extremes_against(cands, instance.profile.words)
    ineq = mx - mn
    best = int(ineq.argmin())
    min_inequity = int(ineq[best])
    sat = one_in_three_oracle(f)
    equidistant = min_inequity == 0
    if equidistant != sat:
        raise GadgetVerificationError(
            f"equidistant-judgment existence ({equidistant}) disagrees with the "
            f"1-in-3 oracle ({sat}) on {f}"
        )
    uniform = None
    if sat:
        assignment = next(one_in_three_assignments(f))
        witness_word = equidistant_witness_word(assignment, f.num_vars)
        dists = kernels.popcounts(instance.profile.words ^ np.uint64(witness_word))
        lo, hi = int(dists.min()), int(dists.max())
        if lo != hi:
            raise GadgetVerificationError("assignment witness is not equidistant")
        uniform = lo
    if precondition_two and not sat and min_inequity != 2:
        raise GadgetVerificationError(
            f"minimum inequity is {min_inequity}, expected 2 for an unsatisfiable "
            "instance meeting the partial-assignment precondition"
        )
    return GadgetReport(
        formula=f,
        one_in_three=sat,
        min_inequity=min_inequity,
        equidistant_exists=equidistant,
        best_judgment=Judgment.from_word(best, m),
        uniform_distance=uniform,
    )
