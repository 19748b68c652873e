"""Answer-set-programming encodings of outcome determination and of the
search for a strategic manipulation, plus a bridge to an external solver.

The outcome program's rule block is a fixed template (see OUTCOME_RULES);
facts encode the instance.  Issues are emitted in complemented pairs
(``issue(p)`` and ``issue(neg(p))``, with coherence constraints), so the
template's single #count aggregate equals the true Hamming distance between
the collective judgment and an agent.

The manipulation program targets a meta-programming pipeline that
understands ``_criteria/3`` / ``_optimize/3`` optimization directives
(subset-minimality at level 40 keeps every candidate misreport alive,
cardinality at level 30 makes both collective outcomes optimal for their
profiles, level 10 prefers successful manipulations) and is filtered by the
final ``:- unsuccessful.`` constraint.  The body of ``successful/0`` -
strict gain for the manipulator plus the witnessing pair not being
contained in both outcome sets - is this module's own construction and is
validated by cross-checking decoded models against the native finder.
"""

from __future__ import annotations

import re
import subprocess
import tempfile
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .core import Agenda, Domain, Judgment, Profile
from .errors import SolverOutputError, ValidationError
from .rules import MAXEQ, MAXEQ_LEX, RuleSpec

OUTCOME_RULES = """dist(A,D) :- voter(A), D = #count { X : issue(X), js(col,X), js(A,-X) }.
maxdist(Max) :- Max = #max { D : dist(A,D) }.
mindist(Min) :- Min = #min { D : dist(A,D) }.
inequity(Max-Min) :- maxdist(Max), mindist(Min).
#minimize { I@30 : inequity(I) }.
"""

REFINEMENT_RULE = "#minimize { Max@20 : maxdist(Max) }.\n"

GUESS_LINE = "1 {{ js(prime({i}),X), js(prime({i}),-X) }} 1 :- issue(X).\n"


@dataclass(frozen=True)
class AspProgram:
    text: str
    facts: str
    rules: str
    notes: tuple[str, ...]

    def __str__(self) -> str:
        return self.text


_CONST_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_ASP_RESERVED = {"not"}


def _asp_const(label: str) -> str:
    if _CONST_RE.fullmatch(label) and label not in _ASP_RESERVED:
        return label
    return "x_" + re.sub(r"[^A-Za-z0-9_]", "_", label).lower()


def _issue_consts(agenda: Agenda) -> list[str]:
    consts = [_asp_const(label) for label in agenda.issues]
    if len(set(consts)) != len(consts):
        raise ValidationError(f"issue labels collide after constant mangling: {consts}")
    return consts


def _coerce(
    domain_or_agenda: Union[Domain, Agenda],
    profile: Profile,
    labels: Optional[tuple[str, ...]] = None,
) -> tuple[Agenda, Optional[Domain]]:
    """Split the polymorphic first argument into (agenda, explicit domain)."""
    if isinstance(domain_or_agenda, Agenda):
        agenda = domain_or_agenda
        if agenda.m != profile.m:
            raise ValidationError("agenda and profile disagree on the issue count")
        return agenda, None
    domain = domain_or_agenda
    if domain.m != profile.m:
        raise ValidationError("domain and profile disagree on the issue count")
    agenda = Agenda(tuple(labels) if labels else tuple(f"i{k}" for k in range(1, domain.m + 1)))
    if agenda.m != domain.m:
        raise ValidationError("issue labels and domain disagree on the issue count")
    return agenda, domain


def _facts_block(agenda: Agenda, profile: Profile, consts: list[str]) -> list[str]:
    lines = ["% agents"]
    lines += [f"voter({a})." for a in range(1, profile.n + 1)]
    lines.append("% issues, in complemented pairs")
    for c in consts:
        lines.append(f"issue({c}). issue(neg({c})). pair({c},neg({c})).")
    lines.append("% individual judgments")
    for a, judgment in enumerate(profile, start=1):
        atoms = []
        for c, bit in zip(consts, judgment.bits):
            if bit:
                atoms.append(f"js({a},{c}). js({a},-neg({c})).")
            else:
                atoms.append(f"js({a},-{c}). js({a},neg({c})).")
        lines.extend(atoms)
    return lines


def _guess_block(owner: str) -> list[str]:
    return [
        f"1 {{ js({owner},X) ; js({owner},-X) }} 1 :- issue(X).",
        f":- js({owner},P), js({owner},N), pair(P,N).",
        f":- js({owner},-P), js({owner},-N), pair(P,N).",
    ]


def _formula_nodes(formula) -> list:
    """Postorder node list, children before parents, root last."""
    from . import constraints as c

    order: list = []
    seen: dict[int, None] = {}

    def walk(node):
        key = id(node)
        if key in seen:
            return
        if isinstance(node, c.Not):
            walk(node.child)
        elif isinstance(node, (c.And, c.Or, c.Implies, c.Iff)):
            walk(node.left)
            walk(node.right)
        seen[key] = None
        order.append(node)

    walk(formula)
    return order


def _formula_rules(formula, agenda: Agenda, consts: list[str], owner: str,
                   guard: str = "") -> list[str]:
    """Admissibility of ``owner``'s guessed judgment under the constraint,
    one holds/1-style rule per formula node."""
    from . import constraints as c

    label_to_const = dict(zip(agenda.issues, consts))
    nodes = _formula_nodes(formula)
    ids = {id(node): f"f{k}" for k, node in enumerate(nodes)}
    prefix = f"{guard}, " if guard else ""
    hold = (lambda n: f"holds({owner},{ids[id(n)]})") if guard else (
        lambda n: f"holds({ids[id(n)]})"
    )
    lines = []
    for node in nodes:
        head = hold(node)
        if isinstance(node, c.Var):
            lines.append(f"{head} :- {prefix}js({owner},{label_to_const[node.label]}).")
        elif isinstance(node, c.Const):
            if node.value:
                lines.append(f"{head} :- {guard}." if guard else f"{head}.")
            # a false constant simply gets no rule
        elif isinstance(node, c.Not):
            lines.append(f"{head} :- {prefix}not {hold(node.child)}.")
        elif isinstance(node, c.And):
            lines.append(f"{head} :- {prefix}{hold(node.left)}, {hold(node.right)}.")
        elif isinstance(node, c.Or):
            lines.append(f"{head} :- {prefix}{hold(node.left)}.")
            lines.append(f"{head} :- {prefix}{hold(node.right)}.")
        elif isinstance(node, c.Implies):
            lines.append(f"{head} :- {prefix}not {hold(node.left)}.")
            lines.append(f"{head} :- {prefix}{hold(node.right)}.")
        else:  # Iff
            lines.append(f"{head} :- {prefix}{hold(node.left)}, {hold(node.right)}.")
            lines.append(
                f"{head} :- {prefix}not {hold(node.left)}, not {hold(node.right)}."
            )
    root = hold(nodes[-1])
    lines.append(f":- {prefix}not {root}." if guard else f":- not {root}.")
    return lines


def _member_rules(domain: Domain, consts: list[str], owner: str,
                  guard: str = "") -> list[str]:
    """Admissibility as a disjunction of complete judgment patterns."""
    prefix = f"{guard}, " if guard else ""
    head = f"admissible({owner})" if guard else "admissible"
    lines = []
    for judgment in domain.judgments:
        pattern = ", ".join(
            f"js({owner},{c})" if bit else f"js({owner},-{c})"
            for c, bit in zip(consts, judgment.bits)
        )
        lines.append(f"{head} :- {prefix}{pattern}.")
    lines.append(f":- {prefix}not {head}.")
    return lines


def _admissibility(agenda: Agenda, domain: Optional[Domain], consts: list[str],
                   owner: str, guard: str = "") -> list[str]:
    if domain is not None:
        return ["% admissible collective judgments (explicit domain)"] + _member_rules(
            domain, consts, owner, guard
        )
    if agenda.constraint is not None:
        return ["% admissible collective judgments (agenda constraint)"] + _formula_rules(
            agenda.constraint, agenda, consts, owner, guard
        )
    return []


def emit_outcome_program(
    domain_or_agenda: Union[Domain, Agenda],
    profile: Profile,
    rule: Union[str, RuleSpec] = MAXEQ,
    labels: Optional[tuple[str, ...]] = None,
) -> AspProgram:
    """The program whose optimal answer sets are the rule's outcomes.

    ``rule`` selects the inequity-minimizing rule or its refinement that
    additionally minimizes the maximum distance at lower priority.
    ``labels`` names the issues when the first argument is a bare Domain.
    """
    kind = rule.kind if isinstance(rule, RuleSpec) else str(rule)
    if kind not in (MAXEQ, MAXEQ_LEX):
        raise ValidationError(f"outcome programs exist for maxeq/maxeq-lex, not {kind!r}")
    agenda, domain = _coerce(domain_or_agenda, profile, labels)
    consts = _issue_consts(agenda)
    lines = _facts_block(agenda, profile, consts)
    lines.append("% collective judgment guess")
    lines += _guess_block("col")
    lines += _admissibility(agenda, domain, consts, "col")
    facts = "\n".join(lines) + "\n"
    rules_block = OUTCOME_RULES
    if kind == MAXEQ_LEX:
        rules_block += REFINEMENT_RULE
    text = facts + "% objective\n" + rules_block + "#show js/2.\n"
    notes = (
        "facts: voters, complemented issue pairs, individual judgments",
        "guess: one complete, coherent collective judgment (col)",
        "admissibility: "
        + ("explicit-domain disjunction" if domain is not None
           else "constraint evaluation" if agenda.constraint is not None
           else "free domain, none needed"),
        "objective: fixed distance/extremes/inequity template, minimized at level 30"
        + ("; maxdist refinement at level 20" if kind == MAXEQ_LEX else ""),
    )
    return AspProgram(text, facts, rules_block, notes)


def emit_manipulation_program(
    domain_or_agenda: Union[Domain, Agenda],
    profile: Profile,
    i: int,
    labels: Optional[tuple[str, ...]] = None,
) -> AspProgram:
    """The meta-format program whose surviving answer sets are exactly the
    successful misreports of agent ``i`` against the inequity-minimizing
    rule, under decisive set preferences."""
    profile._check_index(i)
    agenda, domain = _coerce(domain_or_agenda, profile, labels)
    consts = _issue_consts(agenda)
    lines = _facts_block(agenda, profile, consts)
    lines.append("% the manipulator's guessed misreport")
    lines.append(f"voter(prime({i})).")
    lines.append(GUESS_LINE.format(i=i).rstrip("\n"))
    lines.append(f":- js(prime({i}),P), js(prime({i}),N), pair(P,N).")
    lines.append(f":- js(prime({i}),-P), js(prime({i}),-N), pair(P,N).")
    lines.append(f"guessed(prime({i})).")
    lines.append("guessed(col). guessed(prime(col)).")
    lines += _admissibility(agenda, domain, consts, "O", guard="guessed(O)")
    facts = "\n".join(lines) + "\n"

    body = [
        "% candidate collective judgments for both profiles",
        "cand(col). cand(prime(col)).",
        "1 { js(C,X), js(C,-X) } 1 :- cand(C), issue(X).",
        ":- cand(C), js(C,P), js(C,N), pair(P,N).",
        ":- cand(C), js(C,-P), js(C,-N), pair(P,N).",
        "% profile membership: orig is the truthful profile, manip swaps the manipulator",
        "prof(orig). prof(manip).",
        f"pvoter(orig,A) :- voter(A), A != prime({i}).",
        f"pvoter(manip,A) :- voter(A), A != {i}.",
        "% distances and inequities of each candidate against each profile",
        "dist(C,P,A,D) :- cand(C), prof(P), pvoter(P,A), "
        "D = #count { X : issue(X), js(C,X), js(A,-X) }.",
        "maxdist(C,P,Max) :- cand(C), prof(P), Max = #max { D : dist(C,P,A,D) }.",
        "mindist(C,P,Min) :- cand(C), prof(P), Min = #min { D : dist(C,P,A,D) }.",
        "inequity(C,P,Max-Min) :- maxdist(C,P,Max), mindist(C,P,Min).",
        "% both outcomes optimal for their own profile (meta-format, value as weight)",
        "_criteria(30,V,inequity(col,orig,V)) :- inequity(col,orig,V).",
        "_criteria(30,V,inequity(prime(col),manip,V)) :- inequity(prime(col),manip,V).",
        "_optimize(30,1,card).",
        "% keep every candidate misreport alive via subset-minimality",
        f"_criteria(40,1,js(prime({i}),X)) :- js(prime({i}),X).",
        "_optimize(40,1,incl).",
        "% success: strict gain for the manipulator, witnessing pair not shared",
        f"tdist(C,D) :- cand(C), D = #count {{ X : issue(X), js(C,X), js({i},-X) }}.",
        "gain :- tdist(prime(col),DP), tdist(col,DC), DP < DC.",
        "crossed :- inequity(col,manip,V), inequity(prime(col),manip,V), "
        "inequity(col,orig,W), inequity(prime(col),orig,W).",
        "successful :- gain, not crossed.",
        ":- successful, not gain.",
        ":- successful, crossed.",
        "unsuccessful :- not successful.",
        "successful :- not unsuccessful.",
        "_criteria(10,1,unsuccessful) :- unsuccessful.",
        "_optimize(10,1,card).",
        "% only successful manipulations survive",
        ":- unsuccessful.",
    ]
    rules_block = "\n".join(body) + "\n"
    text = facts + rules_block
    notes = (
        "facts: voters, complemented issue pairs, individual judgments",
        f"guess: complete misreport for prime({i}) plus two candidate outcomes",
        "optimization: level 40 subset-minimality (keeps every misreport), "
        "level 30 outcome optimality, level 10 prefers success",
        "successful/0 body is this artifact's construction: gain = strict distance "
        "improvement for the manipulator; crossed = both candidates optimal for "
        "both profiles (the excluded shared-pair case)",
        "distance machinery is parameterized over candidate and profile "
        "(dist/4 and friends) because the success test needs cross inequities",
    )
    return AspProgram(text, facts, rules_block, notes)


# ---------------------------------------------------------------------------
# decoding solver output
# ---------------------------------------------------------------------------

_ANSWER_RE = re.compile(r"^Answer: \d+\s*$")
_OPT_RE = re.compile(r"^Optimization: (.+)$")
_JS_COL_RE = re.compile(r"js\(col,(-?)([A-Za-z][A-Za-z0-9_]*)\)")


def parse_answer_sets(solver_output: str, agenda: Agenda) -> list[Judgment]:
    """Decode js(col, .) atoms of the optimal models into judgments.

    Expects the line-oriented `Answer: k` / atoms / `OPTIMUM FOUND`
    convention; models are filtered to the best optimization vector.
    """
    if "OPTIMUM FOUND" not in solver_output:
        if "UNSATISFIABLE" in solver_output:
            return []
        raise SolverOutputError("no OPTIMUM FOUND marker in solver output")
    lines = solver_output.splitlines()
    models: list[tuple[Optional[tuple[int, ...]], str]] = []
    idx = 0
    while idx < len(lines):
        if _ANSWER_RE.match(lines[idx]):
            atoms = lines[idx + 1] if idx + 1 < len(lines) else ""
            opt: Optional[tuple[int, ...]] = None
            if idx + 2 < len(lines):
                match = _OPT_RE.match(lines[idx + 2])
                if match:
                    opt = tuple(int(v) for v in match.group(1).split())
            models.append((opt, atoms))
            idx += 2
        else:
            idx += 1
    if not models:
        raise SolverOutputError("no models in solver output")
    vectors = [opt for opt, _ in models if opt is not None]
    best = min(vectors) if vectors else None
    consts = _issue_consts(agenda)
    positions = {c: k for k, c in enumerate(consts)}
    decoded: set[Judgment] = set()
    for opt, atoms in models:
        if best is not None and opt != best:
            continue
        bits: dict[int, int] = {}
        for sign, const in _JS_COL_RE.findall(atoms):
            if const in positions:
                bits[positions[const]] = 0 if sign == "-" else 1
        if len(bits) != agenda.m:
            raise SolverOutputError(
                f"model does not fix all {agenda.m} issues: {sorted(bits)}"
            )
        decoded.add(Judgment(tuple(bits[k] for k in range(agenda.m))))
    return sorted(decoded)


def solve_program(
    solver: str,
    program: Union[AspProgram, str],
    *,
    extra_args: Iterable[str] = (),
    timeout: float = 120.0,
) -> str:
    """Run an external solver on the program, enumerating all optimal models."""
    text = program.text if isinstance(program, AspProgram) else program
    with tempfile.NamedTemporaryFile("w", suffix=".lp", delete=False) as handle:
        handle.write(text)
        path = handle.name
    cmd = [solver, path, "0", "--opt-mode=optN", "--quiet=1", *extra_args]
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=timeout, check=False
        )
    except OSError as exc:
        raise SolverOutputError(f"could not run solver {solver!r}: {exc}") from exc
    # clingo exit codes are bit flags (10 sat, 20 unsat, 30 sat+exhausted)
    if proc.returncode not in (0, 10, 20, 30):
        raise SolverOutputError(
            f"solver exited with {proc.returncode}: {proc.stderr.strip()[:500]}"
        )
    return proc.stdout
