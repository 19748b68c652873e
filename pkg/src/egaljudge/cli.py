"""Batch command-line front end.

Commands: outcome, axiom, manipulate, emit-asp, gadget.
Exit codes: 0 = clean / holds / nothing found, 1 = counterexample or finding,
2 = usage or input error.  The environment variable EGAL_ENUM_CAP overrides
the default enumeration cap (m <= 20).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import asp, axioms, gadgets, manipulation
from .errors import EgalJudgeError
from .instances import gadget_instance_json, load_instance
from .preferences import DECISIVE, EXTENSION_KINDS
from .rules import (
    MAXEQ_LEX_RULE,
    MAXEQ_RULE,
    MAXHAM_RULE,
    RuleSpec,
    apply_rule,
    score_breakdown,
)

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_ERROR = 2

_RULES = {"maxham": MAXHAM_RULE, "maxeq": MAXEQ_RULE, "maxeq-lex": MAXEQ_LEX_RULE}


def _rule(name: str) -> RuleSpec:
    return _RULES[name]


def _emit(payload: dict, as_json: bool, text_lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_outcome(args) -> int:
    instance = load_instance(args.instance)
    profile = instance.require_profile()
    rule = _rule(args.rule)
    outcome = apply_rule(rule, instance.domain, profile)
    lines = [str(j) for j in outcome]
    payload = {"rule": args.rule, "outcome": lines}
    if args.breakdown:
        rows = score_breakdown(instance.domain, profile)
        payload["breakdown"] = [
            {
                "judgment": str(r.judgment),
                "distances": list(r.distances),
                "maxdist": r.maxdist,
                "mindist": r.mindist,
                "inequity": r.inequity,
            }
            for r in rows
        ]
        width = instance.domain.m
        lines.append(f"{'candidate':>{max(width, 9)}}  distances  max min ineq  winner")
        for r in rows:
            mark = "*" if r.judgment in outcome else ""
            lines.append(
                f"{str(r.judgment):>{max(width, 9)}}  {','.join(map(str, r.distances))}"
                f"  {r.maxdist:>3} {r.mindist:>3} {r.inequity:>4}  {mark}"
            )
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_axiom(args) -> int:
    instance = load_instance(args.instance)
    rule = _rule(args.rule)
    report = axioms.check_axiom(args.axiom, rule, instance.domain, n_max=args.n_max)
    payload = {
        "axiom": report.axiom,
        "rule": report.rule,
        "verdict": report.verdict,
        "searched": report.searched,
    }
    if report.witness is not None:
        w = report.witness
        payload["witness"] = {
            "profile": [str(j) for j in w.profile],
            "judgments": [str(j) for j in w.judgments],
            "agents": list(w.agents),
            "note": w.note,
        }
    _emit(payload, args.json, [str(report)])
    return EXIT_OK if report.holds else EXIT_FINDING


def cmd_manipulate(args) -> int:
    instance = load_instance(args.instance)
    profile = instance.require_profile()
    rule = _rule(args.rule)
    if not 1 <= args.agent <= profile.n:
        raise EgalJudgeError(
            f"--agent {args.agent} out of range for a {profile.n}-agent profile"
        )
    if args.kind == "general":
        if args.all:
            findings = manipulation.find_manipulation_all(
                rule, args.extension, instance.domain, profile, args.agent
            )
        else:
            found = manipulation.find_manipulation(
                rule, args.extension, instance.domain, profile, args.agent
            )
            findings = [found] if found else []
    elif args.kind == "no-show":
        found = manipulation.find_noshow(
            rule, args.extension, instance.domain, profile, args.agent
        )
        findings = [found] if found else []
    else:
        found = manipulation.find_antipodal(
            rule, args.extension, instance.domain, profile, args.agent
        )
        if found is manipulation.INAPPLICABLE:
            _emit(
                {"kind": args.kind, "result": "inapplicable"},
                args.json,
                ["inapplicable: the flipped judgment is not admissible"],
            )
            return EXIT_OK
        findings = [found] if found else []
    if not findings:
        _emit({"kind": args.kind, "result": "none"}, args.json, ["no manipulation found"])
        return EXIT_OK
    payload = {
        "kind": args.kind,
        "result": "finding",
        "findings": [
            {
                "manipulator": f.manipulator,
                "extension": f.extension,
                "untruthful": None if f.untruthful is None else str(f.untruthful),
                "before": [str(j) for j in f.before],
                "after": [str(j) for j in f.after],
                "witness": None if f.witness is None else [str(f.witness[0]), str(f.witness[1])],
            }
            for f in findings
        ],
    }
    _emit(payload, args.json, [str(f) for f in findings])
    return EXIT_FINDING


def cmd_emit_asp(args) -> int:
    instance = load_instance(args.instance)
    profile = instance.require_profile()
    labels = instance.agenda.issues
    if args.manipulate:
        if args.rule is not None:
            raise EgalJudgeError(
                "--manipulate targets the inequity-minimizing rule; it conflicts with --rule"
            )
        if not 1 <= args.agent <= profile.n:
            raise EgalJudgeError(
                f"--agent {args.agent} out of range for a {profile.n}-agent profile"
            )
        program = asp.emit_manipulation_program(
            instance.domain_or_agenda, profile, args.agent, labels=labels
        )
    else:
        program = asp.emit_outcome_program(
            instance.domain_or_agenda, profile, args.rule or "maxeq", labels=labels
        )
    if args.solver:
        if args.manipulate:
            raise EgalJudgeError(
                "--solver cross-checks the outcome program only (the manipulation "
                "program targets a meta pipeline)"
            )
        output = asp.solve_program(args.solver, program)
        decoded = asp.parse_answer_sets(output, instance.agenda)
        native = apply_rule(_rule(args.rule or "maxeq"), instance.domain, profile)
        match = set(decoded) == native.as_set()
        _emit(
            {
                "decoded": [str(j) for j in decoded],
                "native": [str(j) for j in native],
                "match": match,
            },
            args.json,
            [
                "decoded: " + " ".join(str(j) for j in decoded),
                "native:  " + " ".join(str(j) for j in native),
                "match" if match else "MISMATCH",
            ],
        )
        return EXIT_OK if match else EXIT_FINDING
    sys.stdout.write(program.text)
    return EXIT_OK


def cmd_gadget(args) -> int:
    try:
        with open(args.cnf, "r", encoding="utf-8") as handle:
            formula = gadgets.ThreeCnf.from_dimacs(handle.read())
    except OSError as exc:
        raise EgalJudgeError(f"cannot read {args.cnf}: {exc}") from exc
    instance = gadgets.build_gadget(formula)
    if args.verify:
        report = gadgets.verify_gadget(formula)
        payload = {
            "variables": formula.num_vars,
            "clauses": formula.num_clauses,
            "issues": instance.m,
            "profile_rows": instance.profile.n,
            "one_in_three_satisfiable": report.one_in_three,
            "min_inequity": report.min_inequity,
            "equidistant_judgment_exists": report.equidistant_exists,
            "best_judgment": str(report.best_judgment),
            "uniform_distance": report.uniform_distance,
        }
        _emit(
            payload,
            args.json,
            [
                f"gadget: {instance.m} issues, {instance.profile.n} profile rows",
                f"1-in-3 satisfiable: {report.one_in_three}",
                f"min inequity over the full hypercube: {report.min_inequity}",
                f"best judgment: {report.best_judgment}",
            ]
            + (
                [f"assignment witness sits at uniform distance {report.uniform_distance}"]
                if report.uniform_distance is not None
                else []
            ),
        )
        return EXIT_OK
    sys.stdout.write(gadget_instance_json(instance))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egaljudge",
        description="Exact egalitarian judgment aggregation engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    outcome = sub.add_parser("outcome", help="compute a rule's outcome on an instance")
    outcome.add_argument("instance")
    outcome.add_argument("--rule", choices=sorted(_RULES), default="maxeq")
    outcome.add_argument("--breakdown", action="store_true",
                         help="print per-candidate distances and objectives")
    outcome.add_argument("--json", action="store_true")
    outcome.set_defaults(func=cmd_outcome)

    axiom = sub.add_parser("axiom", help="exhaustively check an axiom over the domain")
    axiom.add_argument("instance")
    axiom.add_argument("--axiom", choices=axioms.AXIOM_NAMES, required=True)
    axiom.add_argument("--rule", choices=sorted(_RULES), default="maxeq")
    axiom.add_argument("--n-max", type=int, default=3, dest="n_max")
    axiom.add_argument("--json", action="store_true")
    axiom.set_defaults(func=cmd_axiom)

    manip = sub.add_parser("manipulate", help="search for a strategic manipulation")
    manip.add_argument("instance")
    manip.add_argument("--kind", choices=manipulation.FINDING_KINDS, default="general")
    manip.add_argument("--agent", type=int, required=True)
    manip.add_argument("--extension", choices=EXTENSION_KINDS, default=DECISIVE)
    manip.add_argument("--rule", choices=sorted(_RULES), default="maxeq")
    manip.add_argument("--all", action="store_true",
                       help="list every finding instead of the first")
    manip.add_argument("--json", action="store_true")
    manip.set_defaults(func=cmd_manipulate)

    emit = sub.add_parser("emit-asp", help="emit the ASP encoding of an instance")
    emit.add_argument("instance")
    emit.add_argument("--rule", choices=["maxeq", "maxeq-lex"], default=None)
    emit.add_argument("--manipulate", action="store_true",
                      help="emit the manipulation-search scaffold instead")
    emit.add_argument("--agent", type=int, default=1,
                      help="manipulator for --manipulate (default 1)")
    emit.add_argument("--solver", metavar="PATH",
                      help="run this solver and cross-check against the native rule")
    emit.add_argument("--json", action="store_true")
    emit.set_defaults(func=cmd_emit_asp)

    gadget = sub.add_parser("gadget", help="build the hardness gadget from a 3CNF file")
    gadget.add_argument("cnf")
    gadget.add_argument("--verify", action="store_true",
                        help="scan the hypercube and report the minimum inequity")
    gadget.add_argument("--json", action="store_true")
    gadget.set_defaults(func=cmd_gadget)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize the success path
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except EgalJudgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
