import shutil
from pathlib import Path

import pytest

from egaljudge import (
    Agenda,
    Domain,
    Judgment,
    Profile,
    emit_manipulation_program,
    emit_outcome_program,
    max_eq,
    parse_answer_sets,
    parse_formula,
)
from egaljudge.asp import solve_program
from egaljudge.errors import SolverOutputError, ValidationError

GOLDEN = (Path(__file__).parent / "data" / "outcome_rules.lp").read_bytes()


def J(s):
    return Judgment.from_string(s)


@pytest.fixture
def s3_agenda():
    return Agenda(("p", "q", "r"), parse_formula("r <-> (p & q)"))


@pytest.fixture
def s3_profile():
    return Profile.from_bitstrings(["111", "010"])


class TestOutcomeProgram:
    def test_rule_block_byte_matches_golden(self, s3_agenda, s3_profile):
        program = emit_outcome_program(s3_agenda, s3_profile, "maxeq")
        assert program.rules.encode() == GOLDEN

    def test_objective_line_present(self, s3_agenda, s3_profile):
        text = emit_outcome_program(s3_agenda, s3_profile, "maxeq").text
        assert "#minimize { I@30 : inequity(I) }." in text
        assert "#minimize { Max@20 : maxdist(Max) }." not in text

    def test_refinement_appends_lower_priority_objective(self, s3_agenda, s3_profile):
        program = emit_outcome_program(s3_agenda, s3_profile, "maxeq-lex")
        assert program.rules.encode() == GOLDEN + b"#minimize { Max@20 : maxdist(Max) }.\n"

    def test_rejects_other_rules(self, s3_agenda, s3_profile):
        with pytest.raises(ValidationError):
            emit_outcome_program(s3_agenda, s3_profile, "maxham")

    def test_facts_encode_each_agent(self, s3_agenda, s3_profile):
        facts = emit_outcome_program(s3_agenda, s3_profile, "maxeq").facts
        assert "voter(1)." in facts and "voter(2)." in facts
        assert "js(1,p). js(1,-neg(p))." in facts
        assert "js(2,-p). js(2,neg(p))." in facts

    def test_constraint_becomes_admissibility_rules(self, s3_agenda, s3_profile):
        facts = emit_outcome_program(s3_agenda, s3_profile, "maxeq").facts
        assert ":- not holds(" in facts

    def test_explicit_domain_becomes_pattern_disjunction(self, prop7_domain):
        profile = Profile.from_bitstrings(["00000", "01110"])
        program = emit_outcome_program(
            prop7_domain, profile, "maxeq", labels=("a", "b", "c", "d", "e")
        )
        admissible_lines = [l for l in program.facts.splitlines() if l.startswith("admissible")]
        assert len(admissible_lines) == len(prop7_domain)
        assert ":- not admissible." in program.facts

    def test_emission_is_deterministic(self, s3_agenda, s3_profile):
        a = emit_outcome_program(s3_agenda, s3_profile, "maxeq").text
        b = emit_outcome_program(s3_agenda, s3_profile, "maxeq").text
        assert a == b

    def test_label_mangling(self):
        agenda = Agenda(("P", "not"))
        profile = Profile.from_bitstrings(["10"])
        facts = emit_outcome_program(agenda, profile, "maxeq").facts
        assert "issue(x_p)." in facts and "issue(x_not)." in facts


class TestManipulationProgram:
    def test_required_lines(self, prop4_domain):
        profile = Profile.from_bitstrings(["111000", "000000"])
        program = emit_manipulation_program(prop4_domain, profile, 1)
        text = program.text
        assert "voter(prime(1))." in text
        assert "1 { js(prime(1),X), js(prime(1),-X) } 1 :- issue(X)." in text
        assert "_optimize(40,1,incl)." in text
        assert "_criteria(40,1,js(prime(1),X)) :- js(prime(1),X)." in text
        assert "_optimize(10,1,card)." in text
        assert "unsuccessful :- not successful." in text
        assert "successful :- not unsuccessful." in text

    def test_terminal_constraint(self, prop4_domain):
        profile = Profile.from_bitstrings(["111000", "000000"])
        text = emit_manipulation_program(prop4_domain, profile, 1).text
        assert text.rstrip().endswith(":- unsuccessful.")

    def test_manipulator_index_respected(self, prop4_domain):
        profile = Profile.from_bitstrings(["111000", "000000"])
        text = emit_manipulation_program(prop4_domain, profile, 2).text
        assert "voter(prime(2))." in text
        assert "pvoter(manip,A) :- voter(A), A != 2." in text

    def test_out_of_range_manipulator(self, prop4_domain):
        profile = Profile.from_bitstrings(["111000", "000000"])
        with pytest.raises(ValidationError):
            emit_manipulation_program(prop4_domain, profile, 3)


class TestParseAnswerSets:
    AGENDA = Agenda(("p", "q"))

    def test_single_model(self):
        output = (
            "Answer: 1\n"
            "js(col,p) js(col,-q) js(col,-neg(p)) js(col,neg(q))\n"
            "Optimization: 1\n"
            "OPTIMUM FOUND\n"
        )
        assert parse_answer_sets(output, self.AGENDA) == [J("10")]

    def test_keeps_only_best_vector(self):
        output = (
            "Answer: 1\njs(col,p) js(col,q)\nOptimization: 3\n"
            "Answer: 2\njs(col,-p) js(col,q)\nOptimization: 1\n"
            "OPTIMUM FOUND\n"
        )
        assert parse_answer_sets(output, self.AGENDA) == [J("01")]

    def test_unsatisfiable_is_empty(self):
        assert parse_answer_sets("UNSATISFIABLE\n", self.AGENDA) == []

    def test_missing_optimum_marker(self):
        with pytest.raises(SolverOutputError):
            parse_answer_sets("Answer: 1\njs(col,p) js(col,q)\n", self.AGENDA)

    def test_incomplete_model_is_error(self):
        output = "Answer: 1\njs(col,p)\nOPTIMUM FOUND\n"
        with pytest.raises(SolverOutputError):
            parse_answer_sets(output, self.AGENDA)

    def test_duplicate_models_deduped(self):
        output = (
            "Answer: 1\njs(col,p) js(col,q)\n"
            "Answer: 2\njs(col,p) js(col,q)\n"
            "OPTIMUM FOUND\n"
        )
        assert parse_answer_sets(output, self.AGENDA) == [J("11")]


SOLVER = shutil.which("clingo")


@pytest.mark.skipif(SOLVER is None, reason="no ASP solver on PATH")
class TestSolverRoundTrip:
    def test_outcome_roundtrip_fixtures(self, prop7_domain):
        profile = Profile.from_bitstrings(["00000", "01110"])
        labels = tuple("abcde")
        program = emit_outcome_program(prop7_domain, profile, "maxeq", labels=labels)
        output = solve_program(SOLVER, program)
        decoded = parse_answer_sets(output, Agenda(labels))
        assert set(decoded) == max_eq(prop7_domain, profile).as_set()
