import random

import numpy as np
import pytest

from egaljudge import Domain, Judgment, Profile, exists_equidistant, hamming
from egaljudge.errors import CapacityError, ValidationError
from egaljudge.gadgets import (
    GadgetVerificationError,
    ThreeCnf,
    build_gadget,
    equidistant_witness_word,
    gadget_issue_labels,
    one_in_three_assignments,
    one_in_three_oracle,
    verify_gadget,
)


def bits(j: Judgment) -> str:
    return str(j)


class TestThreeCnf:
    def test_rejects_short_clause(self):
        with pytest.raises(ValidationError):
            ThreeCnf(3, ((1, 2),))

    def test_rejects_complementary_literals(self):
        with pytest.raises(ValidationError):
            ThreeCnf(2, ((1, -1, 2),))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            ThreeCnf(2, ((1, 2, 3),))

    def test_dimacs_round_trip(self):
        f = ThreeCnf(4, ((1, -2, 3), (-1, 2, 4)))
        again = ThreeCnf.from_dimacs(f.to_dimacs())
        assert again == f

    def test_dimacs_with_comments_and_multiline_clauses(self):
        text = "c comment\np cnf 3 1\n1 2\n3 0\n"
        assert ThreeCnf.from_dimacs(text) == ThreeCnf(3, ((1, 2, 3),))

    def test_dimacs_errors(self):
        with pytest.raises(ValidationError):
            ThreeCnf.from_dimacs("1 2 3 0\n")  # missing header
        with pytest.raises(ValidationError):
            ThreeCnf.from_dimacs("p cnf 3 1\n1 2 0\n")  # two-literal clause
        with pytest.raises(ValidationError):
            ThreeCnf.from_dimacs("p cnf 3 2\n1 2 3 0\n")  # clause count mismatch


class TestBuildGadget:
    def test_issue_labels_and_sizes(self):
        f = ThreeCnf(3, ((1, 2, 3), (-1, 2, 3)))
        inst = build_gadget(f)
        assert inst.m == 2 * 3 + 5
        assert inst.profile.n == 2 * 3 + 3 * 2
        assert inst.agenda.issues == gadget_issue_labels(3)
        assert inst.agenda.constraint is None

    def test_unit_rows(self):
        f = ThreeCnf(3, ((1, 2, 3),))
        inst = build_gadget(f)
        assert bits(inst.profile.agent(1)) == "100" + "100" + "00000"
        assert bits(inst.profile.agent(2)) == "010" + "010" + "00000"
        assert inst.provenance[0] == "unit(1)"

    def test_complement_rows(self):
        f = ThreeCnf(3, ((1, 2, 3),))
        inst = build_gadget(f)
        assert bits(inst.profile.agent(4)) == "011" + "011" + "00000"
        assert inst.provenance[3] == "complement(1)"

    def test_clause_rows_match_sign_encoding(self):
        f = ThreeCnf(3, ((1, -2, 3),))
        inst = build_gadget(f)
        rows = {p: bits(j) for p, j in zip(inst.provenance, inst.profile)}
        assert rows["clause(1,1)"] == "101" + "010" + "00001"
        assert rows["clause(1,2)"] == "010" + "101" + "00111"
        assert rows["clause(1,3)"] == "010" + "101" + "11001"

    def test_nonoccurring_variable_zeroed(self):
        f = ThreeCnf(4, ((1, -2, 3),))
        inst = build_gadget(f)
        rows = {p: bits(j) for p, j in zip(inst.provenance, inst.profile)}
        assert rows["clause(1,1)"] == "1010" + "0100" + "00001"

    def test_deterministic(self):
        f = ThreeCnf(3, ((1, -2, 3), (-1, 2, -3)))
        a = build_gadget(f)
        b = build_gadget(f)
        assert [str(j) for j in a.profile] == [str(j) for j in b.profile]
        assert a.provenance == b.provenance


class TestOneInThree:
    def test_single_clause_satisfiable(self):
        assert one_in_three_oracle(ThreeCnf(3, ((1, 2, 3),)))

    def test_pair_of_clauses_decided_by_scan(self):
        f = ThreeCnf(3, ((1, 2, 3), (-1, 2, 3)))
        expected = any(
            all(
                sum((word >> (3 - abs(lit))) & 1 == (lit > 0) for lit in clause) == 1
                for clause in f.clauses
            )
            for word in range(8)
        )
        assert one_in_three_oracle(f) == expected
        assert expected is False  # flipping x1's sign breaks every exactly-one pattern

    def test_selector_pair_forces_tail_false(self):
        # clauses (s0 | s1 | t) and (!s0 | !s1 | t): the only way to satisfy
        # exactly one literal in both is one of s0/s1 true and t false
        f = ThreeCnf(3, ((1, 2, 3), (-1, -2, 3)))
        sols = list(one_in_three_assignments(f))
        assert sols and all(a[2] == 0 for a in sols)
        assert {a[:2] for a in sols} == {(0, 1), (1, 0)}

    def test_capacity(self):
        f = ThreeCnf(21, ((1, 2, 3),))
        with pytest.raises(CapacityError):
            one_in_three_oracle(f)


UNSAT_WITH_PRECONDITION = ThreeCnf(3, ((1, 2, 3), (1, -2, 3)))
# not 1-in-3 satisfiable; setting a = c = 0 satisfies no literal in either
# clause while both clauses contain the pivot variable b


class TestVerifyGadget:
    def test_satisfiable_instance(self):
        report = verify_gadget(ThreeCnf(3, ((1, 2, 3),)))
        assert report.one_in_three and report.equidistant_exists
        assert report.min_inequity == 0
        assert report.uniform_distance == 3 + 1

    def test_unsatisfiable_instance_bound(self):
        report = verify_gadget(UNSAT_WITH_PRECONDITION, precondition_two=True)
        assert not report.one_in_three
        assert report.min_inequity == 2

    def test_biconditional_random(self):
        rng = random.Random(42)
        seen_sat = seen_unsat = 0
        for _ in range(25):
            n = rng.randint(3, 4)
            b = rng.randint(1, 3)
            clauses = []
            for _ in range(b):
                variables = rng.sample(range(1, n + 1), 3)
                clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
            f = ThreeCnf(n, tuple(clauses))
            report = verify_gadget(f)
            assert report.equidistant_exists == report.one_in_three
            assert report.min_inequity % 2 == 0  # all profile rows have even weight
            if report.one_in_three:
                seen_sat += 1
                assert report.uniform_distance == n + 1
            else:
                seen_unsat += 1
        assert seen_sat and seen_unsat

    def test_equidistant_matches_rules_module(self):
        f = ThreeCnf(3, ((1, 2, 3), (-1, -2, 3)))
        inst = build_gadget(f)
        domain = Domain.free(inst.m)
        assert exists_equidistant(domain, inst.profile) == one_in_three_oracle(f)

    def test_assignment_witness_uniform(self):
        f = ThreeCnf(4, ((1, 2, 3), (2, 3, 4)))
        if not one_in_three_oracle(f):
            pytest.skip("fixture drifted")
        inst = build_gadget(f)
        assignment = next(one_in_three_assignments(f))
        witness = Judgment.from_word(equidistant_witness_word(assignment, 4), inst.m)
        distances = {hamming(witness, row) for row in inst.profile}
        assert distances == {4 + 1}

    def test_both_or_neither_block_bits_break_uniformity(self):
        # any judgment taking both y_1 and y'_1 (or neither) is at distances
        # differing by >= 2 from two of the unit/complement rows; exhaustive
        # over the whole hypercube at n = 3, the smallest well-formed size
        # (a clause needs three distinct variables, and at n = 2 the
        # complement rows collapse onto the unit rows)
        n = 3
        inst = build_gadget(ThreeCnf(n, ((1, 2, 3),)))
        rows = [int(w) for w in inst.profile.words[: 2 * n]]
        for word in range(1 << inst.m):
            j = Judgment.from_word(word, inst.m)
            if j.bits[0] == j.bits[n]:
                ds = sorted(_distances(word, rows))
                assert ds[-1] - ds[0] >= 2, str(j)


def _distances(word, rows):
    return [(int(word) ^ int(r)).bit_count() for r in rows]


class TestCapacity:
    def test_scan_capacity(self):
        f = ThreeCnf(8, ((1, 2, 3),))
        with pytest.raises(CapacityError):
            verify_gadget(f)  # 2n + 5 = 21 > default cap 20
