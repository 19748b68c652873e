import pytest

from egaljudge import Domain, Judgment, Profile, max_eq, max_ham
from egaljudge.axioms import (
    COUNTEREXAMPLE,
    HOLDS,
    check_axiom,
    check_equity,
    check_majoritarian,
    check_maximin,
    check_pigou_dalton,
    check_sen_hammond,
    find_pigou_dalton_violation,
    find_sen_hammond_violation,
    iter_profiles,
    reverify,
)
from egaljudge.errors import BudgetExceededError, ValidationError
from egaljudge.rules import MAXEQ_RULE, MAXHAM_RULE, MAXEQ_LEX_RULE, table_rule

from conftest import PROP3_STRINGS


def J(s):
    return Judgment.from_string(s)


class TestMaximin:
    def test_maxham_holds(self, prop1_domain):
        report = check_maximin(MAXHAM_RULE, prop1_domain, 3)
        assert report.holds

    def test_maxeq_fails_on_incompatibility_domain(self, prop1_domain):
        report = check_maximin(MAXEQ_RULE, prop1_domain, 2)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, MAXEQ_RULE, prop1_domain)

    def test_paper_profile_is_a_violation(self, prop1_domain):
        # the proof's own profile: the equity winner is not a maximin winner
        profile = Profile.from_bitstrings(["110000", "001100"])
        assert not max_eq(prop1_domain, profile).as_set() <= max_ham(prop1_domain, profile).as_set()

    def test_constant_table_rule_fails(self):
        domain = Domain.from_bitstrings(["00", "11"])
        entries = {}
        for prof_idx in iter_profiles(2, 2, min_agents=1):
            key = tuple(domain.judgments[i] for i in prof_idx)
            entries[key] = (J("00"),)
        rule = table_rule(entries)
        report = check_maximin(rule, domain, 2)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, rule, domain)


class TestEquity:
    def test_maxeq_holds(self, prop1_domain):
        assert check_equity(MAXEQ_RULE, prop1_domain, 3).holds

    def test_maxham_fails(self, prop1_domain):
        report = check_equity(MAXHAM_RULE, prop1_domain, 2)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, MAXHAM_RULE, prop1_domain)

    def test_refinement_inherits_equity(self):
        domain = Domain.free(3)
        assert check_equity(MAXEQ_LEX_RULE, domain, 3).holds


class TestMajoritarian:
    def test_maxham_fails_free_two_issues(self):
        report = check_majoritarian(MAXHAM_RULE, Domain.free(2), 3)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, MAXHAM_RULE, Domain.free(2))

    def test_maxeq_fails_free_two_issues(self):
        report = check_majoritarian(MAXEQ_RULE, Domain.free(2), 3)
        assert report.verdict == COUNTEREXAMPLE

    def test_majority_table_rule_holds(self):
        from egaljudge.core import majority_judgment

        domain = Domain.from_bitstrings(["0", "1"])
        entries = {}
        for prof_idx in iter_profiles(2, 3, min_agents=1):
            profile = Profile([domain.judgments[i] for i in prof_idx])
            maj = majority_judgment(profile)
            key = tuple(profile.judgments)
            entries[key] = (maj,) if maj in domain else tuple(domain.judgments)
        rule = table_rule(entries)
        assert check_majoritarian(rule, domain, 3).holds


class TestSenHammond:
    def test_maxham_holds_small(self):
        assert check_sen_hammond(MAXHAM_RULE, Domain.free(3), 3).holds

    def test_maxeq_holds_small(self):
        assert check_sen_hammond(MAXEQ_RULE, Domain.free(3), 3).holds

    def test_crafted_table_violation(self):
        # profile (000, 111) with candidates 000 and 100: distances run
        # 0 < 1 < 2 < 3, no third agent, and the rule keeps 000 but drops 100.
        domain = Domain.from_bitstrings(["000", "100", "111"])
        entries = {}
        for prof_idx in iter_profiles(3, 2, min_agents=1):
            key = tuple(domain.judgments[i] for i in prof_idx)
            entries[key] = (J("000"),)
        rule = table_rule(entries)
        report = check_sen_hammond(rule, domain, 2)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, rule, domain)
        direct = find_sen_hammond_violation(
            rule, domain, Profile.from_bitstrings(["000", "111"])
        )
        assert direct is not None
        assert [str(j) for j in direct.judgments] == ["000", "100"]


class TestPigouDalton:
    def test_maxham_fails_on_transfer_fixture(self, prop3_domain, prop3_profile):
        report = check_pigou_dalton(MAXHAM_RULE, prop3_domain, 3)
        assert report.verdict == COUNTEREXAMPLE
        assert reverify(report, MAXHAM_RULE, prop3_domain)

    def test_transfer_fixture_profile_directly(self, prop3_domain, prop3_profile):
        witness = find_pigou_dalton_violation(MAXHAM_RULE, prop3_domain, prop3_profile)
        assert witness is not None
        assert {str(j) for j in witness.judgments} == {PROP3_STRINGS["J"], PROP3_STRINGS["J'"]}
        assert reverify_pd(witness, prop3_domain)

    def test_maxeq_holds_small(self):
        assert check_pigou_dalton(MAXEQ_RULE, Domain.free(3), 3).holds

    def test_vacuous_when_no_configuration_qualifies(self):
        # one issue: the required distance chain needs a gap of two
        domain = Domain.free(1)
        entries = {}
        for prof_idx in iter_profiles(2, 2, min_agents=1):
            key = tuple(domain.judgments[i] for i in prof_idx)
            entries[key] = tuple(domain.judgments)
        assert check_pigou_dalton(table_rule(entries), domain, 2).holds


def reverify_pd(witness, domain):
    from egaljudge.axioms import AxiomReport, PIGOU_DALTON

    report = AxiomReport(PIGOU_DALTON, "maxham", COUNTEREXAMPLE, "", witness)
    return reverify(report, MAXHAM_RULE, domain)


class TestScanMachinery:
    def test_multiset_matches_ordered_for_anonymous_rules(self):
        domain = Domain.from_bitstrings(["00", "01", "11"])
        for checker in (check_maximin, check_equity, check_majoritarian):
            for rule in (MAXHAM_RULE, MAXEQ_RULE):
                multi = checker(rule, domain, 2)
                ordered = checker(rule, domain, 2, ordered=True)
                assert multi.verdict == ordered.verdict

    def test_budget_exceeded(self):
        domain = Domain.free(4)
        with pytest.raises(BudgetExceededError):
            check_maximin(MAXHAM_RULE, domain, 3, budget=10)

    def test_unknown_axiom_name(self):
        with pytest.raises(ValidationError):
            check_axiom("fairness", MAXHAM_RULE, Domain.free(1))

    def test_nmax_one_scans_single_agent_profiles(self, prop1_domain):
        report = check_maximin(MAXEQ_RULE, prop1_domain, 1)
        # a lone agent makes every candidate equidistant, so the equity rule
        # returns the whole domain and already violates maximin
        assert report.verdict == COUNTEREXAMPLE

    def test_report_string_mentions_search_space(self, prop1_domain):
        report = check_maximin(MAXHAM_RULE, prop1_domain, 2)
        assert "|d|=4" in report.searched and "n=2..2" in report.searched
