"""Exhaustive desk-scale checkers for five rule properties.

Every checker enumerates profiles over a given domain up to a size bound and
looks for a violation of the property's defining condition.  A "holds"
verdict is therefore always qualified by the searched space: these are
refuters, not provers.  Counterexample witnesses carry enough data to
re-verify the violated inequality from scratch (see :func:`reverify`).

Profiles are enumerated as multisets by default (all rules in scope are
anonymous); ordered enumeration is available behind a flag.  Fresh profiles
start at two agents, matching the aggregation model; single-agent profiles
are only meaningful as the residue of an abstention.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product
from math import comb
from typing import Iterator, Optional

import numpy as np

from .core import Domain, Judgment, Profile, hamming, majority_judgment
from .errors import BudgetExceededError, ValidationError
from .rules import IndexedDomain, IndexedRule, RuleSpec, apply_rule

HOLDS = "holds-on-searched-space"
COUNTEREXAMPLE = "counterexample"

MAXIMIN = "maximin"
EQUITY = "equity"
MAJORITARIAN = "majoritarian"
SEN_HAMMOND = "sen-hammond"
PIGOU_DALTON = "pigou-dalton"
AXIOM_NAMES = (MAXIMIN, EQUITY, MAJORITARIAN, SEN_HAMMOND, PIGOU_DALTON)

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class Witness:
    """Everything needed to re-verify a violation independently."""

    profile: Profile
    judgments: tuple[Judgment, ...]
    agents: tuple[int, ...]
    note: str = ""
    detail: object = None


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    rule: str
    verdict: str
    searched: str
    witness: Optional[Witness] = None

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def __str__(self) -> str:
        head = f"{self.axiom} for {self.rule}: {self.verdict} [{self.searched}]"
        if self.witness is None:
            return head
        w = self.witness
        parts = [f"profile={w.profile}"]
        if w.judgments:
            parts.append("judgments=" + ",".join(str(j) for j in w.judgments))
        if w.agents:
            parts.append(f"agents={w.agents}")
        if w.note:
            parts.append(w.note)
        return head + " " + " ".join(parts)


def iter_profiles(
    k: int, n_max: int, *, min_agents: int = 2, ordered: bool = False
) -> Iterator[tuple[int, ...]]:
    """Index tuples of all profiles over a k-element domain, n ascending."""
    for n in range(min_agents, n_max + 1):
        source = product(range(k), repeat=n) if ordered else combinations_with_replacement(range(k), n)
        yield from source


def _profile_count(k: int, n_max: int, min_agents: int, ordered: bool) -> int:
    if ordered:
        return sum(k**n for n in range(min_agents, n_max + 1))
    return sum(comb(k + n - 1, n) for n in range(min_agents, n_max + 1))


def _check_budget(k: int, n_max: int, min_agents: int, ordered: bool, budget: int) -> int:
    if n_max < 1:
        raise ValidationError(f"n_max must be at least 1, got {n_max}")
    profiles = _profile_count(k, n_max, min_agents, ordered)
    work = profiles * k * k
    if work > budget:
        raise BudgetExceededError(
            f"scan of {profiles} profiles over |d|={k} needs ~{work} tuples, budget {budget}"
        )
    return profiles


def _searched(domain: Domain, n_max: int, min_agents: int, ordered: bool) -> str:
    mode = "ordered" if ordered else "multisets"
    return f"|d|={len(domain)}, m={domain.m}, n={min_agents}..{n_max}, {mode}"


def _scan(
    axiom: str,
    rule: RuleSpec,
    domain: Domain,
    n_max: int,
    min_agents: int,
    ordered: bool,
    budget: int,
    profile_check,
) -> AxiomReport:
    min_agents = min(min_agents, n_max)
    _check_budget(len(domain), n_max, min_agents, ordered, budget)
    idom = IndexedDomain(domain)
    irule = IndexedRule(rule, idom)
    searched = _searched(domain, n_max, min_agents, ordered)
    for prof_idx in iter_profiles(len(domain), n_max, min_agents=min_agents, ordered=ordered):
        witness = profile_check(idom, irule, prof_idx)
        if witness is not None:
            return AxiomReport(axiom, str(rule), COUNTEREXAMPLE, searched, witness)
    return AxiomReport(axiom, str(rule), HOLDS, searched)


# ---------------------------------------------------------------------------
# maximin / equity: F(Pf) must stay inside the respective argmin set
# ---------------------------------------------------------------------------

def _maximin_profile(idom: IndexedDomain, irule: IndexedRule, prof_idx) -> Optional[Witness]:
    outcome = irule.outcome(prof_idx)
    best = set(idom.maxham_idx(prof_idx))
    stray = [i for i in outcome if i not in best]
    if not stray:
        return None
    j_idx = stray[0]
    rival = min(best)
    col = idom.dist[j_idx, list(prof_idx)]
    worst_agent = int(np.argmax(col)) + 1
    return Witness(
        profile=idom.profile(prof_idx),
        judgments=(idom.judgment(j_idx), idom.judgment(rival)),
        agents=(worst_agent,),
        note="selected judgment, then a rival strictly closer to every agent",
    )


def _equity_profile(idom: IndexedDomain, irule: IndexedRule, prof_idx) -> Optional[Witness]:
    outcome = irule.outcome(prof_idx)
    best = set(idom.maxeq_idx(prof_idx))
    stray = [i for i in outcome if i not in best]
    if not stray:
        return None
    j_idx = stray[0]
    rival = min(best)
    col = idom.dist[j_idx, list(prof_idx)]
    hi = int(np.argmax(col)) + 1
    lo = int(np.argmin(col)) + 1
    return Witness(
        profile=idom.profile(prof_idx),
        judgments=(idom.judgment(j_idx), idom.judgment(rival)),
        agents=(hi, lo),
        note="selected judgment, then a rival with strictly smaller inequity",
    )


def check_maximin(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """No selected judgment may leave some agent strictly worse than a rival
    judgment leaves every agent: equivalently F(Pf) must be a subset of the
    maxdist argmin."""
    return _scan(MAXIMIN, rule, d, n_max, min_agents, ordered, budget, _maximin_profile)


def check_equity(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """F(Pf) must be a subset of the inequity argmin."""
    return _scan(EQUITY, rule, d, n_max, min_agents, ordered, budget, _equity_profile)


# ---------------------------------------------------------------------------
# majoritarian
# ---------------------------------------------------------------------------

def check_majoritarian(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """Whenever the strict-majority judgment is admissible, the rule must
    return exactly it."""

    def profile_check(idom, irule, prof_idx):
        profile = idom.profile(prof_idx)
        maj = majority_judgment(profile)
        if maj not in idom.domain:
            return None
        maj_idx = idom.domain.index_of(maj)
        outcome = irule.outcome(prof_idx)
        if outcome == (maj_idx,):
            return None
        return Witness(
            profile=profile,
            judgments=(maj,) + tuple(idom.judgment(i) for i in outcome),
            agents=(),
            note="majority judgment, then the outcome actually returned",
        )

    return _scan(MAJORITARIAN, rule, d, n_max, min_agents, ordered, budget, profile_check)


# ---------------------------------------------------------------------------
# Sen-Hammond equity and Pigou-Dalton transfers
# ---------------------------------------------------------------------------

def _others_equidistant(cols: np.ndarray, skip: tuple[int, int]) -> np.ndarray:
    """(k, k) mask: candidates a, b at equal distance from every agent not in skip."""
    k, n = cols.shape
    others = [p for p in range(n) if p not in skip]
    if not others:
        return np.ones((k, k), dtype=bool)
    sub = cols[:, others]
    return (sub[:, None, :] == sub[None, :, :]).all(axis=2)


def _first_true(mask: np.ndarray) -> Optional[tuple[int, int]]:
    flat = np.flatnonzero(mask)
    if flat.size == 0:
        return None
    a, b = divmod(int(flat[0]), mask.shape[1])
    return a, b


def _sen_hammond_profile(idom: IndexedDomain, irule: IndexedRule, prof_idx) -> Optional[Witness]:
    cols = idom.dist[:, list(prof_idx)]
    outcome = irule.outcome(prof_idx)
    in_f = np.zeros(len(idom.domain), dtype=bool)
    in_f[list(outcome)] = True
    n = len(prof_idx)
    for ip, jp in permutations(range(n), 2):
        di = cols[:, ip]
        dj = cols[:, jp]
        cond = (
            (di[:, None] < di[None, :])
            & (di[None, :] < dj[None, :])
            & (dj[None, :] < dj[:, None])
        )
        cond &= _others_equidistant(cols, (ip, jp))
        viol = cond & in_f[:, None] & ~in_f[None, :]
        hit = _first_true(viol)
        if hit is not None:
            a, b = hit
            return Witness(
                profile=idom.profile(prof_idx),
                judgments=(idom.judgment(a), idom.judgment(b)),
                agents=(ip + 1, jp + 1),
                note="first judgment selected, second (mandated) one is not",
            )
    return None


def _pigou_dalton_profile(idom: IndexedDomain, irule: IndexedRule, prof_idx) -> Optional[Witness]:
    cols = idom.dist[:, list(prof_idx)]
    outcome = irule.outcome(prof_idx)
    in_f = np.zeros(len(idom.domain), dtype=bool)
    in_f[list(outcome)] = True
    n = len(prof_idx)
    for ip, jp in permutations(range(n), 2):
        di = cols[:, ip]
        dj = cols[:, jp]
        # a plays the more equal judgment, b the more polarised one; the
        # transfer must be of equal size: what i loses, j gains.
        cond = (
            (di[:, None] < di[None, :])
            & (di[None, :] <= dj[None, :])
            & (dj[None, :] < dj[:, None])
            & ((di[None, :] - di[:, None]) == (dj[:, None] - dj[None, :]))
        )
        cond &= _others_equidistant(cols, (ip, jp))
        viol = cond & in_f[:, None] & in_f[None, :]
        hit = _first_true(viol)
        if hit is not None:
            a, b = hit
            return Witness(
                profile=idom.profile(prof_idx),
                judgments=(idom.judgment(a), idom.judgment(b)),
                agents=(ip + 1, jp + 1),
                note="both the polarised and the more equal judgment are selected",
            )
    return None


def check_sen_hammond(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """If J' sits strictly between two agents' distances to J (others
    indifferent between the two), selecting J forces selecting J'."""
    return _scan(SEN_HAMMOND, rule, d, n_max, min_agents, ordered, budget, _sen_hammond_profile)


def check_pigou_dalton(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """An equal-size transfer of distance from a worse-off to a better-off
    agent must never leave the more polarised judgment selected alongside
    the more equal one."""
    return _scan(PIGOU_DALTON, rule, d, n_max, min_agents, ordered, budget, _pigou_dalton_profile)


CHECKERS = {
    MAXIMIN: check_maximin,
    EQUITY: check_equity,
    MAJORITARIAN: check_majoritarian,
    SEN_HAMMOND: check_sen_hammond,
    PIGOU_DALTON: check_pigou_dalton,
}


def check_axiom(axiom: str, rule: RuleSpec, d: Domain, n_max: int = 3, **kwargs) -> AxiomReport:
    try:
        checker = CHECKERS[axiom]
    except KeyError:
        raise ValidationError(f"unknown axiom {axiom!r}") from None
    return checker(rule, d, n_max, **kwargs)


# ---------------------------------------------------------------------------
# independent re-verification of counterexample witnesses
# ---------------------------------------------------------------------------

def reverify(report: AxiomReport, rule: RuleSpec, d: Domain) -> bool:
    """Re-evaluate the violated condition from scratch, without the scan
    machinery.  Returns True when the witness indeed violates the axiom."""
    if report.witness is None:
        return False
    w = report.witness
    profile = w.profile
    outcome = apply_rule(rule, d, profile)
    if report.axiom == MAXIMIN:
        selected, rival = w.judgments
        (worst,) = w.agents
        return (
            selected in outcome
            and all(
                hamming(agent_j, rival) < hamming(profile.agent(worst), selected)
                for agent_j in profile
            )
        )
    if report.axiom == EQUITY:
        selected, rival = w.judgments
        hi, lo = w.agents
        gap = abs(hamming(profile.agent(hi), selected) - hamming(profile.agent(lo), selected))
        rival_gap = max(
            abs(hamming(a, rival) - hamming(b, rival)) for a in profile for b in profile
        )
        return selected in outcome and rival_gap < gap
    if report.axiom == MAJORITARIAN:
        maj = w.judgments[0]
        return (
            majority_judgment(profile) == maj
            and maj in d
            and outcome.as_set() != frozenset({maj})
        )
    if report.axiom == SEN_HAMMOND:
        a, b = w.judgments
        i, j = w.agents
        ji = profile.agent(i)
        jj = profile.agent(j)
        chain = hamming(ji, a) < hamming(ji, b) < hamming(jj, b) < hamming(jj, a)
        others = all(
            hamming(profile.agent(p), a) == hamming(profile.agent(p), b)
            for p in range(1, profile.n + 1)
            if p not in (i, j)
        )
        return chain and others and a in outcome and b not in outcome
    if report.axiom == PIGOU_DALTON:
        a, b = w.judgments
        i, j = w.agents
        ji = profile.agent(i)
        jj = profile.agent(j)
        chain = hamming(ji, a) < hamming(ji, b) <= hamming(jj, b) < hamming(jj, a)
        transfer = hamming(ji, b) - hamming(ji, a) == hamming(jj, a) - hamming(jj, b)
        others = all(
            hamming(profile.agent(p), a) == hamming(profile.agent(p), b)
            for p in range(1, profile.n + 1)
            if p not in (i, j)
        )
        return chain and transfer and others and a in outcome and b in outcome
    raise ValidationError(f"unknown axiom {report.axiom!r}")


def find_sen_hammond_violation(rule: RuleSpec, d: Domain, p: Profile) -> Optional[Witness]:
    """Scan a single profile for a Sen-Hammond violation (canonical first)."""
    idom = IndexedDomain(d)
    prof_idx = tuple(d.index_of(j) for j in p)
    return _sen_hammond_profile(idom, IndexedRule(rule, idom), prof_idx)


def find_pigou_dalton_violation(rule: RuleSpec, d: Domain, p: Profile) -> Optional[Witness]:
    """Scan a single profile for a Pigou-Dalton violation (canonical first)."""
    idom = IndexedDomain(d)
    prof_idx = tuple(d.index_of(j) for j in p)
    return _pigou_dalton_profile(idom, IndexedRule(rule, idom), prof_idx)
