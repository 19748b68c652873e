"""Strategic manipulation: finders for single scenarios and exhaustive
rule-level checks for strategyproofness, participation, and antipodal
strategyproofness.

A manipulation exists when the outcome after the move is strictly preferred
to the truthful outcome under the selected set extension.  Untruthful
reports range over the admissible domain only.

Under the decisive extension the strict set preference can be reciprocated
(both directions hold at once).  Existence checks count any strict
preference as a finding; the single-scenario finder, which must pick one
candidate to report, prefers the first (canonical order) whose improvement
is *not* reciprocated and falls back to the first reciprocated one.  A
non-reciprocated move is the stronger certificate of gain; reciprocated
ones only arise from the decisive extension's symmetry quirk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .axioms import (
    COUNTEREXAMPLE,
    HOLDS,
    AxiomReport,
    Witness,
    _check_budget,
    _searched,
    iter_profiles,
)
from .core import Domain, Judgment, Outcome, Profile, antipodal, remove_agent
from .errors import ValidationError
from .preferences import DECISIVE, EXTENSION_KINDS, decisive_witness, set_prefers
from .rules import IndexedDomain, IndexedRule, RuleSpec, apply_rule

GENERAL = "general"
NO_SHOW = "no-show"
ANTIPODAL = "antipodal"
FINDING_KINDS = (GENERAL, NO_SHOW, ANTIPODAL)

STRATEGYPROOFNESS = "strategyproofness"
PARTICIPATION = "participation"
ANTIPODAL_SP = "antipodal-sp"
CHECK_KINDS = (STRATEGYPROOFNESS, PARTICIPATION, ANTIPODAL_SP)

_CHECK_TO_FINDING = {
    STRATEGYPROOFNESS: GENERAL,
    PARTICIPATION: NO_SHOW,
    ANTIPODAL_SP: ANTIPODAL,
}


class _Inapplicable:
    """Antipodal manipulation is undefined: the flipped judgment is
    inadmissible.  Distinct from "no manipulation found"."""

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "INAPPLICABLE"

    def __bool__(self) -> bool:
        return False


INAPPLICABLE = _Inapplicable()


@dataclass(frozen=True)
class ManipulationFinding:
    kind: str
    extension: str
    manipulator: int
    untruthful: Optional[Judgment]  # absent for no-show
    before: Outcome
    after: Outcome
    witness: Optional[tuple[Judgment, Judgment]] = None  # decisive certificate

    def __str__(self) -> str:
        move = "abstains" if self.untruthful is None else f"reports {self.untruthful}"
        text = (
            f"{self.kind} manipulation ({self.extension}): agent {self.manipulator} "
            f"{move}, outcome {self.before} -> {self.after}"
        )
        if self.witness is not None:
            text += f" [pair {self.witness[0]} over {self.witness[1]}]"
        return text


def _validate(ext: str, d: Domain, p: Profile, i: int) -> Judgment:
    if ext not in EXTENSION_KINDS:
        raise ValidationError(f"unknown extension kind {ext!r}")
    p._check_index(i)
    missing = [j for j in p if j not in d]
    if missing:
        raise ValidationError(f"profile members outside the domain: {[str(j) for j in missing]}")
    return p.agent(i)


def _finding(
    kind: str, ext: str, i: int, untruthful: Optional[Judgment], truth: Judgment,
    before: Outcome, after: Outcome,
) -> ManipulationFinding:
    witness = decisive_witness(truth, after, before) if ext == DECISIVE else None
    return ManipulationFinding(kind, ext, i, untruthful, before, after, witness)


def find_manipulation(
    rule: RuleSpec, ext: str, d: Domain, p: Profile, i: int
) -> Optional[ManipulationFinding]:
    """First successful misreport for agent ``i``, scanning the domain in
    canonical order; reciprocated decisive improvements are reported only
    when no non-reciprocated one exists (module docstring)."""
    truth = _validate(ext, d, p, i)
    before = apply_rule(rule, d, p)
    fallback = None
    for j in d.judgments:
        if j == truth:
            continue
        after = apply_rule(rule, d, p.replace(i, j))
        if not set_prefers(ext, truth, after, before):
            continue
        found = _finding(GENERAL, ext, i, j, truth, before, after)
        if not set_prefers(ext, truth, before, after):
            return found
        if fallback is None:
            fallback = found
    return fallback


def find_manipulation_all(
    rule: RuleSpec, ext: str, d: Domain, p: Profile, i: int
) -> list[ManipulationFinding]:
    """Every successful misreport for agent ``i``, canonical order."""
    truth = _validate(ext, d, p, i)
    before = apply_rule(rule, d, p)
    findings = []
    for j in d.judgments:
        if j == truth:
            continue
        after = apply_rule(rule, d, p.replace(i, j))
        if set_prefers(ext, truth, after, before):
            findings.append(_finding(GENERAL, ext, i, j, truth, before, after))
    return findings


def find_noshow(
    rule: RuleSpec, ext: str, d: Domain, p: Profile, i: int
) -> Optional[ManipulationFinding]:
    """Whether agent ``i`` gains by abstaining (needs n >= 2)."""
    truth = _validate(ext, d, p, i)
    if p.n < 2:
        raise ValidationError("no-show needs at least two agents")
    before = apply_rule(rule, d, p)
    after = apply_rule(rule, d, remove_agent(p, i))
    if set_prefers(ext, truth, after, before):
        return _finding(NO_SHOW, ext, i, None, truth, before, after)
    return None


def find_antipodal(
    rule: RuleSpec, ext: str, d: Domain, p: Profile, i: int
):
    """Whether agent ``i`` gains by reporting the bit-flipped judgment.

    Returns a finding, None, or :data:`INAPPLICABLE` when the flipped
    judgment is not admissible.
    """
    truth = _validate(ext, d, p, i)
    flipped = antipodal(truth)
    if flipped not in d:
        return INAPPLICABLE
    before = apply_rule(rule, d, p)
    after = apply_rule(rule, d, p.replace(i, flipped))
    if set_prefers(ext, truth, after, before):
        return _finding(ANTIPODAL, ext, i, flipped, truth, before, after)
    return None


def verify_finding(
    finding: ManipulationFinding, rule: RuleSpec, d: Domain, p: Profile
) -> bool:
    """Recompute both outcomes from scratch and re-evaluate the preference."""
    truth = p.agent(finding.manipulator)
    before = apply_rule(rule, d, p)
    if finding.kind == NO_SHOW:
        after = apply_rule(rule, d, remove_agent(p, finding.manipulator))
    else:
        after = apply_rule(rule, d, p.replace(finding.manipulator, finding.untruthful))
    return (
        before == finding.before
        and after == finding.after
        and set_prefers(finding.extension, truth, after, before)
    )


# ---------------------------------------------------------------------------
# exhaustive rule-level checks
# ---------------------------------------------------------------------------

def _set_prefers_idx(
    kind: str, dist_row: np.ndarray, x: tuple[int, ...], y: tuple[int, ...]
) -> bool:
    if kind == "pessimistic":
        return any(all(dist_row[a] < dist_row[b] for a in x) for b in y)
    if kind == "optimistic":
        return any(all(dist_row[a] < dist_row[b] for b in y) for a in x)
    common = set(x) & set(y)
    return any(
        dist_row[a] < dist_row[b] and not {a, b} <= common for a in x for b in y
    )


def _antipode_indices(d: Domain) -> np.ndarray:
    """antipode_idx[i] = index of the flipped judgment, or -1 if inadmissible."""
    mask = np.uint64((1 << d.m) - 1)
    flipped = d.words ^ mask
    pos = np.searchsorted(d.words, flipped)
    out = np.full(len(d), -1, dtype=np.int64)
    in_range = pos < len(d)
    ok = np.zeros(len(d), dtype=bool)
    ok[in_range] = d.words[pos[in_range]] == flipped[in_range]
    out[ok] = pos[ok]
    return out


def _scan_findings(
    check_kind: str,
    rule: RuleSpec,
    ext: str,
    d: Domain,
    n_max: int,
    min_agents: int,
    ordered: bool,
    budget: int,
) -> Iterator[tuple[tuple[int, ...], int, Optional[int]]]:
    """Yield (profile indices, manipulator position 0-based, untruthful index)
    for every successful manipulation in canonical scan order."""
    finding_kind = _CHECK_TO_FINDING[check_kind]
    lo = max(min_agents, 2) if finding_kind == NO_SHOW else min_agents
    lo = min(lo, n_max)
    _check_budget(len(d), n_max, lo, ordered, budget)
    idom = IndexedDomain(d)
    irule = IndexedRule(rule, idom)
    antipode = _antipode_indices(d) if finding_kind == ANTIPODAL else None
    for prof_idx in iter_profiles(len(d), n_max, min_agents=lo, ordered=ordered):
        before = irule.outcome(prof_idx)
        seen: set[int] = set()
        for pos, truth_idx in enumerate(prof_idx):
            if not ordered:
                # anonymous rules: one representative agent per distinct judgment
                if truth_idx in seen:
                    continue
                seen.add(truth_idx)
            dist_row = idom.dist[truth_idx]
            if finding_kind == NO_SHOW:
                if len(prof_idx) < 2:
                    continue
                reduced = prof_idx[:pos] + prof_idx[pos + 1 :]
                after = irule.outcome(reduced)
                if _set_prefers_idx(ext, dist_row, after, before):
                    yield prof_idx, pos, None
            elif finding_kind == ANTIPODAL:
                flip = int(antipode[truth_idx])
                if flip < 0:
                    continue
                moved = prof_idx[:pos] + (flip,) + prof_idx[pos + 1 :]
                after = irule.outcome(moved)
                if _set_prefers_idx(ext, dist_row, after, before):
                    yield prof_idx, pos, flip
            else:
                for cand in range(len(d)):
                    if cand == truth_idx:
                        continue
                    moved = prof_idx[:pos] + (cand,) + prof_idx[pos + 1 :]
                    after = irule.outcome(moved)
                    if _set_prefers_idx(ext, dist_row, after, before):
                        yield prof_idx, pos, cand
                        break


def check_rule(
    kind: str,
    rule: RuleSpec,
    ext: str,
    d: Domain,
    n_max: int = 3,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = 1_000_000,
) -> AxiomReport:
    """Exhaustively scan profiles for the selected kind of manipulation.

    The verdict "holds" means no finding in the searched space, nothing more.
    """
    if kind not in CHECK_KINDS:
        raise ValidationError(f"unknown check kind {kind!r}")
    if ext not in EXTENSION_KINDS:
        raise ValidationError(f"unknown extension kind {ext!r}")
    searched = _searched(d, n_max, min(min_agents, n_max), ordered) + f", ext={ext}"
    for prof_idx, pos, _cand in _scan_findings(
        kind, rule, ext, d, n_max, min_agents, ordered, budget
    ):
        idom = IndexedDomain(d)
        profile = idom.profile(prof_idx)
        agent = pos + 1
        finder = {
            STRATEGYPROOFNESS: find_manipulation,
            PARTICIPATION: find_noshow,
            ANTIPODAL_SP: find_antipodal,
        }[kind]
        finding = finder(rule, ext, d, profile, agent)
        witness = Witness(
            profile=profile,
            judgments=() if finding.untruthful is None else (finding.untruthful,),
            agents=(agent,),
            note=f"{finding.kind} manipulation under {ext}",
            detail=finding,
        )
        return AxiomReport(kind, str(rule), COUNTEREXAMPLE, searched, witness)
    return AxiomReport(kind, str(rule), HOLDS, searched)


def check_part_implies_antipodal(
    rule: RuleSpec,
    d: Domain,
    n_max: int = 3,
    ext: str = DECISIVE,
    *,
    min_agents: int = 2,
    ordered: bool = False,
    budget: int = 1_000_000,
) -> AxiomReport:
    """Status of "participation implies antipodal strategyproofness" on the
    searched space: a counterexample is an antipodal finding for a rule that
    admits no no-show finding anywhere in the space."""
    participation = check_rule(
        PARTICIPATION, rule, ext, d, n_max,
        min_agents=min_agents, ordered=ordered, budget=budget,
    )
    antipodal_sp = check_rule(
        ANTIPODAL_SP, rule, ext, d, n_max,
        min_agents=min_agents, ordered=ordered, budget=budget,
    )
    searched = antipodal_sp.searched
    if participation.holds and not antipodal_sp.holds:
        return AxiomReport(
            "participation-implies-antipodal-sp",
            str(rule),
            COUNTEREXAMPLE,
            searched,
            antipodal_sp.witness,
        )
    return AxiomReport("participation-implies-antipodal-sp", str(rule), HOLDS, searched)
