"""Instance files: the JSON surface for agendas, domains, and profiles.

Schema::

    {
      "issues":     ["p", "q", "r"],          # required, unique labels
      "constraint": "r <-> (p & q)",          # optional
      "domain":     ["000", "010", ...],      # optional, explicit bitstrings
      "profile":    ["111", "010"]            # optional (required by most commands)
    }

At most one of ``constraint`` / ``domain`` may be present; neither means the
free domain over the issues.  Profile members must be admissible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .constraints import enumerate_domain, parse_formula
from .core import Agenda, Domain, Profile
from .errors import EgalJudgeError, InstanceError


@dataclass(frozen=True)
class Instance:
    agenda: Agenda
    domain: Domain
    profile: Optional[Profile]
    explicit_domain: bool

    @property
    def domain_or_agenda(self):
        """What the ASP emitters should see: the explicit domain when one was
        listed, otherwise the agenda (whose constraint, if any, travels)."""
        return self.domain if self.explicit_domain else self.agenda

    def require_profile(self) -> Profile:
        if self.profile is None:
            raise InstanceError("this command needs a 'profile' in the instance file")
        return self.profile


def _string_list(data: dict, key: str) -> Optional[list[str]]:
    value = data.get(key)
    if value is None:
        return None
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InstanceError(f"'{key}' must be a list of strings")
    return value


def load_instance_text(text: str, *, cap: Optional[int] = None) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceError("instance file must be a JSON object")
    unknown = set(data) - {"issues", "constraint", "domain", "profile"}
    if unknown:
        raise InstanceError(f"unknown fields: {sorted(unknown)}")
    issues = _string_list(data, "issues")
    if not issues:
        raise InstanceError("'issues' is required and must be nonempty")
    constraint_text = data.get("constraint")
    domain_strings = _string_list(data, "domain")
    if constraint_text is not None and domain_strings is not None:
        raise InstanceError("'constraint' and 'domain' are mutually exclusive")

    try:
        if constraint_text is not None:
            if not isinstance(constraint_text, str):
                raise InstanceError("'constraint' must be a string")
            agenda = Agenda(tuple(issues), parse_formula(constraint_text))
        else:
            agenda = Agenda(tuple(issues))
    except EgalJudgeError as exc:
        raise InstanceError(f"bad agenda: {exc}") from exc

    try:
        if domain_strings is not None:
            domain = Domain.from_bitstrings(domain_strings)
            if domain.m != agenda.m:
                raise InstanceError(
                    f"domain bitstrings have length {domain.m}, agenda has {agenda.m} issues"
                )
        else:
            domain = enumerate_domain(agenda, cap=cap)
    except InstanceError:
        raise
    except EgalJudgeError as exc:
        raise InstanceError(f"bad domain: {exc}") from exc

    profile = None
    profile_strings = _string_list(data, "profile")
    if profile_strings:
        try:
            profile = Profile.from_bitstrings(profile_strings)
        except EgalJudgeError as exc:
            raise InstanceError(f"bad profile: {exc}") from exc
        if profile.m != agenda.m:
            raise InstanceError(
                f"profile bitstrings have length {profile.m}, agenda has {agenda.m} issues"
            )
        outside = [str(j) for j in profile if j not in domain]
        if outside:
            raise InstanceError(f"profile members outside the domain: {outside}")
    return Instance(agenda, domain, profile, explicit_domain=domain_strings is not None)


def load_instance(path: str, *, cap: Optional[int] = None) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc
    return load_instance_text(text, cap=cap)


def instance_json(
    issues: tuple[str, ...],
    profile: Profile,
    *,
    constraint: Optional[str] = None,
    domain: Optional[Domain] = None,
) -> str:
    """Serialize an instance back to the JSON surface form."""
    data: dict = {"issues": list(issues)}
    if constraint is not None:
        data["constraint"] = constraint
    if domain is not None:
        data["domain"] = [str(j) for j in domain.judgments]
    data["profile"] = [str(j) for j in profile]
    return json.dumps(data, indent=2) + "\n"


def gadget_instance_json(gadget) -> str:
    """The standard instance file for a built gadget (free domain)."""
    return instance_json(gadget.agenda.issues, gadget.profile)
