import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from egaljudge import Domain, Judgment, Outcome, Profile, kernels
from egaljudge.rules import quantity_insensitive_table


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure work, not JIT."""
    kernels.warmup()


@pytest.fixture
def prop1_domain():
    return Domain.from_bitstrings(["110000", "001100", "010000", "111111"])


@pytest.fixture
def prop1_profile():
    return Profile.from_bitstrings(["110000", "001100"])


@pytest.fixture
def prop4_domain():
    return Domain.from_bitstrings(["000000", "110000", "111000", "111111"])


@pytest.fixture
def prop7_domain():
    return Domain.from_bitstrings(["00110", "00000", "01110", "10000", "11111"])


PROP3_STRINGS = {
    "J": "00000000111",
    "J'": "00000001110",
    "J1": "00000010011",
    "J2": "00000111000",
    "J3": "11111001111",
}


@pytest.fixture
def prop3_domain():
    return Domain.from_bitstrings(PROP3_STRINGS.values())


@pytest.fixture
def prop3_profile():
    return Profile.from_bitstrings([PROP3_STRINGS["J1"], PROP3_STRINGS["J2"], PROP3_STRINGS["J3"]])


def example1_rule(max_agents: int = 3):
    """The quantity-insensitive table rule over {00, 01, 11}."""
    j = {s: Judgment.from_string(s) for s in ("00", "01", "11")}
    set_map = {
        frozenset({j["00"]}): (j["01"], j["11"]),
        frozenset({j["11"]}): (j["01"], j["11"]),
        frozenset({j["01"]}): (j["00"], j["11"]),
        frozenset({j["01"], j["00"]}): (j["01"], j["11"]),
        frozenset({j["00"], j["11"]}): (j["01"], j["11"]),
        frozenset({j["01"], j["11"]}): (j["01"],),
        frozenset({j["01"], j["00"], j["11"]}): (j["01"],),
    }
    return quantity_insensitive_table(set_map, max_agents)


@pytest.fixture
def example1_domain():
    return Domain.from_bitstrings(["00", "01", "11"])


@pytest.fixture
def example1_table():
    return example1_rule()


def outcome_of(*bitstrings: str) -> Outcome:
    return Outcome(tuple(Judgment.from_string(s) for s in bitstrings))
