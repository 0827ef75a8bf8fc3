from pathlib import Path

import pytest

from theorypatch.theory import (
    Example,
    PatchableTheory,
    parse_examples,
    parse_open,
    parse_theory,
)

FIXTURES = Path(__file__).parent / "fixtures"

CUP_GENERAL = """\
root cup.
cup :- upright, liftable, open.
upright :- has_bottom.
liftable :- graspable, light_weight.
open :- has_concavity, upward_concavity.
open :- has_straw.
graspable :- has_handle.
graspable :- small, dry.
"""

CUP_SPECIFIC = """\
root cup.
cup :- upright, liftable, open.
upright :- has_bottom.
liftable :- graspable, light_weight.
open :- has_concavity, upward_concavity.
open :- has_straw.
graspable :- small, ceramic, dry.
"""



def clause_lines(text: str) -> str:
    """Root and clause lines of a serialized theory, without primitive declarations."""
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("primitive "))


STABLY_UNCOVERED = Example(frozenset({"has_bottom", "light_weight", "has_concavity", "upward_concavity"}))
UNSTABLE = Example(STABLY_UNCOVERED.true | {"small", "dry"})


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture
def cup():
    return parse_theory(fixture_text("cup.th"))


@pytest.fixture
def cup_pt(cup):
    return PatchableTheory(cup, parse_open(fixture_text("cup.open")))


@pytest.fixture
def e1_e4():
    return parse_examples(fixture_text("cup_e1_e4.ex"))


@pytest.fixture
def e5():
    return parse_examples(fixture_text("cup_e5.ex"))
