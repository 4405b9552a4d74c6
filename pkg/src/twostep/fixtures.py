"""Named fixture ideals and nestings shipped as plain-text generator lists."""

from __future__ import annotations

from importlib import resources

from .forms import parse_form
from .ideals import GradedIdeal, Nesting, make_nesting, two_step_closure

_SPECS = {
    "iarrobino78": ("iarrobino78.txt", 3, 6),
    "thm54_outer": ("thm54_outer.txt", 4, 1),
    "thm54_inner": ("thm54_inner.txt", 4, 2),
    "exfinal26": ("exfinal26.txt", 6, 2),
    "exfinal25": ("exfinal25.txt", 6, 2),
}

FIXTURE_NAMES = ("iarrobino78", "thm54", "exfinal26", "exfinal25")


def _read_forms(fname: str, n: int):
    text = resources.files("twostep.data").joinpath(fname).read_text()
    forms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        forms.append(parse_form(line, n))
    return forms


def load_ideal(name: str) -> GradedIdeal:
    fname, n, k = _SPECS[name]
    return two_step_closure(n, k, _read_forms(fname, n))


def load_fixture(name: str) -> GradedIdeal | Nesting:
    """Fixture by public name; thm54 is the two-level nesting."""
    if name == "thm54":
        return make_nesting([load_ideal("thm54_outer"), load_ideal("thm54_inner")])
    if name in _SPECS:
        return load_ideal(name)
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
