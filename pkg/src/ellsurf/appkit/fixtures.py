"""Named surfaces used across the test-suite, the CLI and the rank-68 pipeline.

Some classical examples circulate with small misprints.  Both the printed and
the repaired variants are kept under separate names so that the difference
stays visible: ``example1_printed`` has rank 2 while ``example1`` (the
repaired a6 = t^2 (t^2 + 1)) has rank 4 with an S3 field of definition.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactalg import QQ, Poly
from ..weierstrass import WeierstrassModel


@dataclass(frozen=True)
class Fixture:
    name: str
    equation: str
    rank: int | None
    note: str = ""

    def model(self) -> WeierstrassModel:
        from .parser import parse_equation

        return parse_equation(self.equation).model


FIXTURES = {
    f.name: f
    for f in (
        Fixture("example1", "y^2 = x^3 + t^4 + t^2", 4, "field of definition of degree 6, group S3"),
        Fixture("example1_printed", "y^2 = x^3 + t^4 + t^3", 2, "fibres I0*, II, IV"),
        Fixture("example2", "y^2 = x^3 - 3*t*(t^2-1)*x + (t^2-1)^2", 5, "fibres 3 x I1, 3 x III"),
        Fixture("example2_printed", "y^2 = x^3 - 3*t*(t^2-1) + (t^2-1)^2", None, "x-term missing"),
        Fixture("t3(t+1)", "y^2 = x^3 + t^3*(t+1)", 2, "reading used for the rank-68 decomposition"),
        Fixture("t3(t+1)x", "y^2 = x^3 + t^3*(t+1)*x", 0, "alternative reading: fibres III, III*"),
        Fixture("k3", "y^2 = x^3 + t^5 + t^-5", 16, "cleared chart t(t^10 + 1)"),
        Fixture("e68", "y^2 = x^3 + t^360 + 1", 68, "Delsarte surface"),
        Fixture("sextic_base", "y^2 = x^3 + t^5 - 5*t^3 + 5*t", 8, "240 integral sections"),
    )
}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None


def example1_sextic() -> Poly:
    """Degree-6 eliminant generating the field of definition of ``example1``."""
    return Poly(QQ, [8708389056, -60466176, 34992, 186624, 324, 0, 1], "x")


def split_triple():
    """Three totally real polynomials whose splitting field has degree 120."""
    return [
        Poly(QQ, [1, -3, -1, 1], "x"),
        Poly(QQ, [-1, -1, 1], "x"),
        Poly(QQ, [-1, 3, 4, -5, -1, 1], "x"),
    ]
