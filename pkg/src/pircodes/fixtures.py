"""Frozen structures found once by search and shipped with the package.

``python -m pircodes.fixtures`` regenerates every file under ``data/``;
the test suite checks that regeneration reproduces the shipped bytes.
"""

from __future__ import annotations

import sys
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path

from . import design, geometry

__all__ = ["FIXTURES", "load", "pg32_packing", "k6_matching_configuration", "regenerate"]


def k6_matching_configuration() -> design.IncidenceStructure:
    """Edges of K6 minus the matching {01, 23, 45} against vertex stars:
    a (12_2, 6_4) configuration."""
    matching = {(0, 1), (2, 3), (4, 5)}
    edges = [e for e in combinations(range(6), 2) if e not in matching]
    stars = [tuple(i for i, e in enumerate(edges) if vtx in e) for vtx in range(6)]
    return design.IncidenceStructure(len(edges), tuple(stars))


def _pg32_lines() -> design.IncidenceStructure:
    return design.IncidenceStructure(15, tuple(line.points for line in geometry.pg_lines(3, 2)))


def _ag_design(q: int) -> design.IncidenceStructure:
    lines = [line.points for cls in geometry.ag_lines(2, q) for line in cls]
    return design.IncidenceStructure(q * q, tuple(sorted(lines)))


def _build(name: str) -> tuple[design.IncidenceStructure, design.Resolution | None]:
    if name == "pg32_packing":
        inc = _pg32_lines()
        return inc, design.resolve(inc)
    if name == "ag24_resolution":
        inc = _ag_design(4)
        return inc, design.resolve(inc)
    if name == "ag25_resolution":
        inc = _ag_design(5)
        return inc, design.resolve(inc)
    if name == "conf_12_2_6_4":
        return k6_matching_configuration(), None
    if name == "conf_20_4_16_5":
        return design.search_configuration(20, 4, 16, 5), None
    if name == "conf_20_6_30_4":
        return design.search_configuration(20, 6, 30, 4, group_order=5), None
    if name == "sym_15_4":
        return design.cyclic_configuration(15, [(0, 1, 3, 7)]), None
    if name == "sts_13":
        return design.cyclic_configuration(13, [(0, 1, 4), (0, 2, 8)]), None
    raise KeyError(name)


FIXTURES = (
    "pg32_packing",
    "ag24_resolution",
    "ag25_resolution",
    "conf_12_2_6_4",
    "conf_20_4_16_5",
    "conf_20_6_30_4",
    "sym_15_4",
    "sts_13",
)


def render(name: str) -> str:
    inc, res = _build(name)
    return design.export_incidence(inc, res)


@lru_cache(maxsize=None)
def load(name: str) -> tuple[design.IncidenceStructure, design.Resolution | None]:
    if name not in FIXTURES:
        raise KeyError(name)
    text = resources.files("pircodes").joinpath("data").joinpath(f"{name}.txt").read_text()
    return design.import_incidence(text)


def pg32_packing() -> tuple[tuple[int, ...], ...]:
    """The 7 spreads of a PG(3, 2) line packing, as indices into pg_lines(3, 2)."""
    inc, res = load("pg32_packing")
    return res.classes


def regenerate(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIXTURES:
        path = directory / f"{name}.txt"
        path.write_text(render(name))
        written.append(path)
    return written


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "data"
    for p in regenerate(target):
        print(p)
