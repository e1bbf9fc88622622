"""Built-in example fans.

The catalog lives in ``data/*.json`` with a manifest of descriptions and
expected invariants. ``around-ray-<w>`` names a generated family: ``w + 1``
three-dimensional cones, each with four rays, arranged around a common ray.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from math import cos, pi, sin

from .cones import primitivize
from .fan import Fan, build_fan
from .io import parse_fan_file

_AROUND = re.compile(r"around-ray-(\d+)$")


@lru_cache(maxsize=None)
def manifest() -> tuple[dict, ...]:
    text = resources.files(__package__).joinpath("data").joinpath("manifest.json").read_text()
    return tuple(json.loads(text))


def names() -> list[str]:
    return [entry["name"] for entry in manifest()]


def expected(name: str) -> dict:
    for entry in manifest():
        if entry["name"] == name:
            return dict(entry["expected"])
    m = _AROUND.match(name)
    if m:
        return {"kappa0": int(m.group(1)) + 2}
    raise KeyError(name)


def around_ray(w: int, radius: int = 12) -> Fan:
    """``w + 1`` quadrilateral cones around ``(0, 0, 1)``; its support function space has dimension ``w + 2``."""
    if w < 2:
        raise ValueError("need w >= 2")
    n = 2 * (w + 1)
    # vertices of a regular n-gon at height 1, rounded; the phase avoids ties
    pts = [primitivize((round(radius * cos(2 * pi * j / n + 0.3)), round(radius * sin(2 * pi * j / n + 0.3)), 1)) for j in range(n)]
    rays = [(0, 0, 1)] + [pts[2 * k] for k in range(w + 1)] + [pts[2 * k + 1] for k in range(w + 1)]
    cones = [[0, 1 + k, 1 + (k + 1) % (w + 1), w + 2 + k] for k in range(w + 1)]
    return build_fan(3, rays, cones, name=f"around-ray-{w}")


def raw(name: str) -> bytes:
    if name not in names():
        raise KeyError(name)
    return resources.files(__package__).joinpath("data").joinpath(f"{name}.json").read_bytes()


def load(name: str) -> Fan:
    m = _AROUND.match(name)
    if m:
        return around_ray(int(m.group(1)))
    return parse_fan_file(raw(name))
