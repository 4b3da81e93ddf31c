"""Pattern-sequence ordering: effective-area ranking and baselines.

The effective region of a pattern is its white (value-1) area; patterns are
ranked by the pixel count of their largest connected white component,
descending, so that large-amplitude coefficients are measured first. A
region-count baseline (ascending number of 4-connected regions over both
colors) and natural/random orderings are provided for comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .hadamard import Pattern, is_power_of_two, pattern_cells

MAX_ORDERING_SIDE = 128

_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: np.ones((3, 3), dtype=bool),
}

ORDER_METHODS = ("eahsi", "natural", "random", "region_count_baseline")


def connected_components(cells, connectivity: int = 4, color: str = "white"):
    """Pixel counts of all maximal connected components of one color."""
    grid = np.asarray(cells)
    if grid.ndim != 2 or grid.size == 0:
        raise ValueError("cells must be a nonempty 2-D grid")
    if connectivity not in _STRUCTURES:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    if color not in ("white", "black"):
        raise ValueError(f"color must be 'white' or 'black', got {color!r}")
    target = grid.astype(bool)
    if color == "black":
        target = ~target
    labels, count = ndimage.label(target, structure=_STRUCTURES[connectivity])
    if count == 0:
        return []
    return np.bincount(labels.ravel())[1:].tolist()


@dataclass(frozen=True)
class RegionStat:
    pattern_index: int
    max_white_area: int
    region_count: int


def max_effective_area(p: Pattern, connectivity: int = 4) -> RegionStat:
    """Largest connected white area and total (both-color) region count."""
    if p.polarity != "positive":
        raise ValueError("effective area is defined on positive-polarity patterns")
    white = connected_components(p.cells, connectivity, "white")
    black = connected_components(p.cells, connectivity, "black")
    return RegionStat(
        pattern_index=p.index,
        max_white_area=max(white, default=0),
        region_count=len(white) + len(black),
    )


@dataclass(frozen=True)
class OrderedSequence:
    n: int
    method: str
    order: np.ndarray
    connectivity: int = 4
    seed: int | None = None

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        object.__setattr__(self, "order", order)
        n2 = self.n * self.n
        if order.shape != (n2,) or not np.array_equal(np.sort(order), np.arange(n2)):
            raise ValueError("order must be a permutation of [0, n^2)")


def _scan_stats(n: int, connectivity: int, need_black: bool):
    """(max_white_area, region_count) for every pattern index of side n."""
    structure = _STRUCTURES[connectivity]
    n2 = n * n
    j = np.arange(n2, dtype=np.uint32)
    areas = np.zeros(n2, dtype=np.int64)
    counts = np.zeros(n2, dtype=np.int64)
    for k in range(n2):
        parity = np.bitwise_count(j & np.uint32(k)) & 1
        cells = (1 - parity).reshape(n, n)
        labels, nwhite = ndimage.label(cells, structure=structure)
        if nwhite:
            areas[k] = np.bincount(labels.ravel())[1:].max()
        if need_black:
            _, nblack = ndimage.label(1 - cells, structure=structure)
            counts[k] = nwhite + nblack
    return areas, counts


def _check_side(n: int, max_side: int):
    if not is_power_of_two(n):
        raise ValueError(f"side must be a power of two, got {n}")
    if n > max_side:
        raise ValueError(f"side {n} exceeds ordering budget {max_side}")


def eahsi_order(n: int, connectivity: int = 4,
                max_side: int = MAX_ORDERING_SIDE) -> OrderedSequence:
    """All n^2 patterns sorted by largest white component area, descending.

    Ties break by ascending pattern index; deterministic.
    """
    _check_side(n, max_side)
    areas, _ = _scan_stats(n, connectivity, need_black=False)
    order = np.lexsort((np.arange(n * n), -areas))
    return OrderedSequence(n=n, method="eahsi", order=order,
                           connectivity=connectivity)


def baseline_order(n: int, method: str, seed: int | None = None,
                   connectivity: int = 4,
                   max_side: int = MAX_ORDERING_SIDE) -> OrderedSequence:
    """Comparison orderings: natural, seeded random, region-count baseline."""
    _check_side(n, max_side)
    n2 = n * n
    if method == "natural":
        order = np.arange(n2)
    elif method == "random":
        if seed is None:
            raise ValueError("random ordering requires a seed")
        order = np.random.default_rng(seed).permutation(n2)
    elif method == "region_count_baseline":
        _, counts = _scan_stats(n, connectivity, need_black=True)
        order = np.lexsort((np.arange(n2), counts))
    else:
        raise ValueError(f"unknown ordering method {method!r}")
    return OrderedSequence(n=n, method=method, order=order,
                           connectivity=connectivity, seed=seed)


def make_order(n: int, method: str, seed: int | None = None,
               connectivity: int = 4) -> OrderedSequence:
    """Dispatch on method name; the single entry point used by the CLI."""
    if method == "eahsi":
        return eahsi_order(n, connectivity)
    return baseline_order(n, method, seed=seed, connectivity=connectivity)


def save_order(seq: OrderedSequence, path) -> None:
    """Write the line-oriented ordering file format."""
    header = (f"# spx-order v1 n={seq.n} method={seq.method} "
              f"connectivity={seq.connectivity}")
    if seq.seed is not None:
        header += f" seed={seq.seed}"
    body = "\n".join(str(int(i)) for i in seq.order)
    Path(path).write_text(header + "\n" + body + "\n")


def load_order(path) -> OrderedSequence:
    """Parse an ordering file written by save_order."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# spx-order v1 "):
        raise ValueError(f"{path}: not a spx-order v1 file")
    fields = dict(
        m.groups() for m in re.finditer(r"(\w+)=(\S+)", lines[0])
    )
    n = int(fields["n"])
    method = fields["method"]
    connectivity = int(fields["connectivity"])
    seed = int(fields["seed"]) if "seed" in fields else None
    order = np.array([int(s) for s in lines[1:] if s.strip()], dtype=np.int64)
    return OrderedSequence(n=n, method=method, order=order,
                           connectivity=connectivity, seed=seed)
