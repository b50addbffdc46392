"""TSPLIB instance handling: parsing, bit-exact distances, tour arithmetic.

Costs are integers exactly as TSPLIB95 defines them (nearest-int Euclidean,
truncated great-circle for GEO), so tour lengths downstream are plain integer
sums that can be compared against published optima without tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EUC_2D = "EUC_2D"
GEO = "GEO"
EXPLICIT = "EXPLICIT"

EDGE_WEIGHT_TYPES = (EUC_2D, GEO, EXPLICIT)

_SUPPORTED_EXPLICIT_FORMATS = ("FULL_MATRIX", "UPPER_ROW")

# TSPLIB95 GEO constants: idealized earth radius in km and the truncated pi
# the reference implementation hard-codes.
_GEO_RADIUS = 6378.388
_GEO_PI = 3.141592


class ParseError(ValueError):
    """TSPLIB file rejected; message carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _nint(x: float) -> int:
    return int(x + 0.5)


def _geo_radians(coord: float) -> float:
    # TSPLIB coordinates are DDD.MM (degrees and minutes); the degree part is
    # truncated toward zero like a C integer cast.
    deg = int(coord)
    minutes = coord - deg
    return _GEO_PI * (deg + 5.0 * minutes / 3.0) / 180.0


def distance(edge_weight_type: str, coord_a: tuple[float, float],
             coord_b: tuple[float, float]) -> int:
    """Distance between two nodes per the TSPLIB95 definition of the type."""
    if edge_weight_type == EUC_2D:
        xd = coord_a[0] - coord_b[0]
        yd = coord_a[1] - coord_b[1]
        return _nint(math.sqrt(xd * xd + yd * yd))
    if edge_weight_type == GEO:
        lat1 = _geo_radians(coord_a[0])
        lon1 = _geo_radians(coord_a[1])
        lat2 = _geo_radians(coord_b[0])
        lon2 = _geo_radians(coord_b[1])
        q1 = math.cos(lon1 - lon2)
        q2 = math.cos(lat1 - lat2)
        q3 = math.cos(lat1 + lat2)
        return int(_GEO_RADIUS
                   * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3))
                   + 1.0)
    raise ValueError(f"no coordinate distance for edge weight type "
                     f"{edge_weight_type!r}")


@dataclass(frozen=True)
class Instance:
    """Immutable TSP problem: node coordinates and a dense integer cost matrix."""

    name: str
    dimension: int
    edge_weight_type: str
    coordinates: tuple[tuple[float, float], ...] | None
    costs: np.ndarray
    symmetric: bool = field(init=False)

    def __post_init__(self):
        n = self.dimension
        if n < 3:
            raise ValueError(f"dimension must be >= 3, got {n}")
        if self.edge_weight_type not in EDGE_WEIGHT_TYPES:
            raise ValueError(
                f"unsupported edge weight type {self.edge_weight_type!r}")
        costs = np.ascontiguousarray(self.costs, dtype=np.int64)
        if costs.shape != (n, n):
            raise ValueError(f"cost matrix shape {costs.shape} != ({n}, {n})")
        if (costs < 0).any():
            raise ValueError("negative edge cost")
        if np.diagonal(costs).any():
            raise ValueError("cost matrix diagonal must be zero")
        if self.coordinates is not None and len(self.coordinates) != n:
            raise ValueError("coordinate count does not match dimension")
        symmetric = bool(np.array_equal(costs, costs.T))
        if self.edge_weight_type in (EUC_2D, GEO) and not symmetric:
            raise ValueError("coordinate-based cost matrix must be symmetric")
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "symmetric", symmetric)

    @property
    def n(self) -> int:
        return self.dimension

    def cost(self, i: int, j: int) -> int:
        return int(self.costs[i, j])

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "dimension": self.dimension,
            "edge_weight_type": self.edge_weight_type,
            "coordinates": (None if self.coordinates is None
                            else [list(c) for c in self.coordinates]),
            "costs": self.costs.tolist(),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        doc = json.loads(text)
        coords = doc["coordinates"]
        return cls(
            name=doc["name"],
            dimension=doc["dimension"],
            edge_weight_type=doc["edge_weight_type"],
            coordinates=(None if coords is None
                         else tuple((float(x), float(y)) for x, y in coords)),
            costs=np.array(doc["costs"], dtype=np.int64),
        )


def from_coordinates(name: str, edge_weight_type: str,
                     coordinates: list[tuple[float, float]]) -> Instance:
    """Build an instance by materializing the full distance matrix."""
    n = len(coordinates)
    costs = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            d = distance(edge_weight_type, coordinates[i], coordinates[j])
            costs[i, j] = d
            costs[j, i] = d
    return Instance(name=name, dimension=n, edge_weight_type=edge_weight_type,
                    coordinates=tuple((float(x), float(y))
                                      for x, y in coordinates),
                    costs=costs)


def from_matrix(name: str, costs) -> Instance:
    """Build an explicit-matrix instance without coordinates."""
    costs = np.asarray(costs, dtype=np.int64)
    return Instance(name=name, dimension=costs.shape[0],
                    edge_weight_type=EXPLICIT, coordinates=None, costs=costs)


@dataclass(frozen=True)
class Tour:
    """Hamiltonian circuit as a node permutation with its cached total length."""

    order: tuple[int, ...]
    length: int

    @classmethod
    def from_order(cls, instance: Instance, order) -> "Tour":
        order = tuple(int(v) for v in order)
        return cls(order=order, length=tour_length(instance, order))

    def to_doc(self) -> dict:
        return {"order": list(self.order), "length": self.length}


def _check_permutation(n: int, order) -> np.ndarray:
    arr = np.asarray(order, dtype=np.int64)
    if arr.shape != (n,) or not np.array_equal(np.sort(arr), np.arange(n)):
        raise ValueError(f"order is not a permutation of 0..{n - 1}")
    return arr


def tour_length(instance: Instance, order) -> int:
    """Sum of the n closing-cycle edge costs along the given permutation."""
    arr = _check_permutation(instance.n, order)
    return int(instance.costs[arr, np.roll(arr, -1)].sum())


def parse_tsplib(text: str, name_hint: str = "") -> Instance:
    """Parse a TSPLIB95 problem file into an Instance with materialized costs.

    Supports EUC_2D and GEO coordinate instances plus EXPLICIT matrices in
    FULL_MATRIX and UPPER_ROW format. Raises ParseError with the offending
    line number on malformed input.
    """
    headers: dict[str, str] = {}
    coord_lines: list[tuple[int, str]] = []
    weight_tokens: list[tuple[int, str]] = []
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if upper.endswith("_SECTION") or upper == "NODE_COORD_SECTION":
            if upper == "NODE_COORD_SECTION":
                section = "coords"
            elif upper == "EDGE_WEIGHT_SECTION":
                section = "weights"
            else:
                section = "ignored"
            continue
        if section == "coords":
            coord_lines.append((lineno, line))
            continue
        if section == "weights":
            weight_tokens.extend((lineno, tok) for tok in line.split())
            continue
        if section == "ignored":
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            headers[key.strip().upper()] = value.strip()
        else:
            raise ParseError(f"unrecognized line outside any section: {line!r}",
                             lineno)

    for required in ("NAME", "DIMENSION", "EDGE_WEIGHT_TYPE"):
        if required not in headers:
            raise ParseError(f"missing required header field {required}")

    name = headers["NAME"] or name_hint
    try:
        n = int(headers["DIMENSION"])
    except ValueError:
        raise ParseError(f"DIMENSION is not an integer: "
                         f"{headers['DIMENSION']!r}") from None
    if n < 3:
        raise ParseError(f"DIMENSION must be >= 3, got {n}")

    ewt = headers["EDGE_WEIGHT_TYPE"].upper()
    if ewt not in EDGE_WEIGHT_TYPES:
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {ewt!r}")

    if ewt in (EUC_2D, GEO):
        if not coord_lines:
            raise ParseError("missing NODE_COORD_SECTION")
        if len(coord_lines) != n:
            raise ParseError(
                f"DIMENSION is {n} but NODE_COORD_SECTION has "
                f"{len(coord_lines)} entries", coord_lines[-1][0])
        coords: list[tuple[float, float] | None] = [None] * n
        for lineno, line in coord_lines:
            parts = line.split()
            if len(parts) < 3:
                raise ParseError(f"coordinate line needs index, x, y: {line!r}",
                                 lineno)
            try:
                idx = int(parts[0])
                x, y = float(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(f"malformed numeric token in {line!r}",
                                 lineno) from None
            if not (1 <= idx <= n):
                raise ParseError(f"node index {idx} out of range 1..{n}",
                                 lineno)
            if coords[idx - 1] is not None:
                raise ParseError(f"duplicate node index {idx}", lineno)
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ParseError(f"non-finite coordinate in {line!r}", lineno)
            coords[idx - 1] = (x, y)
        return from_coordinates(name, ewt, coords)  # type: ignore[arg-type]

    # EXPLICIT
    fmt = headers.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX").upper()
    if fmt not in _SUPPORTED_EXPLICIT_FORMATS:
        raise ParseError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}")
    if not weight_tokens:
        raise ParseError("missing EDGE_WEIGHT_SECTION")

    expected = n * n if fmt == "FULL_MATRIX" else n * (n - 1) // 2
    if len(weight_tokens) != expected:
        raise ParseError(
            f"EDGE_WEIGHT_SECTION has {len(weight_tokens)} values, expected "
            f"{expected} for {fmt}", weight_tokens[-1][0])

    values = []
    for lineno, tok in weight_tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"malformed numeric token {tok!r}",
                             lineno) from None
        if v != int(v):
            raise ParseError(f"non-integer edge weight {tok!r}", lineno)
        values.append(int(v))

    costs = np.zeros((n, n), dtype=np.int64)
    if fmt == "FULL_MATRIX":
        costs[:] = np.array(values, dtype=np.int64).reshape(n, n)
        np.fill_diagonal(costs, 0)
    else:  # UPPER_ROW: n-1, n-2, ... entries above the diagonal
        it = iter(values)
        for i in range(n):
            for j in range(i + 1, n):
                v = next(it)
                costs[i, j] = v
                costs[j, i] = v
    return Instance(name=name, dimension=n, edge_weight_type=EXPLICIT,
                    coordinates=None, costs=costs)


def load_tsplib(path: str | Path) -> Instance:
    path = Path(path)
    return parse_tsplib(path.read_text(encoding="utf-8"), name_hint=path.stem)


def bundled_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def list_bundled() -> list[str]:
    return sorted(p.stem for p in bundled_dir().glob("*.tsp"))


def load_bundled(name: str) -> Instance:
    path = bundled_dir() / f"{name}.tsp"
    if not path.exists():
        raise FileNotFoundError(f"no bundled instance named {name!r}")
    return load_tsplib(path)
