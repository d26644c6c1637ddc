"""
Root systems: reflection closure under the standard or the reduced (tau-free part)
inner product, Cartan matrices, Coxeter diagrams, axiom checks and the built-in
simple-root catalog.
"""
import io
import logging
import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from clifford import Multivector
from scalars import (
    FieldMismatchError,
    QuadScalar,
    ScalarParseError,
    format_scalar,
    parse_scalar,
)

logger = logging.getLogger(__name__)

ROOT_CAP = 10000
FLOAT_KEY_DIGITS = 9
ANGLE_TOLERANCE = 1e-9
RECOGNIZED_BONDS = (2, 3, 4, 5, 6)

Vector = Tuple[Any, ...]


class Metric(str, Enum):
    STANDARD = "standard"
    REDUCED = "reduced"


class ZeroRootError(ValueError):
    """A root has zero norm in the declared metric."""


class ClosureCapExceeded(RuntimeError):
    """Reflection closure grew past the cap; the input is not a finite root system."""


class UnrecognizedAngleError(ValueError):
    """A pair of simple roots meets at an angle other than pi - pi/m, m in 2..6."""


class UnknownCatalogError(KeyError):
    """Catalog name is not one of the built-in systems."""


class RootsFileError(ValueError):
    """A simple-roots file or roots CSV could not be parsed."""


# ---- Pairings and reflections ----

def is_exact_vector(vector: Sequence) -> bool:
    return bool(vector) and isinstance(vector[0], QuadScalar)


def negate(vector: Vector) -> Vector:
    return tuple(-x for x in vector)


def scale(vector: Vector, factor) -> Vector:
    return tuple(factor * x for x in vector)


def dot(x: Vector, y: Vector):
    total = x[0] * y[0]
    for a, b in zip(x[1:], y[1:]):
        total = total + a * b
    return total


def reduced_inner_product(x: Vector, y: Vector) -> Fraction:
    """Tau-free part p of the Q(sqrt 5) pairing written as p + q*tau."""
    value = dot(x, y)
    if not isinstance(value, QuadScalar) or value.d != 5:
        raise FieldMismatchError("reduced inner product needs vectors over Q(sqrt(5))")
    return value.to_tau_basis()[0]


def pairing(x: Vector, y: Vector, metric: Metric = Metric.STANDARD):
    if metric == Metric.REDUCED:
        return reduced_inner_product(x, y)
    return dot(x, y)


def flatten_tau(x: Vector) -> Tuple[Fraction, ...]:
    """(p_1..p_n, q_1..q_n) with x_i = p_i + q_i*tau."""
    split = []
    for coordinate in x:
        if not isinstance(coordinate, QuadScalar) or coordinate.d != 5:
            raise FieldMismatchError("flatten_tau needs coordinates in Q(sqrt(5))")
        split.append(coordinate.to_tau_basis())
    return tuple(p for p, _ in split) + tuple(q for _, q in split)


def _is_zero(value) -> bool:
    return value == 0


def reflect(vector: Vector, root: Vector, metric: Metric = Metric.STANDARD) -> Vector:
    """s_root(vector) = vector - 2 (vector|root)/(root|root) root."""
    norm = pairing(root, root, metric)
    if _is_zero(norm):
        if all(_is_zero(x) for x in root):
            raise ZeroRootError("cannot reflect in the zero vector")
        raise ZeroRootError("root has zero norm in the reduced metric")
    projection = pairing(vector, root, metric)
    if _is_zero(projection):
        return tuple(vector)
    coefficient = 2 * projection / norm
    return tuple(v - coefficient * r for v, r in zip(vector, root))


def vector_key(vector: Vector):
    if is_exact_vector(vector):
        return tuple(vector)
    return tuple(round(float(x), FLOAT_KEY_DIGITS) + 0.0 for x in vector)


# ---- Root systems ----

@dataclass(frozen=True)
class RootSystem:
    dim: int
    simple_roots: Tuple[Vector, ...]
    roots: Tuple[Vector, ...]
    metric: Metric = Metric.STANDARD
    name: Optional[str] = None
    field: Optional[int] = None
    coxeter_order: Optional[Tuple[int, ...]] = None
    fold_pairs: Optional[Tuple[Tuple[int, int], ...]] = None

    def __len__(self):
        return len(self.roots)

    @property
    def is_exact(self) -> bool:
        return self.field is not None

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def _index(self) -> Dict[Any, int]:
        return {vector_key(r): i for i, r in enumerate(self.roots)}

    def index_of(self, vector: Vector) -> Optional[int]:
        return self._index.get(vector_key(vector))

    def __contains__(self, vector) -> bool:
        return self.index_of(vector) is not None

    def root_set(self) -> set:
        return set(self._index)

    def simple_multivectors(self) -> List[Multivector]:
        return [Multivector.vector(r, self.field) for r in self.simple_roots]

    def root_multivectors(self) -> List[Multivector]:
        return [Multivector.vector(r, self.field) for r in self.roots]

    def float_roots(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.roots], dtype=np.float64)

    def float_simple_roots(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.simple_roots], dtype=np.float64)

    def label(self) -> str:
        return self.name or f"rank-{self.rank}"


def _field_of(vectors: Sequence[Vector]) -> Optional[int]:
    fields = {x.d for v in vectors for x in v if isinstance(x, QuadScalar)}
    if len(fields) > 1:
        raise FieldMismatchError(f"simple roots mix fields {sorted(fields)}")
    return fields.pop() if fields else None


def close_roots(simple_roots: Sequence[Vector], metric: Metric = Metric.STANDARD,
                name: Optional[str] = None, cap: int = ROOT_CAP, **metadata) -> RootSystem:
    """Smallest set containing the +-simple roots that is closed under the simple reflections."""
    simple = tuple(tuple(r) for r in simple_roots)
    if not simple:
        raise ValueError("close_roots needs at least one simple root")
    dims = {len(r) for r in simple}
    if len(dims) != 1:
        raise ValueError(f"simple roots have different lengths: {sorted(dims)}")
    if len({vector_key(r) for r in simple}) != len(simple):
        raise ValueError("simple roots must be pairwise distinct")
    for r in simple:
        if all(_is_zero(x) for x in r):
            raise ZeroRootError("simple roots must be nonzero")

    roots: List[Vector] = []
    seen = set()
    queue = deque()

    def add(vector: Vector) -> None:
        key = vector_key(vector)
        if key in seen:
            return
        seen.add(key)
        roots.append(vector)
        queue.append(vector)
        if len(roots) > cap:
            raise ClosureCapExceeded(f"closure exceeded {cap} roots; simple roots are not of finite type")

    for r in simple:
        add(r)
        add(negate(r))
    while queue:
        current = queue.popleft()
        for r in simple:
            add(reflect(current, r, metric))

    logger.info("Closed %s: %d simple roots -> %d roots (%s metric)",
                name or "root system", len(simple), len(roots), metric.value)
    return RootSystem(
        dim=dims.pop(),
        simple_roots=simple,
        roots=tuple(roots),
        metric=metric,
        name=name,
        field=_field_of(simple),
        **metadata,
    )


# ---- Axioms ----

@dataclass
class RootAxiomReport:
    """Outcome of the root system axioms: only +-alpha proportional to alpha, and closure under reflections."""

    axiom1: bool
    axiom2: bool
    axiom1_field: bool
    axiom1_rational: bool
    metric: Metric
    axiom1_witness: Optional[Vector] = None
    axiom2_witness: Optional[Tuple[Vector, Vector, Vector]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.axiom1 and self.axiom2

    def to_dict(self) -> Dict[str, Any]:
        def text(vector):
            return None if vector is None else [format_scalar(x) for x in vector]

        return {
            "metric": self.metric.value,
            "axiom1": self.axiom1,
            "axiom2": self.axiom2,
            "axiom1_field_reading": self.axiom1_field,
            "axiom1_rational_reading": self.axiom1_rational,
            "axiom1_witness": text(self.axiom1_witness),
            "axiom2_witness": None if self.axiom2_witness is None else [text(v) for v in self.axiom2_witness],
            "notes": list(self.notes),
        }


def _direction_key(vector: Vector):
    if is_exact_vector(vector):
        for i, x in enumerate(vector):
            if x:
                inverse = x.inverse()
                return i, tuple(y * inverse for y in vector)
        return None
    for i, x in enumerate(vector):
        if abs(float(x)) > 10 ** -FLOAT_KEY_DIGITS:
            return i, tuple(round(float(y) / float(x), FLOAT_KEY_DIGITS) + 0.0 for y in vector)
    return None


def _rational_ratio(beta: Vector, alpha: Vector, pivot: int) -> bool:
    ratio = beta[pivot] / alpha[pivot]
    return not isinstance(ratio, QuadScalar) or ratio.is_rational()


def _check_proportional(roots: Sequence[Vector], rational: bool) -> Optional[Vector]:
    groups: Dict[Any, List[Vector]] = {}
    for r in roots:
        direction = _direction_key(r)
        if direction is None:
            return r
        groups.setdefault(direction, []).append(r)
    for (pivot, _), members in groups.items():
        classes: List[List[Vector]] = []
        for member in members:
            for cls in classes:
                if not rational or _rational_ratio(member, cls[0], pivot):
                    cls.append(member)
                    break
            else:
                classes.append([member])
        for cls in classes:
            base = vector_key(cls[0])
            allowed = {base, vector_key(negate(cls[0]))}
            for member in cls[1:]:
                if vector_key(member) not in allowed:
                    return member
    return None


def verify_root_axioms(rs: RootSystem) -> RootAxiomReport:
    """Check +-alpha membership, proportionality (field and rational readings) and reflection closure."""
    keys = rs.root_set()
    notes: List[str] = []

    negation_witness = next((r for r in rs.roots if vector_key(negate(r)) not in keys), None)
    field_witness = _check_proportional(rs.roots, rational=False)
    if rs.is_exact:
        rational_witness = _check_proportional(rs.roots, rational=True)
    else:
        rational_witness = field_witness
    axiom1_field = negation_witness is None and field_witness is None
    axiom1_rational = negation_witness is None and rational_witness is None
    if axiom1_rational and not axiom1_field:
        notes.append(
            "roots proportional over the scalar field but not over Q are present "
            "(e.g. rho and tau*rho); they are distinct roots in the reduced metric"
        )
    if rs.metric == Metric.REDUCED:
        axiom1, witness1 = axiom1_rational, negation_witness or rational_witness
        notes.append("axiom 1 read over Q (reduced metric)")
    else:
        axiom1, witness1 = axiom1_field, negation_witness or field_witness

    witness2 = None
    for alpha in rs.roots:
        norm = pairing(alpha, alpha, rs.metric)
        if _is_zero(norm):
            witness2 = (alpha, alpha, alpha)
            break
        factor = 2 / norm
        for beta in rs.roots:
            projection = pairing(beta, alpha, rs.metric)
            if _is_zero(projection):
                continue
            coefficient = factor * projection
            image = tuple(b - coefficient * a for b, a in zip(beta, alpha))
            if vector_key(image) not in keys:
                witness2 = (alpha, beta, image)
                break
        if witness2 is not None:
            break

    report = RootAxiomReport(
        axiom1=axiom1,
        axiom2=witness2 is None,
        axiom1_field=axiom1_field,
        axiom1_rational=axiom1_rational,
        metric=rs.metric,
        axiom1_witness=None if axiom1 else witness1,
        axiom2_witness=witness2,
        notes=notes,
    )
    logger.info("Axioms for %s: axiom1=%s axiom2=%s", rs.label(), report.axiom1, report.axiom2)
    return report


# ---- Cartan matrix and diagram ----

@dataclass(frozen=True)
class CartanMatrix:
    entries: Tuple[Tuple[Any, ...], ...]
    labels: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def __getitem__(self, index: Tuple[int, int]):
        i, j = index
        return self.entries[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries], dtype=np.float64)

    def to_json(self) -> Dict[str, Any]:
        return {
            "labels": list(self.labels),
            "entries": [[format_scalar(x) for x in row] for row in self.entries],
        }


def cartan_matrix(simple_roots: Sequence[Vector], metric: Metric = Metric.STANDARD) -> CartanMatrix:
    """A_ij = 2 (alpha_i|alpha_j) / (alpha_j|alpha_j)."""
    norms = [pairing(r, r, metric) for r in simple_roots]
    rows = []
    for ri in simple_roots:
        row = []
        for rj, nj in zip(simple_roots, norms):
            if _is_zero(nj):
                raise ZeroRootError("simple root with zero norm")
            row.append(2 * pairing(ri, rj, metric) / nj)
        rows.append(tuple(row))
    return CartanMatrix(tuple(rows), tuple(range(1, len(simple_roots) + 1)))


@dataclass(frozen=True)
class CoxeterDiagram:
    nodes: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]

    def bond(self, i: int, j: int) -> int:
        if i == j:
            return 1
        for a, b, m in self.edges:
            if {a, b} == {i, j}:
                return m
        return 2

    def neighbors(self, node: int) -> List[int]:
        out = []
        for a, b, _ in self.edges:
            if a == node:
                out.append(b)
            elif b == node:
                out.append(a)
        return sorted(out)

    def coxeter_matrix(self) -> List[List[int]]:
        return [[self.bond(i, j) for j in self.nodes] for i in self.nodes]

    def is_forest(self) -> bool:
        parent = {n: n for n in self.nodes}

        def find(n):
            while parent[n] != n:
                parent[n] = parent[parent[n]]
                n = parent[n]
            return n

        for a, b, _ in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True

    def to_json(self) -> Dict[str, Any]:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges]}


def extract_diagram(cartan: CartanMatrix) -> CoxeterDiagram:
    """Recover m_ij from A_ij*A_ji = 4 cos^2(pi/m_ij)."""
    edges = []
    k = cartan.size
    for i in range(k):
        for j in range(i + 1, k):
            aij, aji = float(cartan[i, j]), float(cartan[j, i])
            if aij > ANGLE_TOLERANCE or aji > ANGLE_TOLERANCE:
                raise UnrecognizedAngleError(
                    f"simple roots {cartan.labels[i]} and {cartan.labels[j]} meet at an acute angle"
                )
            product = aij * aji
            for m in RECOGNIZED_BONDS:
                if abs(product - 4 * math.cos(math.pi / m) ** 2) < ANGLE_TOLERANCE:
                    break
            else:
                raise UnrecognizedAngleError(
                    f"A_ij*A_ji = {product:.12g} between {cartan.labels[i]} and {cartan.labels[j]}"
                )
            if m == 2 and (abs(aij) > ANGLE_TOLERANCE or abs(aji) > ANGLE_TOLERANCE):
                raise UnrecognizedAngleError("zero pattern of the Cartan matrix is not symmetric")
            if m > 2:
                edges.append((cartan.labels[i], cartan.labels[j], m))
    return CoxeterDiagram(tuple(cartan.labels), tuple(edges))


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank over Q by Gaussian elimination."""
    matrix = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    columns = len(matrix[0]) if matrix else 0
    for col in range(columns):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        lead = matrix[rank][col]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                factor = matrix[r][col] / lead
                matrix[r] = [x - factor * y for x, y in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


# ---- Catalog ----

def _tau(p, q) -> QuadScalar:
    return QuadScalar.from_tau(Fraction(p), Fraction(q))


def _rational_vector(values: Sequence, d: int) -> Vector:
    return tuple(QuadScalar.rational(Fraction(v), d) for v in values)


def _unit_vector(dim: int, index: int, d: int = 2) -> Vector:
    return _rational_vector([1 if i == index else 0 for i in range(dim)], d)


def _h3_simple_roots() -> List[Vector]:
    zero, one = _tau(0, 0), _tau(1, 0)
    half = Fraction(1, 2)
    return [
        (zero, one, zero),
        (_tau(half, -half), _tau(-half, 0), _tau(0, -half)),
        (zero, zero, one),
    ]


def h4_simple_roots() -> List[Vector]:
    """a1..a4 over Q(sqrt 5), unit length."""
    half = Fraction(1, 2)
    zero = _tau(0, 0)
    half_minus_sigma = _tau(-half, half)
    return [
        (half_minus_sigma, _tau(0, -half), zero, _tau(-half, 0)),
        (zero, half_minus_sigma, _tau(0, -half), _tau(half, 0)),
        (zero, _tau(half, 0), half_minus_sigma, _tau(0, -half)),
        (zero, _tau(-half, 0), half_minus_sigma, _tau(0, half)),
    ]


def e8_reduced_simple_roots() -> List[Vector]:
    """alpha_1..alpha_8 = a1, a2, a3, tau*a4, tau*a3, tau*a2, tau*a1, a4."""
    a1, a2, a3, a4 = h4_simple_roots()
    tau = _tau(0, 1)
    return [a1, a2, a3, scale(a4, tau), scale(a3, tau), scale(a2, tau), scale(a1, tau), a4]


def _a4_simple_roots() -> List[Vector]:
    zero, one = _tau(0, 0), _tau(1, 0)
    half = Fraction(1, 2)
    return [
        (-one, one, zero, zero),
        (zero, -one, one, zero),
        (zero, zero, -one, one),
        (_tau(0, half), _tau(0, half), _tau(0, half), _tau(-1, half)),
    ]


def _e8_cl8_simple_roots() -> List[Vector]:
    def diff(i, j, sign=-1):
        values = [0] * 8
        values[i - 1] += 1
        values[j - 1] += sign
        return _rational_vector(values, 2)

    half = Fraction(1, 2)
    return [
        diff(7, 6), diff(6, 5), diff(5, 4), diff(4, 3), diff(3, 2), diff(2, 1),
        _rational_vector([half, -half, -half, -half, -half, -half, -half, half], 2),
        diff(2, 1, sign=1),
    ]


def _chain(dim: int, extra: Sequence[Sequence]) -> List[Vector]:
    """e1-e2, ..., e_{n-1}-e_n followed by the extra roots."""
    roots = []
    for i in range(dim - 1):
        values = [0] * dim
        values[i], values[i + 1] = 1, -1
        roots.append(_rational_vector(values, 2))
    return roots + [_rational_vector(v, 2) for v in extra]


def _i2_simple_roots(n: int) -> List[Vector]:
    return [(1.0, 0.0), (-math.cos(math.pi / n), math.sin(math.pi / n))]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[[], List[Vector]]
    metric: Metric = Metric.STANDARD
    coxeter_order: Optional[Tuple[int, ...]] = None
    fold_pairs: Optional[Tuple[Tuple[int, int], ...]] = None


E8_FOLD_PAIRS = ((1, 7), (2, 6), (3, 5), (4, 8))

CATALOG: Dict[str, CatalogEntry] = {
    "A1^3": CatalogEntry("A1^3", lambda: [_unit_vector(3, i) for i in range(3)]),
    "A3": CatalogEntry("A3", lambda: [
        _rational_vector([1, -1, 0], 2), _rational_vector([0, 1, -1], 2), _rational_vector([0, 1, 1], 2),
    ]),
    "B3": CatalogEntry("B3", lambda: _chain(3, [[0, 0, 1]])),
    "H3": CatalogEntry("H3", _h3_simple_roots),
    "A4": CatalogEntry("A4", _a4_simple_roots, coxeter_order=(3, 1, 2, 4), fold_pairs=((1, 3), (2, 4))),
    "B4": CatalogEntry("B4", lambda: _chain(4, [[0, 0, 0, 1]])),
    "D4": CatalogEntry("D4", lambda: [
        _unit_vector(4, 0), _unit_vector(4, 1), _unit_vector(4, 2),
        _rational_vector([Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2)], 2),
    ]),
    "F4": CatalogEntry("F4", lambda: [
        _rational_vector([0, 1, -1, 0], 2), _rational_vector([0, 0, 1, -1], 2), _rational_vector([0, 0, 0, 1], 2),
        _rational_vector([Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)], 2),
    ]),
    "H4": CatalogEntry("H4", h4_simple_roots),
    "D6": CatalogEntry("D6", lambda: _chain(6, [[0, 0, 0, 0, 1, 1]]), fold_pairs=((1, 5), (2, 4), (3, 6))),
    "E8": CatalogEntry("E8", e8_reduced_simple_roots, metric=Metric.REDUCED, fold_pairs=E8_FOLD_PAIRS),
    "E8-cl8": CatalogEntry("E8-cl8", _e8_cl8_simple_roots, coxeter_order=(2, 4, 6, 8, 3, 5, 1, 7),
                           fold_pairs=E8_FOLD_PAIRS),
}

_I2_RE = re.compile(r"^I2(?:\((\d+)\))?$")


def catalog_names() -> List[str]:
    return ["I2(n)"] + list(CATALOG)


def load_catalog(name: str, n: Optional[int] = None) -> RootSystem:
    """Close the simple roots of a built-in system."""
    match = _I2_RE.match(name)
    if match:
        n = int(match.group(1)) if match.group(1) else n
        if n is None or n < 2:
            raise UnknownCatalogError(f"I2 needs n >= 2, got {n}")
        return close_roots(_i2_simple_roots(n), name=f"I2({n})")
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownCatalogError(f"unknown root system {name!r}; choose from {', '.join(catalog_names())}")
    return close_roots(
        entry.builder(),
        metric=entry.metric,
        name=entry.name,
        coxeter_order=entry.coxeter_order,
        fold_pairs=entry.fold_pairs,
    )


# ---- Files ----

_HEADER_RE = re.compile(r"^dim\s*=\s*(\d+)\s+field\s*=\s*(sqrt-(\d+)|float)\s*$")


@dataclass(frozen=True)
class SimpleRootsFile:
    dim: int
    field: Optional[int]
    roots: Tuple[Vector, ...]


def _parse_entry(text: str, d: Optional[int]):
    if d is None:
        return float(text)
    return parse_scalar(text, d)


def parse_simple_roots_file(text: str) -> SimpleRootsFile:
    """First line 'dim=<n> field=<sqrt-d|float>', then one comma-separated root per line."""
    lines = text.splitlines()
    if not lines:
        raise RootsFileError("line 1: empty file")
    header = _HEADER_RE.match(lines[0].strip())
    if not header:
        raise RootsFileError(f"line 1: expected 'dim=<n> field=<sqrt-d|float>', got {lines[0]!r}")
    dim = int(header.group(1))
    d = int(header.group(3)) if header.group(3) else None
    roots = []
    for number, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != dim:
            raise RootsFileError(f"line {number}: expected {dim} entries, got {len(parts)}")
        try:
            root = tuple(_parse_entry(p, d) for p in parts)
        except (ScalarParseError, FieldMismatchError, ValueError) as exc:
            raise RootsFileError(f"line {number}: {exc}") from exc
        if all(_is_zero(x) for x in root):
            raise RootsFileError(f"line {number}: zero root")
        roots.append(root)
    if not roots:
        raise RootsFileError("no roots given")
    return SimpleRootsFile(dim, d, tuple(roots))


def roots_frame(rs: RootSystem) -> pd.DataFrame:
    """index, coord1..coordN with exact scalar strings."""
    records = [
        {"index": i, **{f"coord{k + 1}": format_scalar(x) for k, x in enumerate(r)}}
        for i, r in enumerate(rs.roots)
    ]
    columns = ["index"] + [f"coord{k + 1}" for k in range(rs.dim)]
    return pd.DataFrame.from_records(records, columns=columns)


def read_roots_csv(text: str, d: Optional[int]) -> List[Vector]:
    """Parse a roots CSV written by roots_frame back into vectors."""
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise RootsFileError(f"unreadable roots CSV: {exc}") from exc
    coords = [c for c in frame.columns if c.startswith("coord")]
    if "index" not in frame.columns or not coords:
        raise RootsFileError("roots CSV needs 'index' and 'coordN' columns")
    vectors = []
    for number, row in enumerate(frame[coords].itertuples(index=False), start=2):
        try:
            vectors.append(tuple(_parse_entry(value, d) for value in row))
        except (ScalarParseError, FieldMismatchError, ValueError) as exc:
            raise RootsFileError(f"line {number}: {exc}") from exc
    return vectors
