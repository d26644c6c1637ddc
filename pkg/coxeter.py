"""
Coxeter elements as versors.

The Coxeter versor is the normalized product of the simple roots in a chosen order.
Its sandwich action is an orthogonal matrix whose real Schur form splits the space
into invariant rotation planes and -1 directions; each plane gives a bivector
exponential factor and an exponent pair (m, h - m). The Coxeter plane itself is
built from the Perron-Frobenius vector of the (symmetrized) Cartan matrix and the
black/white colouring of the diagram.
"""
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from clifford import (
    Multivector,
    Versor,
    VersorContractError,
    exp_bivector,
    grade_project,
    normalize_bivector,
    reverse,
    sandwich,
    wedge,
)
from roots import (
    CartanMatrix,
    CoxeterDiagram,
    Metric,
    RootSystem,
    cartan_matrix,
    extract_diagram,
    pairing,
    reflect,
)
from scalars import QuadScalar, format_float

logger = logging.getLogger(__name__)

ORDER_TOLERANCE = 1e-9
EXPONENT_TOLERANCE = 1e-6
ORTHOGONALITY_TOLERANCE = 1e-9
RESIDUAL_TOLERANCE = 1e-8
BLOCK_TOLERANCE = 1e-9
EIGENVALUE_TOLERANCE = 1e-6
ORBIT_TOLERANCE = 1e-6
ORIGIN_TOLERANCE = 1e-8
ORDER_CAP = 1000
FOLD_ORDER_CAP = 60


class OrderNotFoundError(RuntimeError):
    """No power W^k = +-1 was found below the cap."""


class FactorizationError(ArithmeticError):
    """The eigenplane factorization failed one of its checks."""


class FoldingError(ValueError):
    """Folding pairs are invalid or the folded group has an element of runaway order."""


class CyclicDiagramError(ValueError):
    """The Coxeter diagram has a cycle and cannot be bicoloured."""


class DegeneratePlaneError(ValueError):
    """Spanning vectors of a projection plane are dependent or missing."""


class NotFiniteTypeError(ValueError):
    """Perron-Frobenius vector has a non-positive entry."""


# ---- Coxeter versor ----

def _resolve_order(rs: RootSystem, order: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if order is None:
        order = rs.coxeter_order or tuple(range(1, rs.rank + 1))
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(1, rs.rank + 1)):
        raise ValueError(f"order must be a permutation of 1..{rs.rank}, got {list(order)}")
    return order


def _normalized_product(vectors: Sequence[Multivector]) -> Multivector:
    """Product of vectors divided by the square root of its (scalar) norm."""
    product = vectors[0]
    for v in vectors[1:]:
        product = product * v
    norm = (product * reverse(product)).scalar_part()
    if isinstance(norm, QuadScalar):
        root = norm.sqrt_exact()
        if root is not None:
            return product / root
        logger.warning("sqrt(%s) is not in Q(sqrt(%d)); normalizing in floats", norm, norm.d)
        product = product.to_float()
    return product / math.sqrt(float(norm))


def _power_sign(mv: Multivector, tol: float) -> int:
    """+1 or -1 if mv is within tol of that scalar, else 0."""
    one = Multivector.scalar(1.0, mv.dim)
    if mv.is_close(one, tol):
        return 1
    if mv.is_close(-one, tol):
        return -1
    return 0


@dataclass(frozen=True)
class CoxeterVersor:
    versor: Versor
    h: int
    order: Tuple[int, ...]
    power_sign: int
    name: Optional[str] = None

    @property
    def dim(self) -> int:
        return self.versor.mv.dim

    @property
    def is_exact(self) -> bool:
        return self.versor.mv.is_exact

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "order": list(self.order),
            "h": self.h,
            "power_sign": self.power_sign,
            "versor": [[blade, coeff] for blade, coeff in self.versor.mv.terms(1e-15)],
        }


def coxeter_versor(rs: RootSystem, order: Optional[Sequence[int]] = None,
                   cap: int = ORDER_CAP, tol: float = ORDER_TOLERANCE) -> CoxeterVersor:
    """W = product of the simple roots in the given (1-based) order, normalized; h minimal with W^h = +-1."""
    if rs.metric != Metric.STANDARD:
        raise VersorContractError(
            f"{rs.label()} uses the {rs.metric.value} metric; its reflections have no versor form in Cl({rs.dim})"
        )
    order = _resolve_order(rs, order)
    simple = rs.simple_multivectors()
    mv = _normalized_product([simple[i - 1] for i in order])
    versor = Versor.from_multivector(mv, normalized=True, length=len(order))

    w = mv.to_float()
    power = w
    for k in range(1, cap + 1):
        sign = _power_sign(power, tol)
        if sign:
            logger.info("Coxeter versor of %s (order %s): h = %d, W^h = %+d", rs.label(), order, k, sign)
            return CoxeterVersor(versor, k, order, sign, rs.name)
        power = power * w
    raise OrderNotFoundError(f"W^k != +-1 for k <= {cap} ({rs.label()})")


def reflection_permutations(rs: RootSystem) -> List[Tuple[int, ...]]:
    """Permutation of the root indices induced by each simple reflection, in the declared metric."""
    perms = []
    for alpha in rs.simple_roots:
        image = []
        for rho in rs.roots:
            index = rs.index_of(reflect(rho, alpha, rs.metric))
            if index is None:
                raise FoldingError(f"reflection leaves the root set of {rs.label()}")
            image.append(index)
        perms.append(tuple(image))
    return perms


def compose(first: Tuple[int, ...], second: Tuple[int, ...]) -> Tuple[int, ...]:
    """Apply first, then second."""
    return tuple(second[i] for i in first)


def permutation_order(perm: Tuple[int, ...]) -> int:
    seen = [False] * len(perm)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        order = math.lcm(order, length)
    return order


def coxeter_number(rs: RootSystem, order: Optional[Sequence[int]] = None) -> int:
    """Order of the Coxeter element as a permutation of the roots; works in either metric."""
    order = _resolve_order(rs, order)
    perms = reflection_permutations(rs)
    element = tuple(range(len(rs.roots)))
    for i in order:
        element = compose(element, perms[i - 1])
    return permutation_order(element)


# ---- Perron-Frobenius vector and Coxeter plane ----

def symmetrized_cartan(cartan) -> np.ndarray:
    """S_ij = sign(A_ij) sqrt(A_ij A_ji), diagonal 2: the 2cos(pi/m) form."""
    a = cartan.to_numpy() if isinstance(cartan, CartanMatrix) else np.asarray(cartan, dtype=np.float64)
    product = np.clip(a * a.T, 0.0, None)
    s = np.sign(a) * np.sqrt(product)
    np.fill_diagonal(s, 2.0)
    return s


def _smallest_eigenpair(matrix: np.ndarray) -> Tuple[float, np.ndarray]:
    if np.allclose(matrix, matrix.T):
        values, vectors = linalg.eigh(matrix)
        return float(values[0]), vectors[:, 0]
    values, vectors = linalg.eig(matrix)
    index = int(np.argmin(values.real))
    return float(values[index].real), vectors[:, index].real


def pf_eigenvector(cartan) -> np.ndarray:
    """Eigenvector of the smallest eigenvalue, scaled so the first entry is 1."""
    a = cartan.to_numpy() if isinstance(cartan, CartanMatrix) else np.asarray(cartan, dtype=np.float64)
    _, vector = _smallest_eigenpair(a)
    vector = vector / vector[0]
    if np.any(vector <= 1e-12):
        raise NotFiniteTypeError(f"Perron-Frobenius vector has a non-positive entry: {vector}")
    return vector


def bicolor(diagram: CoxeterDiagram) -> Dict[int, str]:
    """Two-colour the diagram by BFS; the lowest node of each component is white."""
    if not diagram.is_forest():
        raise CyclicDiagramError("Coxeter diagram has a cycle")
    colors: Dict[int, str] = {}
    for start in diagram.nodes:
        if start in colors:
            continue
        colors[start] = "white"
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for other in diagram.neighbors(node):
                if other not in colors:
                    colors[other] = "black" if colors[node] == "white" else "white"
                    queue.append(other)
    return colors


def _orientation(diagram: CoxeterDiagram, order: Sequence[int]) -> frozenset:
    position = {node: i for i, node in enumerate(order)}
    return frozenset((a, b) if position[a] < position[b] else (b, a) for a, b, _ in diagram.edges)


def _is_bipartite(orientation: frozenset, nodes: Sequence[int]) -> bool:
    tails = {a for a, _ in orientation}
    heads = {b for _, b in orientation}
    return not any(n in tails and n in heads for n in nodes)


def source_flips(diagram: CoxeterDiagram, order: Sequence[int]) -> Tuple[int, ...]:
    """
    Sources to move, in turn, from the front of the word to its end until the
    orientation is bipartite. Each move conjugates the Coxeter element by the
    reflection of the moved node.
    """
    start = _orientation(diagram, order)
    parents = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if _is_bipartite(state, diagram.nodes):
            path = []
            while parents[state] is not None:
                state, node = parents[state]
                path.append(node)
            return tuple(reversed(path))
        heads = {b for _, b in state}
        for node in diagram.nodes:
            if node in heads:
                continue
            flipped = frozenset((b, a) if node in (a, b) else (a, b) for a, b in state)
            if flipped not in parents:
                parents[flipped] = (state, node)
                queue.append(flipped)
    raise CyclicDiagramError("no bipartite orientation reachable by source flips")


def _reflect_float(x: np.ndarray, unit: np.ndarray) -> np.ndarray:
    return x - 2.0 * np.dot(x, unit) * unit


@dataclass(frozen=True)
class CoxeterPlane:
    bivector: Multivector
    v1: np.ndarray
    w1: np.ndarray
    pf_vector: np.ndarray
    coloring: Dict[int, str]
    order: Tuple[int, ...]
    h: int
    flips: Tuple[int, ...] = ()

    def stabilization_error(self, cv: CoxeterVersor) -> float:
        """max |reverse(W) B W - B|."""
        w = cv.versor.mv.to_float()
        return (reverse(w) * self.bivector * w).max_abs_diff(self.bivector)

    def to_json(self) -> Dict[str, Any]:
        return {
            "order": list(self.order),
            "h": self.h,
            "bivector": [[blade, coeff] for blade, coeff in self.bivector.terms(1e-12)],
            "v1": [format_float(x) for x in self.v1],
            "w1": [format_float(x) for x in self.w1],
            "pf_vector": [format_float(x) for x in self.pf_vector],
            "white": sorted(n for n, c in self.coloring.items() if c == "white"),
            "black": sorted(n for n, c in self.coloring.items() if c == "black"),
            "source_flips": list(self.flips),
        }


def coxeter_plane(rs: RootSystem, cartan: Optional[CartanMatrix] = None,
                  order: Optional[Sequence[int]] = None) -> CoxeterPlane:
    """
    v1 and w1 are PF-weighted sums of the reciprocal white and black simple roots;
    the bipartite plane is then carried to the plane of the requested Coxeter element.
    """
    if rs.metric != Metric.STANDARD:
        raise DegeneratePlaneError(f"{rs.label()} uses the {rs.metric.value} metric; no Coxeter plane in R^{rs.dim}")
    if rs.rank < 2:
        raise DegeneratePlaneError("a Coxeter plane needs rank >= 2")
    order = _resolve_order(rs, order)
    cartan = cartan or cartan_matrix(rs.simple_roots, rs.metric)
    diagram = extract_diagram(cartan)
    coloring = bicolor(diagram)

    s = symmetrized_cartan(cartan)
    eigenvalue, _ = _smallest_eigenpair(s)
    c = pf_eigenvector(s)
    h = int(round(math.pi / math.acos(1.0 - eigenvalue / 2.0)))

    units = rs.float_simple_roots()
    units = units / np.linalg.norm(units, axis=1)[:, None]
    gram = units @ units.T
    try:
        reciprocal = linalg.solve(gram, units, assume_a="pos")
    except linalg.LinAlgError as exc:
        raise DegeneratePlaneError(f"simple roots of {rs.label()} are dependent") from exc
    white = [i for i, node in enumerate(diagram.nodes) if coloring[node] == "white"]
    black = [i for i, node in enumerate(diagram.nodes) if coloring[node] == "black"]
    v1 = c[white] @ reciprocal[white]
    w1 = c[black] @ reciprocal[black]

    flips = source_flips(diagram, order)
    for node in reversed(flips):
        v1 = _reflect_float(v1, units[node - 1])
        w1 = _reflect_float(w1, units[node - 1])

    plane = wedge(Multivector.vector(tuple(v1)), Multivector.vector(tuple(w1)))
    if float(plane.norm2()) < 1e-24:
        raise DegeneratePlaneError("v1 and w1 are parallel")
    bivector = normalize_bivector(plane)
    logger.info("Coxeter plane of %s: h = %d, flips %s", rs.label(), h, list(flips))
    return CoxeterPlane(bivector, v1, w1, c, coloring, order, h, flips)


# ---- Factorization ----

@dataclass(frozen=True)
class EigenPlane:
    bivector: Multivector
    angle: float
    exponents: Tuple[int, int]
    basis: Tuple[np.ndarray, np.ndarray]
    kind: str = "rotation"

    @property
    def m(self) -> int:
        return self.exponents[0]

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "exponents": list(self.exponents),
            "angle_over_pi": float(format_float(self.angle / math.pi)),
            "bivector": [[blade, coeff] for blade, coeff in self.bivector.terms(1e-12)],
        }


@dataclass(frozen=True)
class CoxeterFactorization:
    name: Optional[str]
    h: int
    dim: int
    planes: Tuple[EigenPlane, ...]
    reflection_pairs: Tuple[EigenPlane, ...]
    single_reflection: Optional[np.ndarray]
    factors: Tuple[Versor, ...]
    residual: float
    action_matrix: np.ndarray = field(repr=False)

    def exponents(self) -> List[int]:
        values = []
        for plane in self.planes + self.reflection_pairs:
            values.extend(plane.exponents)
        if self.single_reflection is not None:
            values.append(self.h // 2)
        return sorted(values)

    def all_planes(self) -> Tuple[EigenPlane, ...]:
        return self.planes + self.reflection_pairs

    def max_cross_term(self) -> float:
        """Largest grade-0 or grade-2 coefficient of B_i B_j over i != j."""
        worst = 0.0
        bivectors = [p.bivector for p in self.all_planes()]
        for i, a in enumerate(bivectors):
            for b in bivectors[i + 1:]:
                product = a * b
                for k in (0, 2):
                    worst = max(worst, float(np.max(np.abs(grade_project(product, k).to_numpy()))))
        return worst

    def factor_form(self) -> str:
        """e.g. exp(pi/30 B1) exp(11pi/30 B2) N1, with N_k a product of two orthogonal vectors."""
        parts = []
        for index, plane in enumerate(self.planes, start=1):
            half_angle = Fraction(plane.m, self.h)
            numerator = "" if half_angle.numerator == 1 else str(half_angle.numerator)
            parts.append(f"exp({numerator}π/{half_angle.denominator} B{index})")
        parts.extend(f"N{k}" for k in range(1, len(self.reflection_pairs) + 1))
        if self.single_reflection is not None:
            parts.append("n")
        return " ".join(parts)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "h": self.h,
            "exponents": self.exponents(),
            "planes": [p.to_json() for p in self.all_planes()],
            "reflection_pairs": len(self.reflection_pairs),
            "single_reflection": self.single_reflection is not None,
            "factor_form": self.factor_form(),
            "residual": float(format_float(self.residual)),
        }


def action_matrix(versor: Versor, dim: int) -> np.ndarray:
    """Columns are the images of e_1..e_n under the sandwich action."""
    w = versor.to_float()
    columns = [sandwich(Multivector.basis(j, dim), w).vector_coords() for j in range(1, dim + 1)]
    return np.array(columns, dtype=np.float64).T


def _exponent(angle: float, h: int) -> int:
    value = angle * h / (2.0 * math.pi)
    m = int(round(value))
    if abs(value - m) > EXPONENT_TOLERANCE:
        raise FactorizationError(f"rotation angle {angle:.12g} gives non-integer exponent {value:.12g} (h={h})")
    return m


def _pair_plane(a: np.ndarray, b: np.ndarray, h: int) -> EigenPlane:
    bivector = wedge(Multivector.vector(tuple(a)), Multivector.vector(tuple(b)))
    return EigenPlane(bivector, math.pi, (h // 2, h // 2), (a, b), kind="reflection_pair")


def factorize_versor(cv: CoxeterVersor, dim: Optional[int] = None) -> CoxeterFactorization:
    """Split W into commuting factors on the orthogonal invariant planes of its action."""
    n = dim or cv.dim
    h = cv.h
    m = action_matrix(cv.versor, n)
    t, z = linalg.schur(m, output="real")
    logger.debug("Schur form diagonal for %s: %s", cv.name, np.round(np.diag(t), 12).tolist())

    planes: List[EigenPlane] = []
    minus_one: List[np.ndarray] = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > BLOCK_TOLERANCE:
            u, v = z[:, i], z[:, i + 1]
            image = m @ u
            angle = math.atan2(float(v @ image), float(u @ image))
            if angle < 0:
                v, angle = -v, -angle
            if abs(angle - math.pi) < EIGENVALUE_TOLERANCE:
                minus_one.extend([u, v])
            else:
                bivector = wedge(Multivector.vector(tuple(u)), Multivector.vector(tuple(v)))
                exponent = _exponent(angle, h)
                planes.append(EigenPlane(bivector, angle, (exponent, h - exponent), (u, v)))
            i += 2
            continue
        eigenvalue = t[i, i]
        if abs(eigenvalue + 1.0) < EIGENVALUE_TOLERANCE:
            minus_one.append(z[:, i])
        elif abs(eigenvalue - 1.0) < EIGENVALUE_TOLERANCE:
            raise FactorizationError(f"{cv.name}: the Coxeter element fixes a vector")
        else:
            raise FactorizationError(f"{cv.name}: real eigenvalue {eigenvalue:.12g} of an orthogonal map")
        i += 1

    planes.sort(key=lambda p: p.m)
    pairs = tuple(_pair_plane(minus_one[k], minus_one[k + 1], h) for k in range(0, len(minus_one) - 1, 2))
    single = minus_one[-1] if len(minus_one) % 2 else None

    factors = [exp_bivector(p.bivector, p.angle / 2.0) for p in planes]
    for pair in pairs:
        a, b = pair.basis
        factors.append(Versor.from_vectors([Multivector.vector(tuple(a)), Multivector.vector(tuple(b))]))
    if single is not None:
        factors.append(Versor.from_multivector(Multivector.vector(tuple(single)), normalized=True))

    product = factors[0]
    for factor in factors[1:]:
        product = product * factor
    w = cv.versor.mv.to_float()
    residual = min(product.mv.max_abs_diff(w), product.mv.max_abs_diff(-w))
    if residual > RESIDUAL_TOLERANCE:
        raise FactorizationError(f"{cv.name}: reassembled product differs from +-W by {residual:.3g}")

    fact = CoxeterFactorization(cv.name, h, n, tuple(planes), pairs, single, tuple(factors), residual, m)
    logger.info("Factorized %s: h = %d, exponents %s, residual %.3g", cv.name, h, fact.exponents(), residual)
    return fact


# ---- Folding ----

@dataclass(frozen=True)
class FoldingMap:
    pairs: Tuple[Tuple[int, int], ...]
    folded_generators: Optional[Tuple[Versor, ...]]
    target_coxeter_matrix: Tuple[Tuple[int, ...], ...]
    permutations: Tuple[Tuple[int, ...], ...] = field(repr=False)
    name: Optional[str] = None

    def chain_orders(self) -> List[int]:
        """m_{a,a+1} along the folded generators."""
        return [self.target_coxeter_matrix[a][a + 1] for a in range(len(self.pairs) - 1)]

    def diagram(self) -> CoxeterDiagram:
        k = len(self.pairs)
        edges = tuple(
            (a + 1, b + 1, self.target_coxeter_matrix[a][b])
            for a in range(k) for b in range(a + 1, k)
            if self.target_coxeter_matrix[a][b] > 2
        )
        return CoxeterDiagram(tuple(range(1, k + 1)), edges)

    def folded_versor(self) -> Versor:
        """Product of the folded generators in pair order."""
        if self.folded_generators is None:
            raise FoldingError("folded generators have no versor form in the reduced metric")
        product = self.folded_generators[0]
        for g in self.folded_generators[1:]:
            product = product * g
        return product

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "pairs": [list(p) for p in self.pairs],
            "coxeter_matrix": [list(row) for row in self.target_coxeter_matrix],
            "chain_orders": self.chain_orders(),
            "diagram": self.diagram().to_json(),
        }


def fold_diagram(rs: RootSystem, pairs: Optional[Sequence[Tuple[int, int]]] = None,
                 cap: int = FOLD_ORDER_CAP) -> FoldingMap:
    """Replace orthogonal pairs of simple reflections by their products and read off the new Coxeter matrix."""
    pairs = tuple(tuple(p) for p in (pairs if pairs is not None else rs.fold_pairs or ()))
    if not pairs:
        raise FoldingError(f"no folding pairs given for {rs.label()}")
    used = [i for p in pairs for i in p]
    if any(len(p) != 2 for p in pairs) or any(i < 1 or i > rs.rank for i in used):
        raise FoldingError(f"pairs must be index pairs in 1..{rs.rank}: {pairs}")
    if len(set(used)) != len(used):
        raise FoldingError(f"pairs overlap: {pairs}")
    for i, j in pairs:
        value = pairing(rs.simple_roots[i - 1], rs.simple_roots[j - 1], rs.metric)
        if abs(float(value)) > ORTHOGONALITY_TOLERANCE:
            raise FoldingError(f"simple roots {i} and {j} are not orthogonal ({value})")

    reflections = reflection_permutations(rs)
    identity = tuple(range(len(rs.roots)))
    generators = []
    for i, j in pairs:
        g = compose(reflections[i - 1], reflections[j - 1])
        if compose(g, g) != identity:
            raise FoldingError(f"folded generator ({i},{j}) is not an involution")
        generators.append(g)

    k = len(pairs)
    matrix = [[1] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            order = permutation_order(compose(generators[a], generators[b]))
            if order > cap:
                raise FoldingError(f"order of folded product ({a + 1},{b + 1}) exceeds {cap}")
            matrix[a][b] = matrix[b][a] = order

    versors = None
    if rs.metric == Metric.STANDARD:
        simple = rs.simple_multivectors()
        versors = tuple(
            Versor.from_multivector(_normalized_product([simple[i - 1], simple[j - 1]]), normalized=True, length=2)
            for i, j in pairs
        )
    logger.info("Folded %s by %s: chain orders %s", rs.label(), list(pairs),
                [matrix[a][a + 1] for a in range(k - 1)])
    return FoldingMap(pairs, versors, tuple(tuple(row) for row in matrix), tuple(generators), rs.name)


# ---- Projections ----

@dataclass(frozen=True)
class ProjectedPoint:
    root_index: int
    x: float
    y: float
    radius: float
    orbit_id: int


@dataclass(frozen=True)
class PlaneProjection:
    points: Tuple[ProjectedPoint, ...]
    period: int
    name: Optional[str] = None
    angle: Optional[float] = None
    exponents: Optional[Tuple[int, int]] = None
    rotation_error: Optional[float] = None

    def radii(self, tol: float = ORBIT_TOLERANCE) -> List[float]:
        """Distinct radii, ascending, clustered within tol."""
        distinct: List[float] = []
        for r in sorted(p.radius for p in self.points):
            if not distinct or r - distinct[-1] > tol:
                distinct.append(r)
        return distinct

    def orbit_sizes(self) -> Dict[int, int]:
        sizes: Dict[int, int] = {}
        for p in self.points:
            sizes[p.orbit_id] = sizes.get(p.orbit_id, 0) + 1
        return sizes

    def origin_roots(self, tol: float = ORIGIN_TOLERANCE) -> List[int]:
        return [p.root_index for p in self.points if p.radius < tol]

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "root_index": p.root_index,
                "x": format_float(p.x),
                "y": format_float(p.y),
                "radius": format_float(p.radius),
                "orbit_id": p.orbit_id,
            }
            for p in self.points
        ]


def _assign_orbits(coords: np.ndarray, period: int, tol: float = ORBIT_TOLERANCE) -> List[int]:
    """Cluster by radius, then by phase modulo 2*pi/period (circularly) within each radius."""
    radius = np.hypot(coords[:, 0], coords[:, 1])
    step = 2.0 * math.pi / period
    phase = np.mod(np.arctan2(coords[:, 1], coords[:, 0]), step)
    orbit = [-1] * len(coords)
    next_id = 0

    origin = [i for i in range(len(coords)) if radius[i] < ORIGIN_TOLERANCE]
    ring_points = sorted((i for i in range(len(coords)) if radius[i] >= ORIGIN_TOLERANCE), key=lambda i: radius[i])
    if origin:
        for i in origin:
            orbit[i] = next_id
        next_id += 1

    rings: List[List[int]] = []
    for i in ring_points:
        if rings and radius[i] - radius[rings[-1][-1]] <= tol:
            rings[-1].append(i)
        else:
            rings.append([i])

    for ring in rings:
        by_phase = sorted(ring, key=lambda i: phase[i])
        groups: List[List[int]] = []
        for i in by_phase:
            if groups and phase[i] - phase[groups[-1][-1]] <= tol:
                groups[-1].append(i)
            else:
                groups.append([i])
        if len(groups) > 1 and phase[groups[0][0]] + step - phase[groups[-1][-1]] <= tol:
            groups[0] = groups.pop() + groups[0]
        for group in groups:
            for i in group:
                orbit[i] = next_id
            next_id += 1
    return orbit


def _project(rs: RootSystem, u1: np.ndarray, u2: np.ndarray, period: int) -> Tuple[np.ndarray, List[ProjectedPoint]]:
    roots = rs.float_roots()
    coords = np.column_stack([roots @ u1, roots @ u2])
    orbits = _assign_orbits(coords, period)
    points = [
        ProjectedPoint(i, float(x), float(y), float(math.hypot(x, y)), orbits[i])
        for i, (x, y) in enumerate(coords)
    ]
    return coords, points


def _orthonormal_pair(v1: np.ndarray, w1: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n1 = np.linalg.norm(v1)
    if n1 < 1e-12:
        raise DegeneratePlaneError("first spanning vector is zero")
    u1 = v1 / n1
    rest = w1 - np.dot(w1, u1) * u1
    n2 = np.linalg.norm(rest)
    if n2 < 1e-12:
        raise DegeneratePlaneError("spanning vectors are parallel")
    return u1, rest / n2


def project_to_plane(rs: RootSystem, plane: CoxeterPlane) -> PlaneProjection:
    """Gram-Schmidt on (v1, w1), then (x, y, radius, orbit) for every root."""
    if rs.dim != len(plane.v1):
        raise DegeneratePlaneError(f"plane lives in R^{len(plane.v1)}, roots in R^{rs.dim}")
    u1, u2 = _orthonormal_pair(plane.v1, plane.w1)
    _, points = _project(rs, u1, u2, plane.h)
    projection = PlaneProjection(tuple(points), plane.h, rs.name, 2.0 * math.pi / plane.h, (1, plane.h - 1))
    logger.info("Projected %d roots of %s: %d radii, %d orbits", len(points), rs.label(),
                len(projection.radii()), len(projection.orbit_sizes()))
    return projection


def eigenplane_projections(rs: RootSystem, fact: CoxeterFactorization) -> List[PlaneProjection]:
    """Project into every invariant plane and measure how far the action is from rotation by 2*pi*m/h."""
    if rs.dim != fact.dim:
        raise DegeneratePlaneError(f"factorization lives in R^{fact.dim}, roots in R^{rs.dim}")
    roots = rs.float_roots()
    images = roots @ fact.action_matrix.T
    out = []
    for plane in fact.all_planes():
        u1, u2 = plane.basis
        period = fact.h // math.gcd(plane.m, fact.h)
        coords, points = _project(rs, u1, u2, period)
        moved = np.column_stack([images @ u1, images @ u2])
        c, s = math.cos(plane.angle), math.sin(plane.angle)
        rotated = coords @ np.array([[c, s], [-s, c]])
        error = float(np.max(np.abs(moved - rotated))) if len(coords) else 0.0
        projection = PlaneProjection(tuple(points), period, rs.name, plane.angle, plane.exponents, error)
        origin = projection.origin_roots()
        logger.info("Plane m=%d of %s: rotation error %.3g, %d roots at the origin",
                    plane.m, rs.label(), error, len(origin))
        out.append(projection)
    return out
