"""
Versor groups generated by root vectors, the 3D -> 4D spinor induction, and the
construction of E8 from the 240 icosahedral pinors under the reduced inner product.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from clifford import Multivector, Versor, pseudoscalar, reverse, sandwich
from roots import (
    E8_FOLD_PAIRS,
    Metric,
    RootAxiomReport,
    RootSystem,
    Vector,
    dot,
    e8_reduced_simple_roots,
    load_catalog,
    scale,
    verify_root_axioms,
)
from scalars import TAU, QuadScalar, format_scalar

logger = logging.getLogger(__name__)

GROUP_CAP = 10000

# 4D coordinates of a Cl(3) spinor: (1, e1e2, e3e1, e2e3) as (blade mask, sign).
SPINOR_COORDINATES = ((0b000, 1), (0b011, 1), (0b101, -1), (0b110, 1))


class NotUnitNormalizableError(ValueError):
    """A root cannot be scaled to unit length inside its scalar field."""


class GroupCapExceeded(RuntimeError):
    """Versor closure grew past the cap."""


class InductionError(RuntimeError):
    """The induced 4D vectors fail the root-system axioms."""


class PipelineError(RuntimeError):
    """The E8 construction did not reproduce its target set."""


@dataclass(frozen=True)
class VersorGroup:
    dim: int
    elements: Tuple[Multivector, ...]
    kind: str
    name: Optional[str] = None
    field: Optional[int] = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def element_set(self) -> set:
        return set(self.elements)

    def versors(self) -> List[Versor]:
        return [Versor.from_multivector(x, normalized=True) for x in self.elements]

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "order": len(self.elements),
            "elements": [x.terms() for x in self.elements],
        }


def unit_root(vector: Vector) -> Vector:
    """vector / |vector| with the square root taken exactly in the vector's field."""
    norm2 = dot(vector, vector)
    if not isinstance(norm2, QuadScalar):
        raise NotUnitNormalizableError("versor groups need the exact scalar layer")
    length = norm2.sqrt_exact()
    if length is None:
        raise NotUnitNormalizableError(f"|root|^2 = {norm2} has no square root in Q(sqrt({norm2.d}))")
    inverse = length.inverse()
    return tuple(x * inverse for x in vector)


def pinor_closure(rs: RootSystem, cap: int = GROUP_CAP) -> VersorGroup:
    """Close the unit root vectors under the geometric product."""
    if not rs.is_exact:
        raise NotUnitNormalizableError("versor groups need the exact scalar layer")
    generators = []
    seen_generators = set()
    for root in rs.roots:
        mv = Multivector.vector(unit_root(root), rs.field)
        if mv not in seen_generators:
            seen_generators.add(mv)
            generators.append(mv)

    identity = Multivector.scalar(1, rs.dim, rs.field)
    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in generators:
            product = current * g
            if product in seen:
                continue
            seen.add(product)
            elements.append(product)
            queue.append(product)
            if len(elements) > cap:
                raise GroupCapExceeded(f"pinor closure exceeded {cap} elements")
    logger.info("Pinor closure of %s: %d generators -> %d pinors", rs.label(), len(generators), len(elements))
    return VersorGroup(rs.dim, tuple(elements), "pin", name=rs.name, field=rs.field)


def spin_subgroup(group: VersorGroup) -> VersorGroup:
    """Even-parity elements."""
    if group.kind == "spin":
        return group
    even = tuple(x for x in group.elements if x.parity() == "even")
    logger.info("Spin subgroup of %s: %d of %d", group.name, len(even), len(group))
    return VersorGroup(group.dim, even, "spin", name=group.name, field=group.field)


@dataclass
class GroupClosureReport:
    closed: bool
    has_identity: bool
    has_minus_identity: bool
    reverse_closed: bool
    witness: Optional[Tuple[Multivector, Multivector]] = None

    @property
    def passed(self) -> bool:
        return self.closed and self.has_identity and self.has_minus_identity and self.reverse_closed


def verify_group_closure(group: VersorGroup) -> GroupClosureReport:
    """Exhaustive product-table membership."""
    members = group.element_set()
    identity = Multivector.scalar(1, group.dim, group.field)
    witness = None
    for x in group.elements:
        for y in group.elements:
            if x * y not in members:
                witness = (x, y)
                break
        if witness:
            break
    return GroupClosureReport(
        closed=witness is None,
        has_identity=identity in members,
        has_minus_identity=-identity in members,
        reverse_closed=all(reverse(x) in members for x in group.elements),
        witness=witness,
    )


def action_permutations(group: VersorGroup, rs: RootSystem) -> set:
    """Distinct permutations of the root set induced by the sandwich action."""
    roots = rs.root_multivectors()
    permutations = set()
    for versor in group.versors():
        image = []
        for root in roots:
            index = rs.index_of(sandwich(root, versor).vector_coords())
            if index is None:
                raise InductionError("sandwich action leaves the root set")
            image.append(index)
        permutations.add(tuple(image))
    logger.debug("%d elements act as %d distinct permutations", len(group), len(permutations))
    return permutations


# ---- 4D induction ----

def spinor_coordinates(spinor: Multivector) -> Vector:
    coeffs = spinor.coeffs
    return tuple(coeffs[mask] if sign > 0 else -coeffs[mask] for mask, sign in SPINOR_COORDINATES)


def spinor_inner_product(r1: Multivector, r2: Multivector):
    """(R1, R2) = 1/2 (R1 R2~ + R2 R1~), a scalar."""
    total = r1 * reverse(r2) + r2 * reverse(r1)
    return total.scalar_part() / 2


@dataclass(frozen=True)
class Induced4DRootSystem:
    source: VersorGroup
    vectors4d: Tuple[Vector, ...]
    rootsystem: RootSystem
    report: RootAxiomReport


def induce_4d(group: VersorGroup) -> Induced4DRootSystem:
    """Read each Cl(3) spinor as a 4D vector and verify the result is a root system."""
    if group.dim != 3:
        raise InductionError(f"induction starts from Cl(3), got Cl({group.dim})")
    if any(x.parity() != "even" for x in group.elements):
        raise InductionError("induction needs a spin group (even versors only)")
    vectors = tuple(spinor_coordinates(x) for x in group.elements)
    rootsystem = RootSystem(
        dim=4,
        simple_roots=(),
        roots=vectors,
        metric=Metric.STANDARD,
        name=f"{group.name or 'spin'} induced",
        field=group.field,
    )
    report = verify_root_axioms(rootsystem)
    if not report.passed:
        raise InductionError(f"induced vectors from {group.name} are not a root system: {report.to_dict()}")
    logger.info("Induced %d 4D roots from %s", len(vectors), group.name)
    return Induced4DRootSystem(group, vectors, rootsystem, report)


@dataclass
class SymmetryReport:
    left: bool
    right: bool
    witness: Optional[Multivector] = None

    @property
    def passed(self) -> bool:
        return self.left and self.right


def spinorial_symmetry_check(group: VersorGroup) -> SymmetryReport:
    """x -> R x and x -> x R permute the group, hence the induced vector set."""
    members = group.element_set()
    left = right = True
    witness = None
    for r in group.elements:
        if left and {r * x for x in group.elements} != members:
            left, witness = False, r
        if right and {x * r for x in group.elements} != members:
            right, witness = False, witness or r
        if not (left or right):
            break
    return SymmetryReport(left, right, witness)


@dataclass(frozen=True)
class ConjugacyClass:
    size: int
    representative: Multivector
    elements: Tuple[Multivector, ...]

    def to_json(self) -> Dict[str, Any]:
        return {"size": self.size, "representative": self.representative.terms()}


def conjugacy_classes(group: VersorGroup) -> List[ConjugacyClass]:
    """Orbits of x -> g^-1 x g; for unit versors g^-1 = reverse(g)."""
    pairs = [(reverse(g), g) for g in group.elements]
    assigned = set()
    classes = []
    for x in group.elements:
        if x in assigned:
            continue
        orbit = []
        orbit_set = set()
        for inverse, g in pairs:
            y = inverse * x * g
            if y not in orbit_set:
                orbit_set.add(y)
                orbit.append(y)
        assigned |= orbit_set
        classes.append(ConjugacyClass(len(orbit), x, tuple(orbit)))
    classes.sort(key=lambda c: (c.size, -float(c.representative.coeffs[0]), str(c.representative)))
    logger.info("%s: %d conjugacy classes", group.name, len(classes))
    return classes


# ---- E8 from H3 ----

@dataclass(frozen=True)
class E8Construction:
    rootsystem: RootSystem
    pinors: VersorGroup
    spinor_count: int
    matched_maps: Tuple[str, ...]
    maps_coincide: bool
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> Dict[str, Any]:
        return {
            "root_count": len(self.rootsystem.roots),
            "pinor_count": len(self.pinors),
            "spinor_count": self.spinor_count,
            "odd_map": {
                "matched": list(self.matched_maps),
                "left_equals_right": self.maps_coincide,
            },
            "simple_roots": [[format_scalar(x) for x in r] for r in self.rootsystem.simple_roots],
            "notes": list(self.notes),
        }


def e8_construction() -> E8Construction:
    """H3 pinors -> spinors S and tau*I*P -> H4 u tau*H4 with the reduced metric."""
    h3 = load_catalog("H3")
    pinors = pinor_closure(h3)
    even = [x for x in pinors.elements if x.parity() == "even"]
    odd = [x for x in pinors.elements if x.parity() == "odd"]
    i3 = pseudoscalar(3, 5)
    mapped = {
        "left": [(i3 * p) * TAU for p in odd],
        "right": [(p * i3) * TAU for p in odd],
    }
    coincide = set(mapped["left"]) == set(mapped["right"])

    h4 = load_catalog("H4").root_set()
    target = h4 | {scale(r, TAU) for r in h4}
    spinor_vectors = [spinor_coordinates(x) for x in even]
    matched = []
    chosen = None
    for side in ("left", "right"):
        vectors = spinor_vectors + [spinor_coordinates(x) for x in mapped[side]]
        if len(set(vectors)) == len(vectors) == len(target) and set(vectors) == target:
            matched.append(side)
            chosen = chosen or vectors
    if chosen is None:
        raise PipelineError("neither tau*I*p nor tau*p*I reproduces H4 u tau*H4")

    simple = e8_reduced_simple_roots()
    missing = [i + 1 for i, r in enumerate(simple) if tuple(r) not in target]
    if missing:
        raise PipelineError(f"simple roots {missing} are not among the 240 vectors")
    rootsystem = RootSystem(
        dim=4,
        simple_roots=tuple(tuple(r) for r in simple),
        roots=tuple(chosen),
        metric=Metric.REDUCED,
        name="E8",
        field=5,
        fold_pairs=E8_FOLD_PAIRS,
    )
    notes = ("I = e1e2e3 is central in Cl(3), so tau*I*p and tau*p*I agree",) if coincide else ()
    logger.info("E8 from H3: %d roots, odd map matched by %s", len(chosen), ", ".join(matched))
    return E8Construction(rootsystem, pinors, len(even), tuple(matched), coincide, notes)


def e8_from_h3() -> RootSystem:
    return e8_construction().rootsystem
