"""
Dense multivector arithmetic for Euclidean Cl(n), 1 <= n <= 8.

Blades are bitmasks (bit i set means e_{i+1} is a factor). Coefficients live
either in an exact layer (tuple of QuadScalar over one field) or in a float
layer (numpy float64 array); the two layers never mix.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from scalars import FieldMismatchError, FloatScalar, QuadScalar, format_scalar

logger = logging.getLogger(__name__)

MAX_DIM = 8
ROTATION_PLANE_TOLERANCE = 1e-10
UNIT_TOLERANCE = 1e-9
GRADE_TOLERANCE = 1e-9


class DimensionMismatchError(ValueError):
    """Operands live in algebras of different dimension."""


class GradeError(ValueError):
    """A grade is out of range or a multivector has the wrong grades."""


class NotARotationPlaneError(ValueError):
    """A bivector does not square to -1."""


class VersorContractError(ValueError):
    """A versor is mixed-parity or not normalized where a unit versor is required."""


# ---- Blades ----

def blade_sign(a: int, b: int) -> int:
    """Sign of e_A e_B after reordering into canonical order (Euclidean metric)."""
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def blade_tables(dim: int):
    """Per-dimension product tables: python sign rows, float sign array, xor index array."""
    size = 1 << dim
    rows = tuple(tuple(blade_sign(i, j) for j in range(size)) for i in range(size))
    sign_array = np.array(rows, dtype=np.float64)
    span = np.arange(size)
    index_array = np.bitwise_xor.outer(span, span)
    disjoint = np.bitwise_and.outer(span, span) == 0
    logger.debug("Built blade tables for Cl(%d): %d entries", dim, size * size)
    return rows, sign_array, index_array, disjoint


def blade_grade(mask: int) -> int:
    return mask.bit_count()


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIM) if mask >> i & 1)


def blade_mask(name: str) -> int:
    if name == "1":
        return 0
    if not name.startswith("e") or len(name) < 2:
        raise ValueError(f"bad blade name {name!r}")
    mask = 0
    for ch in name[1:]:
        index = int(ch) - 1
        if index < 0 or index >= MAX_DIM or mask >> index & 1:
            raise ValueError(f"bad blade name {name!r}")
        mask |= 1 << index
    return mask


def _reverse_sign(grade: int) -> int:
    return -1 if (grade * (grade - 1) // 2) & 1 else 1


# ---- Multivector ----

Coefficient = Union[QuadScalar, FloatScalar, int, float, Fraction]


class Multivector:
    """Immutable element of Cl(dim) over the exact or the float scalar layer."""

    __slots__ = ("dim", "_coeffs", "_d")

    def __init__(self, dim: int, coeffs, d: Optional[int] = None):
        if dim < 1 or dim > MAX_DIM:
            raise DimensionMismatchError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
        size = 1 << dim
        if d is None:
            array = np.array(coeffs, dtype=np.float64)
            if array.shape != (size,):
                raise DimensionMismatchError(f"expected {size} coefficients, got {array.shape}")
            array.setflags(write=False)
            self._coeffs = array
        else:
            coeffs = tuple(coeffs)
            if len(coeffs) != size:
                raise DimensionMismatchError(f"expected {size} coefficients, got {len(coeffs)}")
            self._coeffs = coeffs
        self.dim = dim
        self._d = d

    # ---- Constructors ----

    @classmethod
    def zero(cls, dim: int, d: Optional[int] = None) -> "Multivector":
        if d is None:
            return cls(dim, np.zeros(1 << dim))
        z = QuadScalar.zero(d)
        return cls(dim, (z,) * (1 << dim), d)

    @classmethod
    def from_terms(cls, terms: Dict[int, Coefficient], dim: int, d: Optional[int] = None) -> "Multivector":
        if d is None:
            array = np.zeros(1 << dim)
            for mask, value in terms.items():
                array[mask] = float(value)
            return cls(dim, array)
        z = QuadScalar.zero(d)
        coeffs = [z] * (1 << dim)
        for mask, value in terms.items():
            coeffs[mask] = _to_exact(value, d)
        return cls(dim, coeffs, d)

    @classmethod
    def scalar(cls, value: Coefficient, dim: int, d: Optional[int] = None) -> "Multivector":
        if isinstance(value, QuadScalar):
            d = value.d
        return cls.from_terms({0: value}, dim, d)

    @classmethod
    def basis(cls, index: int, dim: int, d: Optional[int] = None) -> "Multivector":
        """Basis vector e_{index}, 1-based."""
        return cls.from_terms({1 << (index - 1): 1}, dim, d)

    @classmethod
    def blade(cls, name: str, dim: int, coeff: Coefficient = 1, d: Optional[int] = None) -> "Multivector":
        if isinstance(coeff, QuadScalar):
            d = coeff.d
        return cls.from_terms({blade_mask(name): coeff}, dim, d)

    @classmethod
    def vector(cls, coords: Sequence[Coefficient], d: Optional[int] = None) -> "Multivector":
        """Grade-1 multivector; exact when any coordinate is a QuadScalar or d is given."""
        if d is None:
            fields = {c.d for c in coords if isinstance(c, QuadScalar)}
            if len(fields) > 1:
                raise FieldMismatchError(f"vector mixes fields {sorted(fields)}")
            d = fields.pop() if fields else None
        return cls.from_terms({1 << i: c for i, c in enumerate(coords)}, len(coords), d)

    # ---- Views ----

    @property
    def is_exact(self) -> bool:
        return self._d is not None

    @property
    def field(self) -> Optional[int]:
        return self._d

    @property
    def coeffs(self):
        return self._coeffs

    def __getitem__(self, mask: int):
        if isinstance(mask, str):
            mask = blade_mask(mask)
        value = self._coeffs[mask]
        return value if self.is_exact else float(value)

    def _nonzero(self, tol: float = 0.0) -> Iterable[Tuple[int, Coefficient]]:
        if self.is_exact:
            return ((i, c) for i, c in enumerate(self._coeffs) if c)
        return ((int(i), float(self._coeffs[i])) for i in np.flatnonzero(np.abs(self._coeffs) > tol))

    def grades(self, tol: float = GRADE_TOLERANCE) -> Set[int]:
        return {blade_grade(mask) for mask, _ in self._nonzero(0.0 if self.is_exact else tol)}

    def parity(self, tol: float = GRADE_TOLERANCE) -> Optional[str]:
        parities = {g & 1 for g in self.grades(tol)}
        if len(parities) > 1:
            return None
        return "odd" if parities == {1} else "even"

    def scalar_part(self):
        value = self._coeffs[0]
        return value if self.is_exact else FloatScalar(float(value))

    def vector_coords(self) -> Tuple:
        values = tuple(self._coeffs[1 << i] for i in range(self.dim))
        return values if self.is_exact else tuple(float(v) for v in values)

    def to_float(self) -> "Multivector":
        if not self.is_exact:
            return self
        return Multivector(self.dim, [float(c) for c in self._coeffs])

    def to_numpy(self) -> np.ndarray:
        return np.array([float(c) for c in self._coeffs]) if self.is_exact else np.array(self._coeffs)

    # ---- Algebra ----

    def _check(self, other: "Multivector") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Cl({self.dim}) and Cl({other.dim}) cannot be combined")
        if other._d != self._d:
            raise FieldMismatchError(f"scalar layers differ: {self._d} vs {other._d}")

    def _scaled(self, value) -> "Multivector":
        if self.is_exact:
            factor = _to_exact(value, self._d)
            return Multivector(self.dim, [c * factor for c in self._coeffs], self._d)
        return Multivector(self.dim, self._coeffs * float(value))

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        if self.is_exact:
            return Multivector(self.dim, [x + y for x, y in zip(self._coeffs, other._coeffs)], self._d)
        return Multivector(self.dim, self._coeffs + other._coeffs)

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        if self.is_exact:
            return Multivector(self.dim, [-c for c in self._coeffs], self._d)
        return Multivector(self.dim, -self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float, Fraction, QuadScalar, FloatScalar)):
            return self._scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, Fraction, QuadScalar, FloatScalar)):
            return self._scaled(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, QuadScalar):
            return self._scaled(other.inverse())
        if isinstance(other, (int, Fraction)) and self.is_exact:
            return self._scaled(Fraction(1) / Fraction(other))
        if isinstance(other, (int, float, Fraction, FloatScalar)):
            return self._scaled(1.0 / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        if other.dim != self.dim or other._d != self._d:
            return False
        if self.is_exact:
            return self._coeffs == other._coeffs
        return bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self):
        if not self.is_exact:
            raise TypeError("float-layer multivectors are not hashable")
        return hash((self.dim, self._coeffs))

    def max_abs_diff(self, other: "Multivector") -> float:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"Cl({self.dim}) vs Cl({other.dim})")
        return float(np.max(np.abs(self.to_numpy() - other.to_numpy())))

    def is_close(self, other: "Multivector", tol: float = 1e-10) -> bool:
        return self.max_abs_diff(other) <= tol

    def reverse(self) -> "Multivector":
        return reverse(self)

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def norm2(self):
        """Scalar part of x * reverse(x)."""
        if self.is_exact:
            total = QuadScalar.zero(self._d)
            for _, c in self._nonzero():
                total = total + c * c
            return total
        return FloatScalar(float(np.dot(self._coeffs, self._coeffs)))

    # ---- Text ----

    def terms(self, tol: float = 0.0) -> List[Tuple[str, str]]:
        """(blade, coefficient) pairs in ascending bitmask order, zeros dropped."""
        return [(blade_name(mask), format_scalar(c)) for mask, c in self._nonzero(tol)]

    def __str__(self):
        parts = self.terms(1e-15)
        if not parts:
            return "0"
        return " + ".join(coeff if name == "1" else f"({coeff})*{name}" for name, coeff in parts)

    def __repr__(self):
        layer = f"d={self._d}" if self.is_exact else "float"
        return f"Multivector(dim={self.dim}, {layer}, {self.terms(1e-15)})"


def _to_exact(value, d: int) -> QuadScalar:
    if isinstance(value, QuadScalar):
        if value.d != d:
            raise FieldMismatchError(f"coefficient in d={value.d}, multivector in d={d}")
        return value
    if isinstance(value, (int, Fraction)):
        return QuadScalar.rational(value, d)
    raise FieldMismatchError(f"cannot place {type(value).__name__} in the exact layer")


# ---- Operations ----

def geometric_product(x: Multivector, y: Multivector) -> Multivector:
    x._check(y)
    dim = x.dim
    rows, sign_array, index_array, _ = blade_tables(dim)
    if not x.is_exact:
        weights = (sign_array * np.outer(x._coeffs, y._coeffs)).ravel()
        return Multivector(dim, np.bincount(index_array.ravel(), weights=weights, minlength=1 << dim))
    right = [(j, c) for j, c in enumerate(y._coeffs) if c]
    out: Dict[int, QuadScalar] = {}
    for i, ci in enumerate(x._coeffs):
        if not ci:
            continue
        row = rows[i]
        for j, cj in right:
            term = ci * cj
            if row[j] < 0:
                term = -term
            k = i ^ j
            previous = out.get(k)
            out[k] = term if previous is None else previous + term
    zero = QuadScalar.zero(x._d)
    return Multivector(dim, [out.get(k, zero) for k in range(1 << dim)], x._d)


def wedge(u: Multivector, v: Multivector) -> Multivector:
    """Outer product: blade pairs sharing a basis vector drop out."""
    u._check(v)
    dim = u.dim
    rows, sign_array, index_array, disjoint = blade_tables(dim)
    if not u.is_exact:
        weights = (sign_array * disjoint * np.outer(u._coeffs, v._coeffs)).ravel()
        return Multivector(dim, np.bincount(index_array.ravel(), weights=weights, minlength=1 << dim))
    out: Dict[int, QuadScalar] = {}
    right = [(j, c) for j, c in enumerate(v._coeffs) if c]
    for i, ci in enumerate(u._coeffs):
        if not ci:
            continue
        for j, cj in right:
            if i & j:
                continue
            term = ci * cj if rows[i][j] > 0 else -(ci * cj)
            out[i | j] = term if (i | j) not in out else out[i | j] + term
    zero = QuadScalar.zero(u._d)
    return Multivector(dim, [out.get(k, zero) for k in range(1 << dim)], u._d)


def reverse(x: Multivector) -> Multivector:
    size = 1 << x.dim
    if x.is_exact:
        return Multivector(
            x.dim,
            [c if _reverse_sign(blade_grade(m)) > 0 else -c for m, c in enumerate(x._coeffs)],
            x._d,
        )
    signs = np.array([_reverse_sign(blade_grade(m)) for m in range(size)], dtype=np.float64)
    return Multivector(x.dim, x._coeffs * signs)


def grade_project(x: Multivector, k: int) -> Multivector:
    if k < 0 or k > x.dim:
        raise GradeError(f"grade {k} out of range for Cl({x.dim})")
    if x.is_exact:
        zero = QuadScalar.zero(x._d)
        return Multivector(x.dim, [c if blade_grade(m) == k else zero for m, c in enumerate(x._coeffs)], x._d)
    keep = np.array([blade_grade(m) == k for m in range(1 << x.dim)])
    return Multivector(x.dim, np.where(keep, x._coeffs, 0.0))


def inner_product(u: Multivector, v: Multivector):
    """Grade-0 part of uv for grade-1 arguments."""
    u._check(v)
    if not u.grades() <= {1} or not v.grades() <= {1}:
        raise GradeError("inner_product takes grade-1 arguments")
    if u.is_exact:
        total = QuadScalar.zero(u._d)
        for a, b in zip(u.vector_coords(), v.vector_coords()):
            total = total + a * b
        return total
    return FloatScalar(float(np.dot(u.vector_coords(), v.vector_coords())))


def pseudoscalar(dim: int, d: Optional[int] = None) -> Multivector:
    return Multivector.from_terms({(1 << dim) - 1: 1}, dim, d)


def hodge_dual_3d(x: Multivector) -> Multivector:
    """Right multiplication by I = e1e2e3 (central in Cl(3))."""
    if x.dim != 3:
        raise DimensionMismatchError(f"hodge_dual_3d needs Cl(3), got Cl({x.dim})")
    return x * pseudoscalar(3, x.field)


# ---- Versors ----

@dataclass(frozen=True)
class Versor:
    """Homogeneous-parity multivector, optionally marked as a unit versor."""

    mv: Multivector
    parity: str
    normalized: bool = False
    length: Optional[int] = None

    @classmethod
    def from_multivector(cls, mv: Multivector, normalized: Optional[bool] = None,
                         length: Optional[int] = None) -> "Versor":
        parity = mv.parity()
        if parity is None:
            raise VersorContractError("versor must be purely even or purely odd")
        if normalized is None:
            normalized = is_unit(mv)
        return cls(mv, parity, normalized, length)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Multivector]) -> "Versor":
        if not vectors:
            raise VersorContractError("empty vector product")
        product = vectors[0]
        for vector in vectors[1:]:
            product = product * vector
        return cls.from_multivector(product, length=len(vectors))

    def __mul__(self, other: "Versor") -> "Versor":
        if not isinstance(other, Versor):
            return NotImplemented
        parity = "even" if self.parity == other.parity else "odd"
        length = None if self.length is None or other.length is None else self.length + other.length
        return Versor(self.mv * other.mv, parity, self.normalized and other.normalized, length)

    def reverse(self) -> "Versor":
        return Versor(reverse(self.mv), self.parity, self.normalized, self.length)

    def to_float(self) -> "Versor":
        return Versor(self.mv.to_float(), self.parity, self.normalized, self.length)


def is_unit(mv: Multivector, tol: float = UNIT_TOLERANCE) -> bool:
    """x * reverse(x) == 1, exactly or within tol."""
    product = mv * reverse(mv)
    one = Multivector.scalar(1, mv.dim, mv.field)
    if mv.is_exact:
        return product == one
    return product.is_close(one, tol)


def sandwich(v: Multivector, a: Versor) -> Multivector:
    """reverse(A) v A for even A, -reverse(A) v A for odd A; a lone vector reflects."""
    if not a.normalized:
        raise VersorContractError("sandwich needs a normalized versor")
    if not v.grades() <= {1}:
        raise GradeError("sandwich acts on grade-1 multivectors")
    image = reverse(a.mv) * v * a.mv
    if a.parity == "odd":
        image = -image
    return grade_project(image, 1)


def exp_bivector(bivector: Multivector, theta) -> Versor:
    """cos(theta) + B sin(theta) for a unit bivector B (B*B = -1), float layer."""
    b = bivector.to_float()
    square = b * b
    minus_one = Multivector.scalar(-1.0, b.dim)
    if not b.grades(ROTATION_PLANE_TOLERANCE) <= {2} or not square.is_close(minus_one, ROTATION_PLANE_TOLERANCE):
        raise NotARotationPlaneError("bivector does not square to -1")
    angle = float(theta)
    mv = Multivector.scalar(math.cos(angle), b.dim) + b * math.sin(angle)
    return Versor(mv, "even", True)


def normalize_bivector(bivector: Multivector) -> Multivector:
    """Scale a float 2-blade so that it squares to -1."""
    b = bivector.to_float()
    magnitude = math.sqrt(float((b * reverse(b)).scalar_part()))
    if magnitude == 0.0:
        raise NotARotationPlaneError("zero bivector")
    return b / magnitude
