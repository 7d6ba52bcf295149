"""Polynomials on a simplex in barycentric monomial form, with exact algebra.

A degree-k polynomial is stored as the coefficients c_alpha of
``sum_alpha c_alpha prod_i lambda_i^alpha_i`` over all multi-indices alpha of
total degree k, one slot per vertex of the simplex.  The representation is
unique, and every operation below (evaluation, directional derivatives,
traces onto faces, products, normalized moments) is closed and exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .exact import rational_str
from .simplicial import BarycentricFrame, Simplex


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> tuple:
    """All multi-indices of the given total degree, in lexicographic order."""
    if parts < 1 or total < 0:
        return ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def composition_index(total: int, parts: int) -> dict:
    return {alpha: i for i, alpha in enumerate(compositions(total, parts))}


def multi_factorial(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def multinomial(n: int, alpha: Sequence[int]) -> int:
    return math.factorial(n) // multi_factorial(alpha)


class BBPoly:
    """A polynomial on one simplex in barycentric monomial form."""

    __slots__ = ("frame", "k", "coeffs")

    def __init__(self, frame: BarycentricFrame, k: int,
                 coeffs: Optional[Mapping[tuple, Fraction]] = None):
        if k < 0:
            raise ValueError("degree must be non-negative")
        n = len(frame.points)
        clean: dict[tuple, Fraction] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != n or any(a < 0 for a in alpha) or sum(alpha) != k:
                raise ValueError(f"bad multi-index {alpha} for degree {k}")
            c = Fraction(c)
            if c:
                clean[alpha] = c
        self.frame = frame
        self.k = k
        self.coeffs = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, frame: BarycentricFrame, k: int) -> "BBPoly":
        return cls(frame, k, {})

    @classmethod
    def monomial(cls, frame: BarycentricFrame, alpha: Sequence[int]) -> "BBPoly":
        alpha = tuple(alpha)
        return cls(frame, sum(alpha), {alpha: Fraction(1)})

    @classmethod
    def from_vector(cls, frame: BarycentricFrame, k: int, vec: Sequence) -> "BBPoly":
        idx = compositions(k, len(frame.points))
        if len(vec) != len(idx):
            raise ValueError("coefficient vector has the wrong length")
        return cls(frame, k, {a: Fraction(v) for a, v in zip(idx, vec) if v})

    @classmethod
    def affine(cls, frame: BarycentricFrame, gradient: Sequence, offset) -> "BBPoly":
        """The affine function gradient . x + offset, written on this frame."""
        n = len(frame.points)
        coeffs = {}
        for j, pt in enumerate(frame.points):
            val = sum((Fraction(g) * x for g, x in zip(gradient, pt)), Fraction(offset))
            if val:
                alpha = tuple(1 if t == j else 0 for t in range(n))
                coeffs[alpha] = val
        return cls(frame, 1, coeffs)

    # -- basic queries ------------------------------------------------------

    @property
    def simplex(self) -> Simplex:
        return self.frame.simplex

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_vector(self) -> list[Fraction]:
        idx = compositions(self.k, len(self.frame.points))
        zero = Fraction(0)
        return [self.coeffs.get(a, zero) for a in idx]

    def __eq__(self, other):
        return (
            isinstance(other, BBPoly)
            and self.simplex == other.simplex
            and self.k == other.k
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"BBPoly(simplex={self.simplex.vertex_ids}, k={self.k}, terms={len(self.coeffs)})"

    # -- algebra --------------------------------------------------------------

    def __add__(self, other: "BBPoly") -> "BBPoly":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, Fraction(0)) + c
        return BBPoly(self.frame, self.k, out)

    def __sub__(self, other: "BBPoly") -> "BBPoly":
        return self + other.scale(-1)

    def scale(self, factor) -> "BBPoly":
        f = Fraction(factor)
        return BBPoly(self.frame, self.k, {a: c * f for a, c in self.coeffs.items()})

    def _check_compatible(self, other: "BBPoly"):
        if self.simplex != other.simplex:
            raise ValueError("polynomials live on different simplices")
        if self.k != other.k:
            raise ValueError("polynomials have different declared degrees")

    def evaluate(self, point: Sequence) -> Fraction:
        lam = self.frame.lambda_at(point)
        total = Fraction(0)
        for alpha, c in self.coeffs.items():
            term = c
            for l, a in zip(lam, alpha):
                if a:
                    term *= l ** a
            total += term
        return total

    def directional_derivative(self, v: Sequence) -> "BBPoly":
        """Exact derivative along v, one degree lower (zero if constant)."""
        if self.k == 0:
            return BBPoly.zero(self.frame, 0)
        slopes = self.frame.directional(v)
        out: dict[tuple, Fraction] = {}
        for alpha, c in self.coeffs.items():
            for i, a in enumerate(alpha):
                if not a or not slopes[i]:
                    continue
                down = list(alpha)
                down[i] -= 1
                key = tuple(down)
                out[key] = out.get(key, Fraction(0)) + c * a * slopes[i]
        return BBPoly(self.frame, self.k - 1, out)

    def derivative_multi(self, beta: Sequence[int]) -> "BBPoly":
        """Cartesian partial derivative of mixed order beta (one slot per axis)."""
        d = self.frame.ambient_dim
        if len(beta) != d:
            raise ValueError("derivative order needs one slot per axis")
        p = self
        for axis, times in enumerate(beta):
            e = [0] * d
            e[axis] = 1
            for _ in range(times):
                p = p.directional_derivative(e)
        return p

    def trace(self, face: Simplex) -> "BBPoly":
        """Restriction onto a face: coefficients supported on its vertices."""
        cell_ids = self.simplex.vertex_ids
        try:
            positions = tuple(cell_ids.index(i) for i in face.vertex_ids)
        except ValueError:
            raise ValueError(f"{face} is not a face of {self.simplex}") from None
        face_frame = self.frame.face_frame(positions)
        keep = set(positions)
        out = {}
        for alpha, c in self.coeffs.items():
            if any(a and i not in keep for i, a in enumerate(alpha)):
                continue
            out[tuple(alpha[p] for p in positions)] = c
        return BBPoly(face_frame, self.k, out)

    def multiply(self, other: "BBPoly") -> "BBPoly":
        """Exact product (degrees add); plain monomial coefficient convolution."""
        if self.simplex != other.simplex:
            raise ValueError("polynomials live on different simplices")
        out: dict[tuple, Fraction] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = tuple(x + y for x, y in zip(a, b))
                prod = ca * cb
                got = out.get(key)
                out[key] = prod if got is None else got + prod
        return BBPoly(self.frame, self.k + other.k, out)

    def power(self, n: int) -> "BBPoly":
        out = BBPoly(self.frame, 0, {(0,) * len(self.frame.points): Fraction(1)})
        for _ in range(n):
            out = out.multiply(self)
        return out

    def elevate(self, k_new: int) -> "BBPoly":
        """Rewrite at a higher declared degree via the partition of unity."""
        if k_new < self.k:
            raise ValueError("cannot lower the degree")
        if k_new == self.k:
            return self
        extra = k_new - self.k
        n = len(self.frame.points)
        out: dict[tuple, Fraction] = {}
        for alpha, c in self.coeffs.items():
            for tau in compositions(extra, n):
                key = tuple(a + t for a, t in zip(alpha, tau))
                add = c * multinomial(extra, tau)
                got = out.get(key)
                out[key] = add if got is None else got + add
        return BBPoly(self.frame, k_new, out)

    def integrate_normalized(self) -> Fraction:
        """The volume-normalized integral over the simplex.

        Termwise the average of a barycentric monomial over an m-simplex is
        m! * prod(gamma_i!) / (m + |gamma|)!, independent of the embedding,
        so no metric volumes (and no square roots) ever appear.
        """
        m = self.frame.dim
        total = Fraction(0)
        mfac = math.factorial(m)
        for gamma, c in self.coeffs.items():
            total += c * Fraction(mfac * multi_factorial(gamma),
                                  math.factorial(m + sum(gamma)))
        return total

    def vanishing_order_at_vertex(self, i: int, r: int) -> bool:
        """True iff all Cartesian partials of order <= r vanish at vertex i."""
        if not 0 <= i <= self.frame.dim:
            raise ValueError("vertex position out of range")
        point = self.frame.points[i]
        d = self.frame.ambient_dim
        layer = [self]
        for n in range(r + 1):
            for p in layer:
                if p.evaluate(point) != 0:
                    return False
            if n == r:
                break
            next_layer = []
            for axis in range(d):
                e = [0] * d
                e[axis] = 1
                next_layer.extend(p.directional_derivative(e) for p in layer)
            layer = next_layer
        return True

    def to_json_dict(self) -> dict:
        return {
            "simplex": list(self.simplex.vertex_ids),
            "k": self.k,
            "coeffs": {
                ",".join(map(str, a)): rational_str(c)
                for a, c in sorted(self.coeffs.items())
            },
        }


def from_cartesian(frame: BarycentricFrame, terms: Mapping[tuple, Fraction],
                   degree: Optional[int] = None) -> BBPoly:
    """Convert a polynomial given by Cartesian monomial coefficients.

    ``terms`` maps exponent tuples (one slot per axis) to coefficients.  Each
    coordinate x_i is itself affine on the simplex, so monomials expand into
    products of degree-1 polynomials.
    """
    d = frame.ambient_dim
    axes = []
    for i in range(d):
        g = [Fraction(0)] * d
        g[i] = Fraction(1)
        axes.append(BBPoly.affine(frame, g, 0))
    total = max((sum(e) for e in terms), default=0)
    if degree is None:
        degree = total
    if degree < total:
        raise ValueError("declared degree is below the polynomial degree")
    n = len(frame.points)
    out = BBPoly.zero(frame, degree)
    for expo, coeff in sorted(terms.items()):
        mono = BBPoly(frame, 0, {(0,) * n: Fraction(coeff)})
        for axis, e in enumerate(expo):
            for _ in range(e):
                mono = mono.multiply(axes[axis])
        out = out + mono.elevate(degree)
    return out
