"""Canonical projective transformations of M = F + {inf}.

A homography is an invertible coefficient quadruple (a,b,c,d) acting by
x -> (a*x+b)/(c*x+d), taken modulo nonzero scalars.  The canonical
representative scales the first nonzero coefficient in (a,b,c,d) order to 1,
so value equality coincides with equality as functions on M.

Involutions constructed from two point pairs use the anti-trace shape
((alpha, beta), (gamma, -alpha)): squaring such a matrix gives a scalar
multiple of the identity, so the two-pair constraints become a homogeneous
linear system in (alpha, beta, gamma) solvable by a cross product.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import DegenerateVol, PreconditionViolated, SingularMatrix
from .scalar import (
    INF,
    FieldSpec,
    Point,
    Scalar,
    SquareClass,
    is_inf,
    point_sort_key,
    points_of,
    sqrt,
    square_class,
)

Basis = Tuple[Point, Point, Point]


def check_basis(basis: Sequence[Point]) -> Basis:
    p, q, r = basis
    if p == q or q == r or p == r:
        raise PreconditionViolated("basis points must be pairwise distinct")
    return (p, q, r)


class HClass(enum.Enum):
    IDENTITY = "identity"
    INVOLUTION = "involution"
    TRANSLATION = "translation"
    DILATION = "dilation"
    PURE_ROTATION = "pure_rotation"

    def __repr__(self):
        return f"HClass.{self.name}"


@dataclass(frozen=True)
class Homography:
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    @classmethod
    def new(cls, a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> "Homography":
        det = a * d - b * c
        if det.is_zero:
            raise SingularMatrix(f"zero determinant for ({a.value},{b.value},{c.value},{d.value})")
        for lead in (a, b, c, d):
            if not lead.is_zero:
                return cls(a / lead, b / lead, c / lead, d / lead)
        raise SingularMatrix("all coefficients zero")

    @classmethod
    def from_ints(cls, field: FieldSpec, a, b, c, d) -> "Homography":
        return cls.new(field.scalar(a), field.scalar(b), field.scalar(c), field.scalar(d))

    @property
    def field(self) -> FieldSpec:
        return self.a.field

    @property
    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def coeffs(self) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x: Point) -> Point:
        return apply(self, x)

    def __repr__(self):
        vals = ",".join(str(s.value) for s in self.coeffs())
        return f"Homography[{vals}]"


def identity(field: FieldSpec) -> Homography:
    one, zero = field.one(), field.zero()
    return Homography.new(one, zero, zero, one)


def apply(h: Homography, x: Point) -> Point:
    if is_inf(x):
        if h.c.is_zero:
            return INF
        return h.a / h.c
    den = h.c * x + h.d
    if den.is_zero:
        return INF
    return (h.a * x + h.b) / den


def compose(g: Homography, h: Homography) -> Homography:
    """The homography applying h first, then g (matrix product g*h)."""
    return Homography.new(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def compose_all(*hs: Homography) -> Homography:
    out = hs[0]
    for h in hs[1:]:
        out = compose(out, h)
    return out


def inverse(h: Homography) -> Homography:
    return Homography.new(h.d, -h.b, -h.c, h.a)


def is_identity(h: Homography) -> bool:
    return h == identity(h.field)


def is_involution(h: Homography) -> bool:
    return not is_identity(h) and is_identity(compose(h, h))


def fixed_points(h: Homography) -> Tuple[Point, ...]:
    """Exact solutions of h(x) = x, sorted finite-ascending with inf last.

    Finite fixed points solve c*x^2 + (d-a)*x - b = 0; inf is fixed exactly
    when c = 0.  The identity is rejected: it fixes every point.
    """
    if is_identity(h):
        raise ValueError("identity fixes every point")
    out = []
    if h.c.is_zero:
        out.append(INF)
        lin = h.d - h.a
        if not lin.is_zero:
            out.append(h.b / lin)
    else:
        two = h.field.scalar(2)
        disc = (h.d - h.a) * (h.d - h.a) + two * two * h.b * h.c
        root = sqrt(disc)
        if root is not None:
            x1 = (h.a - h.d + root) / (two * h.c)
            if root.is_zero:
                out.append(x1)
            else:
                out.append(x1)
                out.append((h.a - h.d - root) / (two * h.c))
    return tuple(sorted(out, key=point_sort_key))


def classify(h: Homography) -> HClass:
    if is_identity(h):
        return HClass.IDENTITY
    if is_involution(h):
        return HClass.INVOLUTION
    n = len(fixed_points(h))
    if n == 1:
        return HClass.TRANSLATION
    if n == 2:
        return HClass.DILATION
    return HClass.PURE_ROTATION


def _vec(pt: Point, field: FieldSpec) -> Tuple[Scalar, Scalar]:
    # homogeneous coordinates: finite x = [x : 1], inf = [1 : 0]
    if is_inf(pt):
        return (field.one(), field.zero())
    return (pt, field.one())


def _field_of(points: Sequence[Point]) -> FieldSpec:
    for pt in points:
        if not is_inf(pt):
            return pt.field
    raise PreconditionViolated("at least one finite point required to infer the field")


def vol(p: Point, q: Point, r: Point, s: Point, field: Optional[FieldSpec] = None) -> Homography:
    """The unique involution sending p->q and r->s.

    Requires {p,q} and {r,s} disjoint.  Each constraint f(u) = v, written on
    the anti-trace matrix ((alpha,beta),(gamma,-alpha)) in homogeneous
    coordinates, is one linear equation in (alpha,beta,gamma); the solution
    ray is their cross product.  Raises DegenerateVol when the resulting
    matrix is singular or the constraints do not pin down a ray.
    """
    if {p, q} & {r, s}:
        raise PreconditionViolated("pairs {p,q} and {r,s} must be disjoint")
    fld = field or _field_of((p, q, r, s))

    def row(u: Point, v: Point):
        (x0, x1), (y0, y1) = _vec(u, fld), _vec(v, fld)
        # (alpha*x0 + beta*x1) * y1 - (gamma*x0 - alpha*x1) * y0 = 0
        return (x0 * y1 + x1 * y0, x1 * y1, -(x0 * y0))

    a1, b1, c1 = row(p, q)
    a2, b2, c2 = row(r, s)
    alpha = b1 * c2 - c1 * b2
    beta = c1 * a2 - a1 * c2
    gamma = a1 * b2 - b1 * a2
    if alpha.is_zero and beta.is_zero and gamma.is_zero:
        raise DegenerateVol("constraints do not determine an involution")
    det = -(alpha * alpha) - beta * gamma
    if det.is_zero:
        raise DegenerateVol("two-pair constraints force a singular matrix")
    h = Homography.new(alpha, beta, gamma, -alpha)
    if apply(h, p) != q or apply(h, r) != s:
        raise DegenerateVol("solved involution misses a constraint")
    return h


def _basis_matrix(basis: Basis, field: FieldSpec):
    # columns (lam*vec(r) | mu*vec(p)) chosen so the matrix sends 0,1,inf to p,q,r
    p, q, r = basis
    (p0, p1), (q0, q1), (r0, r1) = (_vec(x, field) for x in (p, q, r))
    den = r0 * p1 - r1 * p0
    lam = (q0 * p1 - q1 * p0) / den
    mu = (r0 * q1 - r1 * q0) / den
    return (lam * r0, mu * p0, lam * r1, mu * p1)


def hol(src: Sequence[Point], dst: Sequence[Point], field: Optional[FieldSpec] = None) -> Homography:
    """The unique homography carrying the ordered basis src to dst."""
    src, dst = check_basis(src), check_basis(dst)
    fld = field or _field_of(tuple(src) + tuple(dst))
    sa, sb, sc, sd = _basis_matrix(src, fld)
    da, db, dc, dd = _basis_matrix(dst, fld)
    # dst-matrix times adjugate of src-matrix
    return Homography.new(
        da * sd - db * sc,
        -(da * sb) + db * sa,
        dc * sd - dd * sc,
        -(dc * sb) + dd * sa,
    )


def det_class(h: Homography) -> SquareClass:
    """Square class of the canonical representative's determinant.

    Well defined on the projective class: rescaling by k multiplies the
    determinant by k^2, which never moves it between square classes.
    """
    return square_class(h.det)


def enumerate_homographies(field: FieldSpec) -> Iterator[Homography]:
    """All q^3 - q canonical homographies of a prime field."""
    if field.p is None:
        raise PreconditionViolated("only prime fields can be enumerated")
    one = field.one()
    zero = field.zero()
    els = list(field.elements())
    for b, c, d in itertools.product(els, repeat=3):
        if not (one * d - b * c).is_zero:
            yield Homography(one, b, c, d)
    for c, d in itertools.product(els, repeat=2):
        if not c.is_zero:
            yield Homography(zero, one, c, d)


def label_of(pt: Point, field: FieldSpec) -> int:
    """Carrier label: residues map to themselves, inf to p."""
    if is_inf(pt):
        return field.p
    return int(pt.value)


def point_of(label: int, field: FieldSpec) -> Point:
    if label == field.p:
        return INF
    return field.scalar(label)


def as_table(h: Homography) -> Tuple[int, ...]:
    """The homography as a permutation table over labels 0..p."""
    fld = h.field
    return tuple(label_of(apply(h, pt), fld) for pt in points_of(fld))
