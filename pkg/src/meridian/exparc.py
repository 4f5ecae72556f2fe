"""Square-cone membership, orientations, arcs, and involution decompositions.

Over a prime field the square cone of a basis is the set of quadratic
residues in canonical position; over the rationals the positive cone plays
that role, making every statement here exactly decidable.  Orientations are
the two cosets of the determinant-square subgroup acting on ordered bases;
arcs are the orientation-selected thirds of the carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import homography as hg
from .errors import (
    IrrationalSqrt,
    NotInvolution,
    NotRotation,
    NotTranslation,
    PreconditionViolated,
)
from .report import Report
from .scalar import (
    INF,
    FieldSpec,
    Point,
    Scalar,
    SquareClass,
    format_point,
    is_inf,
    points_of,
    sqrt,
    square_class,
)

# ---------------------------------------------------------------------------
# square-cone membership
# ---------------------------------------------------------------------------


def mabf_contains(a: Point, l: Point, d: Point, t: Point,
                  field: Optional[FieldSpec] = None) -> bool:
    """Whether t lies in the cone of l over the anchors (a, d).

    Membership means the unique involution sending a->d and l->t has a fixed
    point.  t must avoid the anchors; t = l holds trivially.
    """
    if len({a, l, d}) != 3:
        raise PreconditionViolated("(a, l, d) must be pairwise distinct")
    if t in (a, d):
        raise PreconditionViolated("t must avoid the anchors")
    if t == l:
        return True
    f = hg.vol(a, d, l, t, field=field)
    return has_fixed_point(f)


def mabf_set(a: Point, l: Point, d: Point, field: FieldSpec) -> Set[Point]:
    """All cone members over a finite carrier."""
    if field.p is None:
        raise PreconditionViolated("cone enumeration needs a prime field")
    return {
        t for t in points_of(field)
        if t not in (a, d) and mabf_contains(a, l, d, t, field=field)
    }


def has_fixed_point(h: hg.Homography) -> bool:
    """Whether an involution fixes some point of M, by the square criterion.

    The fixed-point discriminant of an involution is a^2 + b*c, the negated
    determinant.  Over a prime field its squareness decides solvability
    exactly; over the rationals the positive cone stands in, so the answer
    is fixed-point existence in the real closure (the decidable shadow in
    which the exponential-meridian statements hold).
    """
    if not hg.is_involution(h):
        raise NotInvolution("fixed-point test is for involutions")
    disc = h.a * h.a + h.b * h.c
    return square_class(disc) is not SquareClass.NONSQUARE


def fixed_point_iff_det(h: hg.Homography) -> bool:
    """Consistency of the two fixed-point criteria for an involution.

    The involution has no fixed point exactly when its canonical determinant
    is in the square class; returns True when the biconditional holds for h.
    (It holds over the rationals and over GF(p) with p = 3 mod 4.)
    """
    return (not has_fixed_point(h)) == (hg.det_class(h) is SquareClass.SQUARE)


def in_G_plus(h: hg.Homography) -> bool:
    """Membership in the determinant-square subgroup."""
    return hg.det_class(h) is SquareClass.SQUARE


# ---------------------------------------------------------------------------
# decompositions over the rationals
# ---------------------------------------------------------------------------

_NINE_FACTORS = (
    (0, -6, 1, 0),
    (0, -5, 1, 0),
    (1, -1, 2, -1),
    (4, -5, 5, -4),
    (0, -4, 1, 0),
    (0, -1, 1, 0),
    (1, -1, 2, -1),
    (0, -5, 1, 0),
    (0, -6, 1, 0),
)


def _require_rationals(field: FieldSpec):
    if field.p is not None:
        raise PreconditionViolated("decompositions are implemented over the rationals")


def decompose_translation(tau: hg.Homography) -> List[hg.Homography]:
    """Nine fixed-point-free involutions composing to a rational translation.

    The translation is conjugated to x -> x-1 by the basis (some point, its
    preimage of that point, the fixed point), the fixed nine-factor identity
    for the normal form is conjugated back, and the factor list is returned
    in composition order.
    """
    _require_rationals(tau.field)
    if hg.classify(tau) is not hg.HClass.TRANSLATION:
        raise NotTranslation("input does not have exactly one fixed point")
    fld = tau.field
    (m,) = hg.fixed_points(tau)
    zero = next(pt for pt in (fld.zero(), fld.one(), INF) if pt != m)
    one = hg.apply(hg.inverse(tau), zero)
    g = hg.hol((zero, one, m), (fld.zero(), fld.one(), INF), field=fld)
    ginv = hg.inverse(g)
    factors = [
        hg.compose(ginv, hg.compose(hg.Homography.from_ints(fld, *coeffs), g))
        for coeffs in _NINE_FACTORS
    ]
    if hg.compose_all(*factors) != tau:
        raise NotTranslation("nine-factor identity failed to reproduce the input")
    return factors


def decompose_rotation(rho: hg.Homography) -> Tuple[hg.Homography, hg.Homography]:
    """Split a rational pure rotation as (fixed-point-free involution) . (translation).

    Normal form: anchor a point at infinity, its image at -1 and preimage at
    1 via the harmonic conjugate construction, so the rotation becomes
    x -> (x+b)/(1-x).  The split parameter is p = (b+2+2m)/b^2 with
    m = sqrt(1+b); a missing rational root raises IrrationalSqrt.
    """
    _require_rationals(rho.field)
    if hg.classify(rho) is not hg.HClass.PURE_ROTATION:
        raise NotRotation("input is not a fixed-point-free non-involution")
    fld = rho.field
    inf_pt: Point = INF
    a_pt = hg.apply(rho, inf_pt)
    one_pt = hg.apply(hg.inverse(rho), inf_pt)
    # harmonic conjugate of infinity over {a, one}: image of infinity under
    # the involution fixing both
    zero_pt = hg.apply(hg.vol(a_pt, a_pt, one_pt, one_pt, field=fld), inf_pt)
    g = hg.hol((zero_pt, one_pt, inf_pt), (fld.zero(), fld.one(), INF), field=fld)
    ginv = hg.inverse(g)
    normal = hg.compose(g, hg.compose(rho, ginv))
    b = hg.apply(normal, fld.zero())
    expected = hg.Homography.new(fld.one(), b, -fld.one(), fld.one())
    if normal != expected:
        raise NotRotation("normal form construction failed")
    m = sqrt(fld.one() + b)
    if m is None:
        raise IrrationalSqrt(f"1+b = {format_point(fld.one() + b)} has no rational root")
    two = fld.scalar(2)
    p = (b + two + two * m) / (b * b)
    pi_n = hg.Homography.new(fld.zero(), fld.one(), -p, fld.zero())
    tau_n = hg.Homography.new(-fld.one(), fld.one(), -p, -(p * b))
    pi = hg.compose(ginv, hg.compose(pi_n, g))
    tau = hg.compose(ginv, hg.compose(tau_n, g))
    if hg.compose(pi, tau) != rho:
        raise NotRotation("split failed to reproduce the input")
    if hg.classify(tau) is not hg.HClass.TRANSLATION or has_fixed_point(pi):
        raise NotRotation("split produced factors of the wrong shape")
    return pi, tau


# ---------------------------------------------------------------------------
# orientations and arcs
# ---------------------------------------------------------------------------


class Sign(Enum):
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"


@dataclass(frozen=True)
class Orientation:
    field: FieldSpec
    sign: Sign


def reference_basis(field: FieldSpec) -> Tuple[Point, Point, Point]:
    return (field.zero(), field.one(), INF)


def same_orientation(b1: Sequence[Point], b2: Sequence[Point],
                     field: Optional[FieldSpec] = None) -> bool:
    """Whether the basis-carrying homography has square-class determinant."""
    return in_G_plus(hg.hol(tuple(b1), tuple(b2), field=field))


def orientation_of(basis: Sequence[Point], field: Optional[FieldSpec] = None) -> Orientation:
    basis = hg.check_basis(basis)
    fld = field or hg._field_of(basis)
    sign = Sign.CLOCKWISE if same_orientation(reference_basis(fld), basis, field=fld) \
        else Sign.COUNTERCLOCKWISE
    return Orientation(fld, sign)


@dataclass(frozen=True)
class ArcSpec:
    a: Point
    b: Point
    orientation: Orientation

    def __post_init__(self):
        if self.a == self.b:
            raise PreconditionViolated("arc endpoints must differ")


def arc(field: FieldSpec, a: Point, b: Point, sign: Sign = Sign.CLOCKWISE) -> ArcSpec:
    return ArcSpec(a, b, Orientation(field, sign))


def arc_contains(spec: ArcSpec, t: Point) -> bool:
    """Whether (a, t, b) carries the arc's orientation; endpoints excluded."""
    if t in (spec.a, spec.b):
        return False
    return orientation_of((spec.a, t, spec.b), field=spec.orientation.field).sign \
        is spec.orientation.sign


# ---------------------------------------------------------------------------
# arc intersection casework
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcIntersection:
    """Symbolic description of Arc(a,b) & Arc(p,q) for one orientation."""

    clause: int
    kind: str          # "empty" | "arc" | "union" | "subset"
    arcs: Tuple[Tuple[Point, Point], ...] = ()
    subset: Optional[str] = None  # "pq_in_ab" | "ab_in_pq"

    def to_dict(self):
        d = {"clause": self.clause, "kind": self.kind}
        if self.kind in ("arc", "union"):
            d["arcs"] = [[format_point(x), format_point(y)] for x, y in self.arcs]
        if self.subset:
            d["subset"] = self.subset
        return d


def arc_intersect(field: FieldSpec, a: Point, b: Point, p: Point, q: Point,
                  sign: Sign = Sign.CLOCKWISE) -> ArcIntersection:
    """Case analysis of the intersection of two open arcs.

    Returns which of the seven endpoint configurations applies together with
    the intersection written as arcs over the original endpoints.
    """
    if a == b or p == q:
        raise PreconditionViolated("arcs need two distinct endpoints")
    ab = arc(field, a, b, sign)

    def inside(t):
        return arc_contains(ab, t)

    if p == a or q == b:
        if p == a and q == b:
            return ArcIntersection(1, "subset", ((p, q),), "pq_in_ab")
        if p == a:
            nested = inside(q)
        else:
            nested = inside(p)
        return ArcIntersection(1, "subset", (), "pq_in_ab" if nested else "ab_in_pq")
    if p == b:
        if inside(q):
            return ArcIntersection(2, "arc", ((a, q),))
        return ArcIntersection(2, "empty")
    if q == a:
        if inside(p):
            return ArcIntersection(3, "arc", ((p, b),))
        return ArcIntersection(3, "empty")
    pin, qin = inside(p), inside(q)
    if pin and qin:
        if arc_contains(arc(field, p, b, sign), q):
            return ArcIntersection(4, "arc", ((p, q),))
        return ArcIntersection(4, "union", ((p, b), (a, q)))
    if not pin and not qin:
        if arc_contains(arc(field, p, q, sign), a):
            return ArcIntersection(5, "arc", ((a, b),))
        return ArcIntersection(5, "empty")
    if pin:
        return ArcIntersection(6, "arc", ((p, b),))
    return ArcIntersection(7, "arc", ((a, q),))


def intersection_members(field: FieldSpec, inter: ArcIntersection,
                         a: Point, b: Point, p: Point, q: Point,
                         t: Point, sign: Sign) -> bool:
    """Evaluate the symbolic intersection at a sample point."""
    if inter.kind == "empty":
        return False
    if inter.kind == "subset":
        if inter.subset == "pq_in_ab":
            return arc_contains(arc(field, p, q, sign), t)
        return arc_contains(arc(field, a, b, sign), t)
    return any(arc_contains(arc(field, x, y, sign), t) for x, y in inter.arcs)


# ---------------------------------------------------------------------------
# partition and casework verification
# ---------------------------------------------------------------------------


def rational_grid() -> Tuple[Point, ...]:
    """Deterministic sample grid: -10..10 in steps of 1/3, plus infinity."""
    fld = FieldSpec.rationals()
    pts: List[Point] = [fld.scalar(Fraction(k, 3)) for k in range(-30, 31)]
    pts.append(INF)
    return tuple(pts)


def _grid_arc_members(field, a, b, sign, grid):
    return {t for t in grid if t not in (a, b) and arc_contains(arc(field, a, b, sign), t)}


def verify_partitions(field: FieldSpec) -> Report:
    """Partition and intersection casework.

    Rationals: the six-set carrier partition, the positive-cone three-way
    split, the arc partitions, the triple-cone emptiness, and the
    intersection casework, all on the deterministic grid.  Prime fields: the
    cone/anticone partition (expected to fail when -1 is a square, recorded
    as expected-negative), the fixed-point determinant criterion, the one
    in/one out rule for fixed points, and triple-cone emptiness for
    p = 3 mod 4.
    """
    rep = Report("partitions")
    if field.p is None:
        _verify_partitions_rationals(field, rep)
    else:
        _verify_partitions_prime(field, rep)
    return rep


def _verify_partitions_rationals(fld: FieldSpec, rep: Report):
    grid = rational_grid()
    zero, one, inf_pt = fld.zero(), fld.one(), INF
    two = fld.scalar(2)
    half = fld.scalar(Fraction(1, 2))
    neg_one = -fld.one()

    cones = [
        {t for t in grid if t not in (zero, inf_pt) and mabf_contains(zero, neg_one, inf_pt, t, field=fld)},
        {t for t in grid if t not in (one, inf_pt) and mabf_contains(one, two, inf_pt, t, field=fld)},
        {t for t in grid if t not in (one, zero) and mabf_contains(one, half, zero, t, field=fld)},
    ]
    singles = [{zero}, {one}, {inf_pt}]
    union = set().union(*cones, *singles)
    total = sum(len(s) for s in cones + singles)
    rep.add(
        "six_set_carrier_partition",
        union == set(grid) and total == len(grid),
        witness=sorted(map(format_point, set(grid) - union)),
    )

    positives = {t for t in grid if t not in (zero, inf_pt)
                 and mabf_contains(zero, one, inf_pt, t, field=fld)}
    below = {t for t in positives if t != one and mabf_contains(zero, half, one, t, field=fld)}
    above = {t for t in positives if t != one and mabf_contains(one, two, inf_pt, t, field=fld)}
    rep.add(
        "positive_cone_three_way_split",
        below | {one} | above == positives and not (below & above) and one not in below | above,
        witness=sorted(map(format_point, (below & above))),
    )

    anchor_pairs = [(zero, inf_pt), (zero, one), (neg_one, two)]
    w = None
    for a, b in anchor_pairs:
        fore = _grid_arc_members(fld, a, b, Sign.CLOCKWISE, grid)
        back = _grid_arc_members(fld, b, a, Sign.CLOCKWISE, grid)
        rest = set(grid) - {a, b}
        if fore | back != rest or fore & back:
            w = (format_point(a), format_point(b))
            break
        for t in sorted(fore, key=lambda s: format_point(s)):
            left = _grid_arc_members(fld, a, t, Sign.CLOCKWISE, grid)
            right = _grid_arc_members(fld, t, b, Sign.CLOCKWISE, grid)
            if left | {t} | right != fore or (left & right):
                w = (format_point(a), format_point(b), format_point(t))
                break
        if w:
            break
    rep.add("arc_partitions", w is None, witness=w)

    w = None
    for t in grid:
        memb = []
        for (a, l, d) in ((zero, one, inf_pt), (inf_pt, zero, one), (one, inf_pt, zero)):
            if t in (a, d):
                memb.append(False)
            else:
                memb.append(mabf_contains(a, l, d, t, field=fld))
        if all(memb):
            w = format_point(t)
            break
    rep.add("triple_cone_empty", w is None, witness=w)

    small = [fld.scalar(v) for v in (-2, Fraction(-1, 2), 0, Fraction(1, 3), 1, 3)] + [INF]
    memb = {}

    def members(x, y):
        if (x, y) not in memb:
            memb[(x, y)] = _grid_arc_members(fld, x, y, Sign.CLOCKWISE, grid)
        return memb[(x, y)]

    def symbolic(inter, a, b, p, q, t):
        if inter.kind == "empty":
            return False
        if inter.kind == "subset":
            return t in members(p, q) if inter.subset == "pq_in_ab" else t in members(a, b)
        return any(t in members(x, y) for x, y in inter.arcs)

    w = None
    for a, b, p, q in itertools.permutations(small, 4):
        inter = arc_intersect(fld, a, b, p, q)
        for t in grid:
            if t in (a, b, p, q):
                continue
            direct = t in members(a, b) and t in members(p, q)
            if direct != symbolic(inter, a, b, p, q, t):
                w = tuple(map(format_point, (a, b, p, q, t))) + (inter.clause,)
                break
        if w:
            break
    rep.add("arc_intersection_casework", w is None, witness=w)

    rep.notes.append("rational grid: -10..10 step 1/3, plus inf")


def _verify_partitions_prime(fld: FieldSpec, rep: Report):
    if fld.p > 11:
        raise PreconditionViolated("prime-field partition sweeps are bounded to p <= 11")
    pts = points_of(fld)
    zero, one, inf_pt = fld.zero(), fld.one(), INF
    exponential_like = fld.p % 4 == 3

    u = hg.apply(hg.vol(zero, zero, inf_pt, inf_pt, field=fld), one)
    cone_t = mabf_set(zero, one, inf_pt, fld)
    cone_u = mabf_set(zero, u, inf_pt, fld)
    holds = (not (cone_t & cone_u)) and cone_t | cone_u | {zero, inf_pt} == set(pts)
    if exponential_like:
        rep.add("cone_anticone_partition", holds, witness=sorted(map(format_point, cone_t & cone_u)))
    else:
        rep.add("cone_anticone_partition_expected_negative", not holds,
                witness="partition unexpectedly holds")
        rep.notes.append(
            f"p = {fld.p} = 1 mod 4: -1 is a square, the cone/anticone split degenerates"
        )

    invs = [h for h in hg.enumerate_homographies(fld) if hg.is_involution(h)]
    w = next((repr(h) for h in invs if not fixed_point_iff_det(h)), None)
    if exponential_like:
        rep.add("fixed_point_iff_det_square", w is None, witness=w)
    else:
        rep.add("fixed_point_iff_det_square_expected_negative", w is not None,
                witness="criterion unexpectedly holds")

    if exponential_like:
        # for anchors (a, b) and any base t, each fixed-point-having
        # involution through a->b has one fixed point in the cone and one out
        w = None
        for a_pt, b_pt in itertools.permutations(pts, 2):
            others = [t for t in pts if t not in (a_pt, b_pt)]
            for t in others:
                cone = {
                    s for s in others
                    if s == t or mabf_contains(a_pt, t, b_pt, s, field=fld)
                }
                for s in others:
                    f = hg.vol(a_pt, b_pt, s, s, field=fld)
                    fixed = hg.fixed_points(f)
                    if len(fixed) == 2:
                        inside = sum(1 for x in fixed if x in cone)
                        if inside != 1:
                            w = (format_point(a_pt), format_point(b_pt),
                                 format_point(t), format_point(s))
                            break
                if w:
                    break
            if w:
                break
        rep.add("fixed_points_split_cones", w is None, witness=w)

        w = None
        for t in pts:
            memb = []
            for (a, l, d) in ((zero, one, inf_pt), (inf_pt, zero, one), (one, inf_pt, zero)):
                if t in (a, d):
                    memb.append(False)
                else:
                    memb.append(mabf_contains(a, l, d, t, field=fld))
            if all(memb):
                w = format_point(t)
                break
        rep.add("triple_cone_empty", w is None, witness=w)
