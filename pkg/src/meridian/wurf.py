"""Quadriads over the four vertex axes, their classes, and the cross ratio.

A quadriad valuates the axes (A,B,C,D) in M with at least three distinct
values.  Two quadriads are equivalent when one is the other precomposed with
a Klein double-transposition of axes and postcomposed with a homography.
Each class is canonicalized by the point it pins at the D axis once (A,B,C)
are moved onto a reference basis; the three singular classes take the basis
values themselves.
"""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import homography as hg
from .errors import InvalidQuadriad, PreconditionViolated
from .report import Report
from .scalar import INF, FieldSpec, Point, Scalar, is_inf, points_of

Quadriad = Tuple[Point, Point, Point, Point]  # values at axes (A, B, C, D)
AxisPerm = Tuple[int, int, int, int]

KLEIN4: Tuple[AxisPerm, ...] = (
    (0, 1, 2, 3),  # identity
    (1, 0, 3, 2),  # swap A-B and C-D (green 180-degree turn)
    (2, 3, 0, 1),  # swap A-C and B-D (black)
    (3, 2, 1, 0),  # swap A-D and B-C (red)
)

# one axis permutation per Klein coset of the rotation group; the three
# four-cycles induce the involutive class actions
COSET_REPS: Dict[str, AxisPerm] = {
    "identity": (0, 1, 2, 3),
    "vertex_bc": (0, 2, 3, 1),
    "vertex_cb": (0, 3, 1, 2),
    "red_quarter": (1, 3, 0, 2),
    "green_quarter": (2, 3, 1, 0),
    "black_quarter": (3, 0, 1, 2),
}

INVOLUTIVE_REPS = ("green_quarter", "black_quarter", "red_quarter")


class SingularKind(enum.Enum):
    GREEN = "green"  # equal values on A,B or on C,D
    BLACK = "black"  # equal values on A,C or on B,D
    RED = "red"      # equal values on A,D or on B,C

    def __repr__(self):
        return f"SingularKind.{self.name}"


DEFAULT_BASIS_VALUES = (1, 0, None)  # (1, 0, inf)


def default_basis(field: FieldSpec) -> Tuple[Point, Point, Point]:
    return (field.one(), field.zero(), INF)


def check_quadriad(q: Sequence[Point]) -> Quadriad:
    q = tuple(q)
    if len(q) != 4:
        raise InvalidQuadriad("a quadriad valuates exactly four axes")
    if len(set(q)) < 3:
        raise InvalidQuadriad("quadriad range must have at least three values")
    return q


def precompose(q: Quadriad, sigma: AxisPerm) -> Quadriad:
    return tuple(q[sigma[i]] for i in range(4))


def postcompose(h: hg.Homography, q: Quadriad) -> Quadriad:
    return tuple(hg.apply(h, v) for v in q)


def singular_kind(q: Quadriad) -> Optional[SingularKind]:
    a, b, c, d = q
    if a == b or c == d:
        return SingularKind.GREEN
    if a == c or b == d:
        return SingularKind.BLACK
    if a == d or b == c:
        return SingularKind.RED
    return None


def wurf_class(q: Sequence[Point], basis: Optional[Sequence[Point]] = None,
               field: Optional[FieldSpec] = None) -> Point:
    """Canonical class value of a quadriad with respect to an ordered basis.

    Singular quadriads map to the basis entries (green -> third, black ->
    second, red -> first); a regular quadriad maps to the image of its D
    value under the homography moving its (A,B,C) values onto the basis.
    """
    q = check_quadriad(q)
    fld = field or _field_of(q)
    p, s, r = hg.check_basis(basis) if basis is not None else default_basis(fld)
    kind = singular_kind(q)
    if kind is SingularKind.GREEN:
        return r
    if kind is SingularKind.BLACK:
        return s
    if kind is SingularKind.RED:
        return p
    h = hg.hol((q[0], q[1], q[2]), (p, s, r), field=fld)
    return hg.apply(h, q[3])


def _field_of(points: Iterable[Point]) -> FieldSpec:
    for pt in points:
        if not is_inf(pt):
            return pt.field
    raise PreconditionViolated("cannot infer the field from all-infinite input")


def equivalent(q1: Sequence[Point], q2: Sequence[Point],
               basis: Optional[Sequence[Point]] = None) -> bool:
    """Class equality of two quadriads over a common field."""
    return wurf_class(q1, basis) == wurf_class(q2, basis)


def brute_equivalent(q1: Sequence[Point], q2: Sequence[Point], field: FieldSpec) -> bool:
    """Oracle: search all Klein-perm/homography witnesses directly."""
    if field.p is None or field.p > 7:
        raise PreconditionViolated("brute search is bounded to prime fields up to GF(7)")
    q1, q2 = check_quadriad(q1), check_quadriad(q2)
    lab1 = tuple(hg.label_of(v, field) for v in q1)
    lab2 = tuple(hg.label_of(v, field) for v in q2)
    tables = _homography_tables(field)
    for sigma in KLEIN4:
        pre = tuple(lab1[sigma[i]] for i in range(4))
        for tab in tables:
            if tuple(tab[v] for v in pre) == lab2:
                return True
    return False


@lru_cache(maxsize=None)
def _homography_tables(field: FieldSpec) -> Tuple[Tuple[int, ...], ...]:
    return tuple(hg.as_table(h) for h in hg.enumerate_homographies(field))


def all_quadriads(field: FieldSpec) -> List[Quadriad]:
    pts = points_of(field)
    return [
        q for q in itertools.product(pts, repeat=4) if len(set(q)) >= 3
    ]


def anharmonic_action(rep: str, value: Point, field: FieldSpec,
                      basis: Optional[Sequence[Point]] = None) -> Point:
    """Image of a class value under one of the six coset actions.

    The value is lifted to the quadriad placing the basis on (A,B,C) and the
    value on D, the representative's axis permutation is precomposed, and
    the result is re-canonicalized.
    """
    if rep not in COSET_REPS:
        raise PreconditionViolated(f"unknown coset representative {rep!r}")
    p, s, r = hg.check_basis(basis) if basis is not None else default_basis(field)
    lifted = (p, s, r, value)
    return wurf_class(precompose(lifted, COSET_REPS[rep]), basis=(p, s, r), field=field)


def singular_values(field: FieldSpec, basis: Optional[Sequence[Point]] = None) -> Dict[str, Point]:
    p, s, r = hg.check_basis(basis) if basis is not None else default_basis(field)
    return {"green": r, "black": s, "red": p}


def harmonic_classes(field: FieldSpec, basis: Optional[Sequence[Point]] = None) -> Dict[str, Point]:
    """Second fixed class of each involutive coset action.

    Each such action fixes its singular class; the remaining fixed class is
    the harmonic one.  Only prime fields are scanned.
    """
    if field.p is None:
        raise PreconditionViolated("harmonic classes are enumerated over prime fields")
    sing = singular_values(field, basis)
    out = {}
    for rep, color in zip(INVOLUTIVE_REPS, ("green", "black", "red")):
        fixed = [
            v for v in points_of(field)
            if anharmonic_action(rep, v, field, basis) == v and v != sing[color]
        ]
        if len(fixed) != 1:
            raise PreconditionViolated(f"{rep} action has {len(fixed)} extra fixed classes")
        out[color] = fixed[0]
    return out


def cross_ratio(w: Point, x: Point, y: Point, z: Point) -> Point:
    """(w-y)(x-z) / ((x-y)(w-z)) with the usual limits at infinity.

    Defined whenever at most two of the four points coincide.  Differences
    are evaluated as 2x2 determinants of homogeneous coordinates, which
    settles every infinite argument at once; a vanishing denominator yields
    the point at infinity (the numerator cannot vanish with it).
    """
    pts = (w, x, y, z)
    if len(set(pts)) < 3:
        raise PreconditionViolated("at most two of the four points may coincide")
    fld = _field_of(pts)

    def det(u, v):
        (u0, u1), (v0, v1) = hg._vec(u, fld), hg._vec(v, fld)
        return u0 * v1 - u1 * v0

    num = det(w, y) * det(x, z)
    den = det(x, y) * det(w, z)
    if den.is_zero:
        return INF
    return num / den


def verify_cross_ratio_invariance(field: FieldSpec) -> Report:
    """Invariance under every homography, and the bijection census on GF(3).

    The census direction enumerates every carrier bijection and keeps those
    preserving the cross ratio of all admissible 4-tuples; the count must
    equal the homography-group order.
    """
    if field.p is None or field.p > 5:
        raise PreconditionViolated("invariance sweep is bounded to prime fields up to GF(5)")
    rep = Report("cross_ratio_invariance")
    pts = points_of(field)
    tuples = [t for t in itertools.product(pts, repeat=4) if len(set(t)) >= 3]
    values = {t: cross_ratio(*t) for t in tuples}

    w = None
    for h in hg.enumerate_homographies(field):
        for t in tuples:
            image = tuple(hg.apply(h, v) for v in t)
            if values[image] != values[t]:
                w = (repr(h), tuple(map(repr, t)))
                break
        if w:
            break
    rep.add("homographies_preserve", w is None, witness=w)

    if field.p == 3:
        labels = {pt: i for i, pt in enumerate(pts)}
        lt = {tuple(labels[v] for v in t): labels[values[t]] for t in tuples}
        count = 0
        for perm in itertools.permutations(range(len(pts))):
            if all(lt[tuple(perm[v] for v in t)] == val for t, val in lt.items()):
                count += 1
        expected = field.p ** 3 - field.p
        rep.add("preserving_bijection_census", count == expected, witness=count)
    return rep


def verify_wurf_suite(field: FieldSpec) -> Report:
    """Class bijectivity, Klein invariance, representative independence,
    anharmonic group closure, singular-class permutation, harmonic classes,
    and the cross-ratio consistency of the canonical value."""
    if field.p is None or field.p > 7:
        raise PreconditionViolated("wurf sweeps are bounded to prime fields up to GF(7)")
    rep = Report("wurf")
    pts = points_of(field)
    basis = default_basis(field)

    lift = {v: wurf_class((basis[0], basis[1], basis[2], v)) for v in pts}
    rep.add(
        "class_map_injective",
        len(set(lift.values())) == len(pts),
        witness=sorted(map(repr, lift.values())),
    )

    quadriads = all_quadriads(field)
    classes = {q: wurf_class(q) for q in quadriads}
    rep.add(
        "class_count",
        len(set(classes.values())) == len(pts),
        witness=len(set(classes.values())),
    )

    if field.p <= 5:
        w = None
        for q in quadriads:
            base = classes[q]
            for sigma in KLEIN4:
                if classes[precompose(q, sigma)] != base:
                    w = (tuple(map(repr, q)), sigma)
                    break
            if w:
                break
        rep.add("klein_invariance", w is None, witness=w)

    w = None
    sample = pts if field.p <= 5 else pts[:4]
    for name, sigma in COSET_REPS.items():
        for tau in KLEIN4:
            other = tuple(sigma[tau[i]] for i in range(4))
            for v in sample:
                lifted = (basis[0], basis[1], basis[2], v)
                if wurf_class(precompose(lifted, other)) != anharmonic_action(name, v, field):
                    w = (name, tau, repr(v))
                    break
            if w:
                break
        if w:
            break
    rep.add("coset_representative_independence", w is None, witness=w)

    actions = {
        name: tuple(anharmonic_action(name, v, field) for v in pts)
        for name in COSET_REPS
    }
    idx = {pt: i for i, pt in enumerate(pts)}
    tables = {name: tuple(idx[v] for v in act) for name, act in actions.items()}
    group = set(tables.values())
    closed = all(
        tuple(t1[t2[i]] for i in range(len(pts))) in group
        for t1, t2 in itertools.product(group, repeat=2)
    )
    rep.add("anharmonic_action_closes", closed and len(group) <= 6, witness=sorted(group))

    sing = singular_values(field)
    sing_set = {sing["green"], sing["black"], sing["red"]}
    w = None
    for name in COSET_REPS:
        for v in sing_set:
            if anharmonic_action(name, v, field) not in sing_set:
                w = (name, repr(v))
                break
        if w:
            break
    rep.add("singular_classes_permuted", w is None, witness=w)

    harm = harmonic_classes(field)
    rep.add(
        "harmonic_class_cardinality",
        len(set(harm.values())) in (1, 3),
        witness=sorted(map(repr, harm.values())),
    )

    if field.p <= 5:
        w = None
        for q in quadriads:
            a, b, c, d = q
            in_green = classes[q] == harm["green"]
            swapped = _pairs_harmonic(field, (a, b), (c, d))
            if in_green != swapped:
                w = tuple(map(repr, q))
                break
        rep.add("green_harmonic_pairing", w is None, witness=w)

    w = None
    for y, x, v in itertools.permutations(pts, 3):
        for z in pts:
            if len({y, x, v, z}) < 3:
                continue
            quad = (y, x, v, z)
            if classes.get(quad, wurf_class(quad)) != cross_ratio(v, x, y, z):
                w = tuple(map(repr, quad))
                break
        if w:
            break
    rep.add("cross_ratio_consistency", w is None, witness=w)

    w = None
    count = 0
    for h in _homography_tables(field):
        if perm_order_small(h) == 4 and h[idx[sing["red"]]] == idx[sing["green"]] \
                and h[idx[sing["green"]]] == idx[sing["black"]]:
            count += 1
    rep.add("unique_order4_singular_cycle", count == 1, witness=count)
    return rep


def perm_order_small(p: Tuple[int, ...]) -> int:
    ident = tuple(range(len(p)))
    q, k = p, 1
    while q != ident:
        q = tuple(p[i] for i in q)
        k += 1
    return k


def _pairs_harmonic(field: FieldSpec, pair1, pair2) -> bool:
    """Whether some involution swaps pair1 while fixing pair2 pointwise."""
    a, c = pair1
    b, d = pair2
    if len({a, b, c, d}) != 4:
        return False
    try:
        f = hg.vol(b, b, d, d, field=field)
    except hg.DegenerateVol:
        return False
    return hg.apply(f, a) == c
