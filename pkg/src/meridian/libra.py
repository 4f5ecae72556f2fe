"""Ternary libra algebra: tables, group conversions, inner involution families.

A libra operator <a,b,c> satisfies <a,a,b> = b = <b,a,a> and the
associativity law <<a,b,c>,d,e> = <a,b,<c,d,e>>; it is a group with the
identity forgotten.  Tables are stored explicitly for carriers up to
``MAX_TABLE_CARRIER`` elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, Optional, Sequence, Tuple

from .abstract import InvolutionFamily, compose, identity_perm, invert
from .errors import BoundExceeded, NotAbelian, NotFound, NotUnique, PreconditionViolated
from .report import Report

MAX_TABLE_CARRIER = 16

Element = Hashable


@dataclass(frozen=True)
class LibraTable:
    carrier: Tuple[Element, ...]
    table: Dict[Tuple[Element, Element, Element], Element]

    @classmethod
    def from_op(cls, carrier: Sequence[Element], op: Callable) -> "LibraTable":
        carrier = tuple(carrier)
        if len(carrier) > MAX_TABLE_CARRIER:
            raise BoundExceeded(f"carrier {len(carrier)} above table bound {MAX_TABLE_CARRIER}")
        table = {
            (a, b, c): op(a, b, c) for a, b, c in itertools.product(carrier, repeat=3)
        }
        return cls(carrier, table)

    def op(self, a: Element, b: Element, c: Element) -> Element:
        return self.table[(a, b, c)]

    def is_abelian(self) -> bool:
        return all(
            self.table[(a, b, c)] == self.table[(c, b, a)]
            for a, b, c in itertools.product(self.carrier, repeat=3)
        )

    def __hash__(self):
        return hash((self.carrier, tuple(sorted(self.table.items(), key=repr))))


def function_libra_op(f, g, h):
    """Composition f . g^-1 . h of permutation tables."""
    return compose(compose(f, invert(g)), h)


def verify_libra(t: LibraTable) -> Report:
    """Exhaustive identity, associativity and the derived rearrangement law."""
    rep = Report("libra")
    w = next(
        (
            (a, b)
            for a, b in itertools.product(t.carrier, repeat=2)
            if t.op(a, a, b) != b or t.op(b, a, a) != b
        ),
        None,
    )
    rep.add("identity_law", w is None, witness=w)
    w = next(
        (
            (a, b, c, d, e)
            for a, b, c, d, e in itertools.product(t.carrier, repeat=5)
            if t.op(t.op(a, b, c), d, e) != t.op(a, b, t.op(c, d, e))
        ),
        None,
    )
    rep.add("associativity_law", w is None, witness=w)
    w = next(
        (
            (a, b, c, d, e)
            for a, b, c, d, e in itertools.product(t.carrier, repeat=5)
            if t.op(a, t.op(d, c, b), e) != t.op(t.op(a, b, c), d, e)
        ),
        None,
    )
    rep.add("rearrangement_law", w is None, witness=w)
    return rep


def libra_from_group(elements: Sequence[Element], mul: Callable, inv: Callable) -> LibraTable:
    """The table <a,b,c> = a * b^-1 * c of a group."""
    return LibraTable.from_op(elements, lambda a, b, c: mul(mul(a, inv(b)), c))


def libra_from_cyclic(n: int) -> LibraTable:
    return libra_from_group(tuple(range(n)), lambda a, b: (a + b) % n, lambda a: (-a) % n)


def libra_from_perm_group(elements: Sequence[Tuple[int, ...]]) -> LibraTable:
    return libra_from_group(tuple(elements), compose, invert)


@dataclass(frozen=True)
class GroupTable:
    elements: Tuple[Element, ...]
    identity: Element
    mul: Dict[Tuple[Element, Element], Element]
    inv: Dict[Element, Element]


def group_from_libra(t: LibraTable, e: Element) -> GroupTable:
    """The group x*y = <x,e,y> with identity e and inverse <e,x,e>."""
    if e not in t.carrier:
        raise PreconditionViolated("identity choice must lie in the carrier")
    mul = {
        (x, y): t.op(x, e, y) for x, y in itertools.product(t.carrier, repeat=2)
    }
    inv = {x: t.op(e, x, e) for x in t.carrier}
    g = GroupTable(t.carrier, e, mul, inv)
    for x, y, z in itertools.product(t.carrier, repeat=3):
        if mul[(mul[(x, y)], z)] != mul[(x, mul[(y, z)])]:
            raise NotFound(f"associativity fails at {(x, y, z)}")
    for x in t.carrier:
        if mul[(x, e)] != x or mul[(e, x)] != x or mul[(x, inv[x])] != e:
            raise NotFound(f"identity/inverse fails at {x}")
    return g


def inner_involution(t: LibraTable, a: Element, b: Element) -> Dict[Element, Element]:
    """The reflection x -> <a,x,b> of an abelian libra."""
    if not t.is_abelian():
        raise NotAbelian("inner involutions require an abelian libra")
    return {x: t.op(a, x, b) for x in t.carrier}


def inner_involutions(t: LibraTable) -> FrozenSet[Tuple[Tuple[Element, Element], ...]]:
    maps = set()
    for a, b in itertools.product(t.carrier, repeat=2):
        maps.add(tuple(sorted(inner_involution(t, a, b).items(), key=repr)))
    return frozenset(maps)


# ---------------------------------------------------------------------------
# inner involution families on arbitrary carriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InnerInvolutionFamily:
    """Self-inverse maps acting uniquely transitively on a carrier.

    Members are stored as dicts frozen to sorted item tuples so they hash;
    the carrier may hold any labels (points, permutation tables, ...).
    """

    carrier: Tuple[Element, ...]
    members: FrozenSet[Tuple[Tuple[Element, Element], ...]]

    def maps(self):
        return [dict(m) for m in sorted(self.members, key=repr)]


def family_member_sending(fam: InnerInvolutionFamily, a: Element, c: Element) -> Dict:
    hits = [m for m in fam.maps() if m[a] == c]
    if not hits:
        raise NotFound(f"no member with {a!r}->{c!r}")
    if len(hits) > 1:
        raise NotUnique(f"{len(hits)} members with {a!r}->{c!r}")
    return hits[0]


def induced_libra(fam: InnerInvolutionFamily) -> LibraTable:
    """The point libra <a,b,c> = (member sending a to c)(b)."""
    return LibraTable.from_op(
        fam.carrier, lambda a, b, c: family_member_sending(fam, a, c)[b]
    )


def verify_inner_family(fam: InnerInvolutionFamily) -> Report:
    """Self-inverseness, unique transitivity, triple closure, and the
    reconstruction: the induced point libra is a libra and evaluation at any
    point is an isomorphism from the function libra onto it."""
    rep = Report("inner_involution_family")
    maps = fam.maps()
    car = fam.carrier

    w = next((m for m in maps if any(m[m[x]] != x for x in car)), None)
    rep.add("members_self_inverse", w is None, witness=repr(w))

    w = None
    for a, b in itertools.product(car, repeat=2):
        hits = sum(1 for m in maps if m[a] == b)
        if hits != 1:
            w = (a, b, hits)
            break
    rep.add("unique_transitivity", w is None, witness=repr(w))

    keyset = {tuple(sorted(m.items(), key=repr)) for m in maps}
    w = None
    for f, g, h in itertools.product(maps, repeat=3):
        trip = {x: f[g[h[x]]] for x in car}
        if tuple(sorted(trip.items(), key=repr)) not in keyset:
            w = (f, g, h)
            break
    rep.add("triple_product_closure", w is None, witness=repr(w))

    if rep.ok:
        point_libra = induced_libra(fam)
        rep.merge(verify_libra(point_libra))
        w = None
        for x in car:
            for f, g, h in itertools.product(maps, repeat=3):
                lhs = f[g[h[x]]]
                rhs = point_libra.op(f[x], g[x], h[x])
                if lhs != rhs:
                    w = (x, f, g, h)
                    break
            if w:
                break
        rep.add("evaluation_is_isomorphism", w is None, witness=repr(w))
    return rep


def mab_family(fam: InvolutionFamily, a: int, b: int) -> InnerInvolutionFamily:
    """All family involutions sending a to b, restricted to the rest of the carrier."""
    rest = tuple(x for x in range(fam.carrier.n) if x not in (a, b))
    members = set()
    for f in sorted(fam.members):
        if f[a] == b:
            members.add(tuple(sorted({x: f[x] for x in rest}.items())))
    return InnerInvolutionFamily(rest, frozenset(members))


def mab_function_libra(fam: InvolutionFamily, a: int, b: int) -> LibraTable:
    """The two-point stabilizer coset as a libra under triple composition."""
    members = tuple(sorted(f for f in fam.members if f[a] == b))
    return LibraTable.from_op(members, lambda f, g, h: compose(compose(f, g), h))


def mab_induced_libra(fam: InvolutionFamily, a: int, b: int) -> LibraTable:
    return induced_libra(mab_family(fam, a, b))


def libra_isomorphic(t1: LibraTable, t2: LibraTable, max_carrier: int = MAX_TABLE_CARRIER) -> Optional[Dict]:
    """Search for a carrier bijection preserving the ternary table.

    Backtracking over images in canonical order, pruning with every fully
    assigned triple; first solution found is returned, or None.
    """
    if len(t1.carrier) != len(t2.carrier):
        return None
    if len(t1.carrier) > max_carrier:
        raise BoundExceeded(f"carrier {len(t1.carrier)} above bound {max_carrier}")
    src = sorted(t1.carrier, key=repr)
    dst = sorted(t2.carrier, key=repr)
    n = len(src)
    phi: Dict = {}
    used = set()

    def consistent(k: int) -> bool:
        new = src[k]
        assigned = src[: k + 1]
        for x, y in itertools.product(assigned, repeat=2):
            for trip in ((new, x, y), (x, new, y), (x, y, new)):
                out = t1.op(*trip)
                if out in phi:
                    if t2.op(phi[trip[0]], phi[trip[1]], phi[trip[2]]) != phi[out]:
                        return False
        return True

    def extend(k: int) -> bool:
        if k == n:
            return True
        for cand in dst:
            if cand in used:
                continue
            phi[src[k]] = cand
            used.add(cand)
            if consistent(k) and extend(k + 1):
                return True
            del phi[src[k]]
            used.discard(cand)
        return False

    return dict(phi) if extend(0) else None
