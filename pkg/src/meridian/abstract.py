"""Abstract finite meridian structures as permutation lookup tables.

Structures here never see matrix coefficients: members are plain image
tables over carrier labels 0..n-1, so the verification engine and the field
reconstruction genuinely exercise the axioms instead of peeking at formulas.
Labels for a prime field carrier are the residues 0..p-1 with p standing for
the point at infinity.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import homography as hg
from .errors import BoundExceeded, NotFound, NotUnique, PreconditionViolated
from .report import Report
from .scalar import FieldSpec, format_point, points_of

Permutation = Tuple[int, ...]

DEFAULT_MAX_CARRIER = 12
SAMPLE_TUPLES = 4000


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Table of p applied after q."""
    return tuple(p[i] for i in q)


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def identity_perm(n: int) -> Permutation:
    return tuple(range(n))


def is_involution(p: Permutation) -> bool:
    ident = identity_perm(len(p))
    return p != ident and compose(p, p) == ident


def perm_order(p: Permutation) -> int:
    ident = identity_perm(len(p))
    q, k = p, 1
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


@dataclass(frozen=True)
class CarrierSet:
    n: int
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("carrier needs at least four elements")
        if self.names is not None and len(self.names) != self.n:
            raise ValueError("names must cover the carrier")

    def name_of(self, label: int) -> str:
        return self.names[label] if self.names else str(label)


@dataclass(frozen=True)
class InvolutionFamily:
    carrier: CarrierSet
    members: FrozenSet[Permutation]


@dataclass(frozen=True)
class PermGroup:
    carrier: CarrierSet
    elements: FrozenSet[Permutation]


def carrier_for_field(spec: FieldSpec) -> CarrierSet:
    names = tuple(format_point(pt) for pt in points_of(spec))
    return CarrierSet(spec.p + 1, names)


def from_field(spec: FieldSpec, max_enum: int = DEFAULT_MAX_CARRIER * 8):
    """Carrier, involution family and full homography group of GF(p) as tables."""
    if spec.p is None:
        raise PreconditionViolated("from_field needs a prime field")
    if spec.p + 1 > max_enum:
        raise BoundExceeded(f"carrier {spec.p + 1} above bound {max_enum}")
    carrier = carrier_for_field(spec)
    tables = [hg.as_table(h) for h in hg.enumerate_homographies(spec)]
    group = PermGroup(carrier, frozenset(tables))
    family = InvolutionFamily(carrier, frozenset(t for t in tables if is_involution(t)))
    return carrier, family, group


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------


def _md2_tuples(n: int):
    for a, c, b, d in itertools.product(range(n), repeat=4):
        if not ({a, c} & {b, d}):
            yield a, c, b, d


def verify_involution_family(
    fam: InvolutionFamily,
    max_enum: int = DEFAULT_MAX_CARRIER,
    seed: int = 0,
) -> Report:
    """Exhaustive check of the involution-family axioms.

    Checks: members are non-trivial involutions; conjugation closure
    a.b.a; unique two-pair transitivity (existence and uniqueness reported
    separately, with witnesses); triple-product closure of the {f : f(a)=b}
    stabilizer cosets; and the derived commutation rule for members agreeing
    at a point.  Carriers above ``max_enum`` are sampled with a fixed seed.
    """
    rep = Report("involution_family")
    n = fam.carrier.n
    members = sorted(fam.members)
    ident = identity_perm(n)

    bad = next((m for m in members if m == ident or compose(m, m) != ident), None)
    rep.add("members_nontrivial_involutions", bad is None, witness=bad)

    mset = fam.members
    w = next(
        ((f, g) for f in members for g in members if compose(compose(f, g), f) not in mset),
        None,
    )
    rep.add("conjugation_closure", w is None, witness=w)

    sampled = n > max_enum
    if sampled:
        rng = random.Random(seed)
        tuples = []
        while len(tuples) < SAMPLE_TUPLES:
            a, c, b, d = (rng.randrange(n) for _ in range(4))
            if not ({a, c} & {b, d}):
                tuples.append((a, c, b, d))
        rep.notes.append(f"two_pair_transitivity sampled ({SAMPLE_TUPLES} tuples, seed {seed})")
    else:
        tuples = list(_md2_tuples(n))

    counts: Dict[Tuple[int, int, int, int], int] = {}
    for f in members:
        for a in range(n):
            fa = f[a]
            for b in range(n):
                counts[(a, fa, b, f[b])] = counts.get((a, fa, b, f[b]), 0) + 1
    missing = next((t for t in tuples if counts.get(t, 0) == 0), None)
    rep.add("two_pair_transitivity_exists", missing is None, witness=missing)
    dup = next((t for t in tuples if counts.get(t, 0) > 1), None)
    rep.add("two_pair_transitivity_unique", dup is None, witness=dup)

    w = None
    for a in range(n):
        for b in range(n):
            coset = [f for f in members if f[a] == b]
            for f, g, h in itertools.product(coset, repeat=3):
                if compose(compose(f, g), h) not in mset or compose(compose(f, g), h)[a] != b:
                    w = (a, b, f, g, h)
                    break
            if w:
                break
        if w:
            break
    rep.add("stabilizer_triple_closure", w is None, witness=w)

    w = None
    for t in range(n):
        by_image: Dict[int, List[Permutation]] = {}
        for f in members:
            by_image.setdefault(f[t], []).append(f)
        for group in by_image.values():
            for f, g, h in itertools.product(group, repeat=3):
                if compose(compose(f, g), h) != compose(compose(h, g), f):
                    w = (t, f, g, h)
                    break
            if w:
                break
        if w:
            break
    rep.add("common_value_commutation", w is None, witness=w)
    return rep


def verify_meridian_group(g: PermGroup) -> Report:
    """Check the 3-transitive permutation-group characterization.

    Covers group closure/identity/inverses, sharp 3-transitivity (every
    ordered basis maps to every other under exactly one element), the unique
    order-4 cycle through each ordered triple, and that any element with a
    genuine 2-cycle is an involution.
    """
    rep = Report("meridian_group")
    n = g.carrier.n
    elems = sorted(g.elements)
    ident = identity_perm(n)

    rep.add("identity_present", ident in g.elements)
    w = next((p for p in elems if invert(p) not in g.elements), None)
    rep.add("inverses_present", w is None, witness=w)
    w = next(
        ((p, q) for p, q in itertools.product(elems, repeat=2) if compose(p, q) not in g.elements),
        None,
    )
    rep.add("closure", w is None, witness=w)

    bases = [t for t in itertools.permutations(range(n), 3)]
    expected = len(bases)
    w = None
    for src in bases:
        seen: Dict[Tuple[int, int, int], int] = {}
        for f in elems:
            key = (f[src[0]], f[src[1]], f[src[2]])
            seen[key] = seen.get(key, 0) + 1
        dup = next((k for k, v in seen.items() if v > 1), None)
        if dup is not None:
            w = ("not unique", src, dup)
            break
        if len(seen) != expected:
            missing = next(t for t in bases if t not in seen)
            w = ("not transitive", src, missing)
            break
    rep.add("three_transitive_unique", w is None, witness=w)

    orders = {f: perm_order(f) for f in elems}
    w = None
    for a, b, c in itertools.permutations(range(n), 3):
        hits = [f for f in elems if orders[f] == 4 and f[a] == b and f[b] == c and f[f[c]] == a]
        if len(hits) != 1:
            w = ((a, b, c), len(hits))
            break
    rep.add("unique_order4_cycle", w is None, witness=w)

    w = None
    for f in elems:
        if any(f[f[x]] == x and f[x] != x for x in range(n)) and orders[f] != 2:
            w = f
            break
    rep.add("two_cycle_forces_involution", w is None, witness=w)
    return rep


def group_closure(gens: Iterable[Permutation], max_order: int = 50000) -> PermGroup:
    gens = list(gens)
    if not gens:
        raise PreconditionViolated("need at least one generator")
    n = len(gens[0])
    seen = {identity_perm(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for gen in gens:
                q = compose(gen, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > max_order:
                        raise BoundExceeded(f"closure exceeded {max_order} elements")
        frontier = nxt
    return PermGroup(CarrierSet(n), frozenset(seen))


def involutions_of(g: PermGroup) -> InvolutionFamily:
    return InvolutionFamily(g.carrier, frozenset(p for p in g.elements if is_involution(p)))


def vol_lookup(fam: InvolutionFamily, a: int, b: int, c: int, d: int) -> Permutation:
    """The unique member sending a->b and c->d (table analogue of vol)."""
    if {a, b} & {c, d}:
        raise PreconditionViolated("pairs {a,b} and {c,d} must be disjoint")
    hits = [f for f in sorted(fam.members) if f[a] == b and f[c] == d]
    if not hits:
        raise NotFound(f"no member with {a}->{b}, {c}->{d}")
    if len(hits) > 1:
        raise NotUnique(f"{len(hits)} members with {a}->{b}, {c}->{d}")
    return hits[0]


def meridian_cycle(fam: InvolutionFamily, a: int, b: int, c: int):
    """The fourth point d and a cycle a->b->c->d->a built from two lookups."""
    if len({a, b, c}) != 3:
        raise PreconditionViolated("a, b, c must be pairwise distinct")
    d = vol_lookup(fam, a, a, c, c)[b]
    rho = compose(vol_lookup(fam, a, b, c, d), vol_lookup(fam, a, a, c, c))
    if not (rho[a] == b and rho[b] == c and rho[c] == d and rho[d] == a):
        raise NotFound(f"cycle recipe failed at ({a},{b},{c})")
    return d, rho


def translation_fixing(fam: InvolutionFamily, d: int, a: int, b: int) -> Permutation:
    """The unique composition with sole fixed point d sending a to b."""
    if len({d, a, b}) != 3:
        raise PreconditionViolated("d, a, b must be pairwise distinct")
    tau = compose(vol_lookup(fam, d, d, b, b), vol_lookup(fam, d, d, a, b))
    fixed = [x for x in range(len(tau)) if tau[x] == x]
    if fixed != [d] or tau[a] != b:
        raise NotFound(f"translation recipe failed at ({d},{a},{b})")
    return tau


def is_harmonic(fam: InvolutionFamily, pair1, pair2, cross_check: bool = False) -> bool:
    """Whether pair1 is swapped by a member fixing both points of pair2.

    pair1 = {a,c} and pair2 = {b,d} must be disjoint 2-sets.  With
    ``cross_check`` the two equivalent formulations (existence of the 4-cycle
    a->b->c->d->a, and of the one-fixed-point map d->d, a->b->c) are also
    evaluated and must agree.
    """
    a, c = sorted(pair1)
    b, d = sorted(pair2)
    if len({a, b, c, d}) != 4 or a == c or b == d:
        return False
    clause2 = any(f[a] == c and f[b] == b and f[d] == d for f in fam.members)
    if cross_check:
        clause1 = vol_lookup(fam, a, a, c, c)[b] == d
        try:
            tau = translation_fixing(fam, d, a, b)
            clause3 = tau[b] == c
        except (NotFound, NotUnique):
            clause3 = False
        if not (clause1 == clause2 == clause3):
            raise NotUnique(f"harmonic clauses disagree on {(a, b, c, d)}")
    return clause2


def is_meridian_automorphism(fam: InvolutionFamily, phi: Permutation) -> bool:
    """True when conjugation by phi maps the family onto itself."""
    inv = invert(phi)
    return all(compose(inv, compose(f, phi)) in fam.members for f in fam.members)


def automorphism_census(fam: InvolutionFamily) -> int:
    n = fam.carrier.n
    return sum(
        1 for phi in itertools.permutations(range(n)) if is_meridian_automorphism(fam, phi)
    )


# ---------------------------------------------------------------------------
# structure files
# ---------------------------------------------------------------------------


def dump_structure(fam: InvolutionFamily) -> str:
    lines = [f"carrier {fam.carrier.n}"]
    if fam.carrier.names:
        lines.append("names " + " ".join(fam.carrier.names))
    for member in sorted(fam.members):
        lines.append(" ".join(str(v) for v in member))
    return "\n".join(lines) + "\n"


def load_structure(text: str) -> InvolutionFamily:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("carrier "):
        raise ValueError("structure file must start with 'carrier <n>'")
    n = int(lines[0].split()[1])
    names = None
    body = lines[1:]
    if body and body[0].startswith("names "):
        names = tuple(body[0].split()[1:])
        body = body[1:]
    members = []
    for i, ln in enumerate(body):
        imgs = tuple(int(tok) for tok in ln.split())
        if len(imgs) != n or sorted(imgs) != list(range(n)):
            raise ValueError(f"line {i + 2}: not a permutation of 0..{n - 1}")
        members.append(imgs)
    return InvolutionFamily(CarrierSet(n, names), frozenset(members))
