"""Rebuild a field from an abstract involution family and certify it.

Given a family passing the involution axioms and a designated ordered basis
(zero, one, inf), the binary operations come from lookups alone:

    x + y   = (unique inf-fixing member sending x to y)(zero)
    x * y   = (unique member sending inf->zero and x to y)(one)   x,y != zero
    -x      = (member fixing inf, swapping zero with itself)(x)
    1/u     = (member sending inf->zero fixing one)(u)

The degenerate sum x + x uses the same lookup with the pair {x,x} = {x},
which exists and is unique by two-pair transitivity; multiplication by zero
is extended by definition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .abstract import InvolutionFamily, vol_lookup
from .errors import PreconditionViolated
from .report import Report

ASSUMPTION_NOTE = "x+x read as the unique inf-fixing member with x->x, evaluated at zero"
ZERO_MUL_NOTE = "x*0 = 0*x = 0 by definition"


@dataclass
class FieldTable:
    elements: Tuple[int, ...]  # carrier labels minus the inf designate, sorted
    zero: int
    one: int
    add: Dict[Tuple[int, int], int]
    mul: Dict[Tuple[int, int], int]
    neg: Dict[int, int]
    inv: Dict[int, int]  # defined away from zero
    notes: Tuple[str, ...] = (ASSUMPTION_NOTE, ZERO_MUL_NOTE)

    def to_dict(self):
        order = list(self.elements)
        idx = {e: i for i, e in enumerate(order)}
        return {
            "size": len(order),
            "zero": idx[self.zero],
            "one": idx[self.one],
            "add": [[idx[self.add[(x, y)]] for y in order] for x in order],
            "mul": [[idx[self.mul[(x, y)]] for y in order] for x in order],
        }


def rebuild(fam: InvolutionFamily, basis: Tuple[int, int, int]) -> FieldTable:
    zero, one, inf = basis
    if len({zero, one, inf}) != 3:
        raise PreconditionViolated("basis labels must be distinct")
    elements = tuple(x for x in range(fam.carrier.n) if x != inf)

    add = {}
    for x, y in itertools.product(elements, repeat=2):
        add[(x, y)] = vol_lookup(fam, inf, inf, x, y)[zero]
    mul = {}
    for x, y in itertools.product(elements, repeat=2):
        if x == zero or y == zero:
            mul[(x, y)] = zero
        else:
            mul[(x, y)] = vol_lookup(fam, inf, zero, x, y)[one]
    negation = vol_lookup(fam, inf, inf, zero, zero)
    neg = {x: negation[x] for x in elements}
    reciprocal = vol_lookup(fam, inf, zero, one, one)
    inv = {x: reciprocal[x] for x in elements if x != zero}
    return FieldTable(elements, zero, one, add, mul, neg, inv)


def verify_field_axioms(t: FieldTable) -> Report:
    """Exhaustively check every field axiom on the table."""
    rep = Report("field_axioms")
    els = t.elements
    add, mul = t.add, t.mul

    w = next(((x, y) for x, y in itertools.product(els, repeat=2) if add[(x, y)] != add[(y, x)]), None)
    rep.add("add_commutative", w is None, witness=w)
    w = next(
        (
            (x, y, z)
            for x, y, z in itertools.product(els, repeat=3)
            if add[(add[(x, y)], z)] != add[(x, add[(y, z)])]
        ),
        None,
    )
    rep.add("add_associative", w is None, witness=w)
    w = next((x for x in els if add[(x, t.zero)] != x), None)
    rep.add("add_identity", w is None, witness=w)
    w = next((x for x in els if add[(x, t.neg[x])] != t.zero), None)
    rep.add("add_inverse", w is None, witness=w)

    w = next(((x, y) for x, y in itertools.product(els, repeat=2) if mul[(x, y)] != mul[(y, x)]), None)
    rep.add("mul_commutative", w is None, witness=w)
    w = next(
        (
            (x, y, z)
            for x, y, z in itertools.product(els, repeat=3)
            if mul[(mul[(x, y)], z)] != mul[(x, mul[(y, z)])]
        ),
        None,
    )
    rep.add("mul_associative", w is None, witness=w)
    w = next((x for x in els if mul[(x, t.one)] != x), None)
    rep.add("mul_identity", w is None, witness=w)
    w = next((x for x in els if x != t.zero and mul[(x, t.inv[x])] != t.one), None)
    rep.add("mul_inverse", w is None, witness=w)

    w = next(
        (
            (x, y, z)
            for x, y, z in itertools.product(els, repeat=3)
            if mul[(x, add[(y, z)])] != add[(mul[(x, y)], mul[(x, z)])]
        ),
        None,
    )
    rep.add("distributive", w is None, witness=w)
    rep.add("one_distinct_from_zero", t.one != t.zero)
    rep.add("char_not_two", add[(t.one, t.one)] != t.zero)
    rep.notes.extend(t.notes)
    return rep


def find_isomorphism(t: FieldTable, p: int) -> Optional[Dict[int, int]]:
    """A field isomorphism onto GF(p), or None.

    Prime fields are rigid: the image of 1 forces 1+1+... to map onto the
    residues in order, so the candidate map is built by iterated addition
    and then checked on both tables.
    """
    if len(t.elements) != p:
        return None
    phi = {t.zero: 0}
    cur = t.zero
    for k in range(1, p):
        cur = t.add[(cur, t.one)]
        if cur in phi:
            return None
        phi[cur] = k
    for x, y in itertools.product(t.elements, repeat=2):
        if phi[t.add[(x, y)]] != (phi[x] + phi[y]) % p:
            return None
        if phi[t.mul[(x, y)]] != (phi[x] * phi[y]) % p:
            return None
    return phi
