"""Obstruction classes for the embedding-problem families, as symbol products.

Each engine takes structured commutator data and returns the displayed
product, already normalized.  For p = 2 the root of unity is rendered as -1
so every output is evaluable over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadFamily, BadVariant, PrimeMismatch, ZeroEntry
from .symbols import (
    FieldElem,
    SymbolProduct,
    elem_mul,
    elem_pow,
    opaque_class,
    rat,
    symbol,
    trivial,
    zeta,
)


def _check_nonzero(*elems: FieldElem):
    for e in elems:
        if e.kind == "rat" and e.payload == 0:
            raise ZeroEntry("zero entry in a symbol")


@dataclass
class MassyInput:
    """Data for the elementary-abelian quotient decomposition.

    d maps (i, i) to the power exponents s_i^p = zeta^(d_ii) and (i, j),
    i < j, to the commutator exponents s_i s_j = zeta^(d_ij) s_j s_i.
    Indices are 1-based to match the usual statement.
    """

    p: int
    a: list
    d: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.a) < 1:
            raise ZeroEntry("need at least one a_i")
        _check_nonzero(*self.a)
        for (i, j) in self.d:
            if not (1 <= i <= j <= len(self.a)):
                raise BadFamily(f"bad index pair {(i, j)}")


@dataclass
class DirectFactorInput:
    """Data for a quotient H x C_p: t^p = zeta^j and t s_i = zeta^(d_i) s_i t."""

    p: int
    res_class: object       # opaque name (str) or SymbolProduct for [K,H,res_H gamma]
    b: FieldElem = None
    j: int = 0
    a: list = field(default_factory=list)
    d: list = field(default_factory=list)

    def __post_init__(self):
        if self.b is None:
            raise ZeroEntry("b is required")
        _check_nonzero(self.b, *self.a)
        if len(self.a) != len(self.d):
            raise BadFamily("a and d must have matching lengths")


@dataclass
class LedetInput:
    """Data for a quotient N x H with t_j s_i = zeta^(d_ij) s_i t_j."""

    p: int
    resN_class: object
    resH_class: object
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    d: dict = field(default_factory=dict)   # (i, j) -> exponent, 1-based

    def __post_init__(self):
        _check_nonzero(*self.a, *self.b)
        for (i, j) in self.d:
            if not (1 <= i <= len(self.a) and 1 <= j <= len(self.b)):
                raise BadFamily(f"bad index pair {(i, j)}")


@dataclass
class DiagonalForm:
    """Diagonal quadratic form <a_1, ..., a_n>."""

    entries: list

    def __post_init__(self):
        if not self.entries:
            raise ZeroEntry("a diagonal form needs at least one entry")
        _check_nonzero(*self.entries)


def _as_class(obj, p: int) -> SymbolProduct:
    """Opaque name or concrete SymbolProduct; None means the trivial class."""
    if obj is None:
        return trivial(p)
    if isinstance(obj, SymbolProduct):
        if obj.p != p:
            raise PrimeMismatch("sub-obstruction has a different prime")
        return obj
    return opaque_class(str(obj), p)


# -- base-case obstructions -----------------------------------------------------


def obstruction_c4(a: FieldElem) -> SymbolProduct:
    """Embedding a quadratic extension into a C4 extension: the class (a, -1)."""
    _check_nonzero(a)
    return symbol(a, rat(-1), 2)


def obstruction_cp2(a: FieldElem, p: int) -> SymbolProduct:
    """Embedding a degree-p Kummer extension into C_{p^2}: the class (a, zeta; zeta)."""
    _check_nonzero(a)
    return symbol(a, zeta(p), p)


# -- the three decomposition formulas --------------------------------------------


def massy(data: MassyInput) -> SymbolProduct:
    """prod_i (a_i, zeta; zeta)^(d_ii) * prod_{i<k} (a_i, a_k; zeta)^(d_ik)."""
    p = data.p
    out = trivial(p)
    n = len(data.a)
    for i in range(1, n + 1):
        e = data.d.get((i, i), 0) % p
        if e:
            out = out.mul(symbol(data.a[i - 1], zeta(p), p).pow(e))
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            e = data.d.get((i, k), 0) % p
            if e:
                out = out.mul(symbol(data.a[i - 1], data.a[k - 1], p).pow(e))
    return out


def direct_factor(data: DirectFactorInput) -> SymbolProduct:
    """[K,H,res_H gamma] * (b, zeta^j * prod a_i^(d_i); zeta)."""
    p = data.p
    right = zeta(p, data.j % p)
    for ai, di in zip(data.a, data.d):
        right = elem_mul(right, elem_pow(ai, di % p))
    out = _as_class(data.res_class, p)
    if not right.is_one():
        out = out.mul(symbol(data.b, right, p))
    return out


def ledet_product(data: LedetInput) -> SymbolProduct:
    """[K,N,res_N gamma] * [K',H,res_H gamma] * prod (b_j, a_i; zeta)^(d_ij)."""
    p = data.p
    out = _as_class(data.resN_class, p).mul(_as_class(data.resH_class, p))
    for (i, j), e in sorted(data.d.items()):
        e %= p
        if e:
            out = out.mul(symbol(data.b[j - 1], data.a[i - 1], p).pow(e))
    return out


def relate_raise_lower(o_g1: SymbolProduct, o_cyclic: SymbolProduct) -> SymbolProduct:
    """Obstruction of the companion extension: the product of the two classes."""
    if o_g1.p != o_cyclic.p:
        raise PrimeMismatch("obstructions have different primes")
    return o_g1.mul(o_cyclic)


# -- modular group and order-p^4 families -----------------------------------------


_MODULAR_VARIANTS = ("M", "1z", "z1", "zz")


def modular_obstruction(variant: str, p: int, n: int, a1: FieldElem, a2: FieldElem,
                        crossed=None) -> SymbolProduct:
    """Obstructions over the modular group's quotient, n >= 3.

    variant: "M" for the modular group itself (includes the crossed-product
    class [K,C_q,zeta]), "1z" / "z1" / "zz" for the central extensions with
    (beta^p, alpha-power relation) twisted by (1,zeta), (zeta,1), (zeta,zeta).
    """
    if n < 3:
        raise BadVariant("modular families need n >= 3")
    _check_nonzero(a1, a2)
    if variant == "M":
        return _as_class(crossed if crossed is not None else "K,C_q,zeta", p).mul(
            symbol(a2, a1, p))
    if variant == "1z":
        return symbol(a2, a1, p)
    if variant == "z1":
        return symbol(a2, zeta(p), p)
    if variant == "zz":
        return symbol(elem_mul(zeta(p), a1), a2, p)
    raise BadVariant(f"variant must be one of {_MODULAR_VARIANTS}, got {variant!r}")


def g_family_obstruction(family: str, p: int, a1: FieldElem, a2: FieldElem,
                         cyc_factor=None, zeta_p2_in_k: bool = False) -> SymbolProduct:
    """Obstructions for the order-p^4 groups with quotient C_{p^2} x C_p."""
    _check_nonzero(a1, a2)
    if family == "G3":
        return symbol(a2, a1, p)
    if family == "G4":
        return symbol(a2, elem_mul(a1, zeta(p)), p)
    if family == "G5":
        if zeta_p2_in_k:
            return symbol(elem_mul(zeta(p * p, p * p - 1), a2), a1, p)
        return _as_class(cyc_factor if cyc_factor is not None else "L1,C_p^2,zeta", p).mul(
            symbol(a2, a1, p))
    raise BadFamily(f"family must be G3, G4 or G5, got {family!r}")


# -- quadratic form invariants ------------------------------------------------------


def hasse_witt(q: DiagonalForm) -> SymbolProduct:
    """hw(q) = prod_{i<j} (a_i, a_j)."""
    out = trivial(2)
    n = len(q.entries)
    for i in range(n):
        for j in range(i + 1, n):
            out = out.mul(symbol(q.entries[i], q.entries[j], 2))
    return out


def discriminant(q: DiagonalForm) -> FieldElem:
    return elem_mul(*q.entries) if len(q.entries) > 1 else q.entries[0]


def frohlich_obstruction(q: DiagonalForm, q_e: DiagonalForm, spin_pairs) -> SymbolProduct:
    """hw(q) hw(q_e) (d, -d_e) prod (a_i, sp(rho_i)); the twist q_e is caller data."""
    out = hasse_witt(q).mul(hasse_witt(q_e))
    d = discriminant(q)
    d_e = discriminant(q_e)
    out = out.mul(symbol(d, elem_mul(rat(-1), d_e), 2))
    for a_i, sp_i in spin_pairs:
        _check_nonzero(a_i, sp_i)
        out = out.mul(symbol(a_i, sp_i, 2))
    return out


def double_cover_twist(o_plus: SymbolProduct, d_f: FieldElem) -> SymbolProduct:
    """Negative-cover obstruction (-1, d_f) * O_plus; an involution on classes."""
    if o_plus.p != 2:
        raise PrimeMismatch("double covers live at p = 2")
    _check_nonzero(d_f)
    return symbol(rat(-1), d_f, 2).mul(o_plus)
