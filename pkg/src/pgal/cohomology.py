"""2-cocycle arithmetic with mu_p coefficients (trivial module).

Conventions fixed throughout: cocycles are normalized (f(1,.) = f(.,1) = 0),
values are exponents of a fixed primitive p-th root, and factor sets are
extracted with the section that picks the least-index preimage.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .catalog import cyclic
from .errors import (
    BadIndexSubgroup,
    GInH,
    IdentityElement,
    KernelNotCentral,
    KernelNotPrime,
    NotACocycle,
    PreimageOrderMismatch,
    PrimeMismatch,
    QuotientConditionFails,
    TooLarge,
)
from .groups import (
    MAX_ORDER,
    Group,
    GroupHom,
    Subgroup,
    quotient,
    subgroup_generated,
    subgroups_of_index2,
)
from .linalg import GFMatrix
from .arith import is_prime

FULL_TRIPLE_CHECK = 128


def _cocycle_defect(T: np.ndarray, F: np.ndarray, p: int) -> np.ndarray:
    """f(x,y)+f(xy,z)-f(y,z)-f(x,yz) mod p for all triples, as an n^3 array."""
    term1 = F[:, :, None]
    term2 = F[T, :]
    term3 = F[None, :, :]
    term4 = F[:, T]
    return (term1 + term2 - term3 - term4) % p


def is_cocycle_table(group: Group, p: int, values) -> bool:
    F = np.asarray(values, dtype=np.int64) % p
    n = group.order
    if F.shape != (n, n):
        return False
    if F[0].any() or F[:, 0].any():
        return False
    T = group.np_table
    if n <= FULL_TRIPLE_CHECK:
        return not _cocycle_defect(T, F, p).any()
    rng = np.random.default_rng(0xC0C)
    xs, ys, zs = (rng.integers(0, n, 10_000) for _ in range(3))
    lhs = (F[xs, ys] + F[T[xs, ys], zs]) % p
    rhs = (F[ys, zs] + F[xs, T[ys, zs]]) % p
    return bool((lhs == rhs).all())


class Cocycle2:
    """Normalized 2-cocycle on `group` with values in Z/p."""

    def __init__(self, group: Group, p: int, values, check: bool = True):
        self.group = group
        self.p = int(p)
        self.values = np.asarray(values, dtype=np.int64) % self.p
        self.values.setflags(write=False)
        if check and not is_cocycle_table(group, self.p, self.values):
            raise NotACocycle("table violates normalization or the cocycle identity")

    def __call__(self, x: int, y: int) -> int:
        return int(self.values[x, y])

    def vec(self) -> np.ndarray:
        n = self.group.order
        return self.values[1:, 1:].reshape((n - 1) * (n - 1)).copy()

    @classmethod
    def from_vec(cls, group: Group, p: int, vec, check: bool = True) -> "Cocycle2":
        n = group.order
        vals = np.zeros((n, n), dtype=np.int64)
        vals[1:, 1:] = np.asarray(vec, dtype=np.int64).reshape(n - 1, n - 1) % p
        return cls(group, p, vals, check=check)

    def add(self, other: "Cocycle2") -> "Cocycle2":
        if other.group is not self.group or other.p != self.p:
            raise PrimeMismatch("cocycles live on different groups or primes")
        return Cocycle2(self.group, self.p, (self.values + other.values) % self.p, check=False)

    def neg(self) -> "Cocycle2":
        return Cocycle2(self.group, self.p, (-self.values) % self.p, check=False)

    def transport(self, images, target: Group) -> "Cocycle2":
        """Push the cocycle along an isomorphism given by an image list."""
        phi = np.asarray(images, dtype=np.int64)
        vals = np.zeros((target.order, target.order), dtype=np.int64)
        vals[phi[:, None], phi[None, :]] = self.values
        return Cocycle2(target, self.p, vals)

    def to_json(self, group_ref: str | None = None) -> dict:
        return {
            "p": self.p,
            "group": group_ref if group_ref is not None else self.group.to_json(),
            "values": self.values.tolist(),
        }


@dataclass
class ExtensionClass:
    """A cocycle together with its canonical central extension model."""

    cocycle: Cocycle2
    extension: Group
    proj: GroupHom
    kernel_gen: int


# -- factor sets <-> extensions ----------------------------------------------


def cocycle_of_extension(E: Group, proj: GroupHom, kernel_gen: int) -> Cocycle2:
    """Factor set of a central extension via the least-index-preimage section."""
    if proj.source is not E:
        raise KernelNotPrime("projection must start at the extension group")
    ker = [x for x in range(E.order) if proj(x) == 0]
    p = len(ker)
    if not is_prime(p):
        raise KernelNotPrime(f"kernel has order {p}")
    powers = []
    x = 0
    for _ in range(p):
        powers.append(x)
        x = E.mul(x, kernel_gen)
    if x != 0 or sorted(powers) != sorted(ker):
        raise KernelNotPrime("kernel_gen does not generate the kernel")
    for y in range(E.order):
        if E.mul(kernel_gen, y) != E.mul(y, kernel_gen):
            raise KernelNotCentral(f"kernel generator fails to commute with element {y}")
    kpow = {e: j for j, e in enumerate(powers)}
    F = proj.target
    section = [-1] * F.order
    for x in range(E.order):
        z = proj(x)
        if section[z] < 0:
            section[z] = x
    vals = np.zeros((F.order, F.order), dtype=np.int64)
    for a in range(F.order):
        sa = section[a]
        for b in range(F.order):
            t = E.mul(sa, section[b])
            c = section[F.mul(a, b)]
            vals[a, b] = kpow[E.mul(t, E.inv(c))]
    return Cocycle2(F, p, vals)


def extension_of_cocycle(f: Cocycle2) -> ExtensionClass:
    """Group on pairs (zeta-exponent, base element) with twisted multiplication."""
    G, p = f.group, f.p
    n = G.order
    if p * n > MAX_ORDER:
        raise TooLarge(f"extension order {p * n} exceeds cap {MAX_ORDER}")
    if not is_cocycle_table(G, p, f.values):
        raise NotACocycle("input fails the cocycle identity")
    I = np.arange(p)
    zeta_part = (I[:, None, None, None] + I[None, None, :, None] + f.values[None, :, None, :]) % p
    T = (zeta_part * n + G.np_table[None, :, None, :]).reshape(p * n, p * n)
    gens = [("zeta", n)]
    for name, idx in G.generators:
        nm = name if name != "zeta" else "zeta'"
        gens.append((nm, idx))
    E = Group(T, gens, name=f"ext{p}x{G.name or n}")
    proj = GroupHom(E, G, tuple(int(x % n) for x in range(p * n)))
    return ExtensionClass(f, E, proj, n)


# -- verification and class arithmetic ----------------------------------------


class CoboundarySpace:
    """Span of the coboundaries on a fixed (group, p), with witness recovery."""

    def __init__(self, group: Group, p: int):
        self.group = group
        self.p = p
        n = group.order
        C = (n - 1) * (n - 1)
        T = group.np_table
        rows = np.zeros((n - 1, C + (n - 1)), dtype=np.int64)
        for a in range(1, n):
            m = np.zeros((n, n), dtype=np.int64)
            m[a, :] += 1
            m[:, a] += 1
            m -= (T == a).astype(np.int64)
            rows[a - 1, :C] = m[1:, 1:].reshape(C) % p
            rows[a - 1, C + a - 1] = 1
        self.C = C
        self.mat = GFMatrix(C + (n - 1), p)
        self.mat.add_rows(rows)

    def witness(self, vec: np.ndarray):
        """Return the 1-cochain g with delta(g) = vec, or None."""
        n = self.group.order
        t = np.concatenate([np.asarray(vec, dtype=np.int64) % self.p,
                            np.zeros(n - 1, dtype=np.int64)])
        red = self.mat.reduce(np.atleast_2d(t))[0]
        if red[: self.C].any():
            return None
        coeffs = (-red[self.C:]) % self.p
        return [0] + [int(c) for c in coeffs]


_cob_cache: dict = {}


def _cob_space(group: Group, p: int) -> CoboundarySpace:
    key = (id(group), p)
    if key not in _cob_cache:
        _cob_cache[key] = CoboundarySpace(group, p)
    return _cob_cache[key]


def verify(group: Group, p: int, values) -> dict:
    """Check the cocycle conditions and test for being a coboundary."""
    vals = np.asarray(values, dtype=np.int64)
    if not is_cocycle_table(group, p, vals):
        return {"is_cocycle": False, "is_coboundary": False, "witness": None}
    g = _cob_space(group, p).witness((vals % p)[1:, 1:].reshape(-1))
    return {"is_cocycle": True, "is_coboundary": g is not None, "witness": g}


def is_coboundary(f: Cocycle2) -> bool:
    return _cob_space(f.group, f.p).witness(f.vec()) is not None


def class_equal(f1: Cocycle2, f2: Cocycle2) -> bool:
    """Equality in H^2: the difference is a coboundary."""
    if f1.group is not f2.group or f1.p != f2.p:
        return False
    diff = (f1.values - f2.values) % f1.p
    return _cob_space(f1.group, f1.p).witness(diff[1:, 1:].reshape(-1)) is not None


# -- H^2 enumeration -----------------------------------------------------------


@dataclass
class H2Result:
    dimension: int
    class_count: int
    representatives: list
    complete: bool


def _cocycle_equation_space(group: Group, p: int) -> GFMatrix:
    n = group.order
    C = (n - 1) * (n - 1)
    T = group.np_table
    M = GFMatrix(C, p)
    ys = np.arange(1, n)
    chunk = max(1, 4096 // max(1, n - 1))
    for x in range(1, n):
        for y0 in range(1, n, chunk):
            yblk = np.arange(y0, min(n, y0 + chunk))
            Y = np.repeat(yblk, n - 1)
            Z = np.tile(ys, len(yblk))
            m = len(Y)
            rows = np.arange(m)
            B = np.zeros((m, C), dtype=np.int64)
            c1 = (x - 1) * (n - 1) + (Y - 1)
            np.add.at(B, (rows, c1), 1)
            xy = T[x, Y]
            mask = xy != 0
            c2 = (xy - 1) * (n - 1) + (Z - 1)
            np.add.at(B, (rows[mask], c2[mask]), 1)
            c3 = (Y - 1) * (n - 1) + (Z - 1)
            np.add.at(B, (rows, c3), -1)
            yz = T[Y, Z]
            mask4 = yz != 0
            c4 = (x - 1) * (n - 1) + (yz - 1)
            np.add.at(B, (rows[mask4], c4[mask4]), -1)
            M.add_rows(B % p)
    return M


def h2_enumerate(group: Group, p: int, max_reps: int = 4096) -> H2Result:
    """Dimension of H^2(G, mu_p) and class representatives.

    All p^dim classes are materialized when that count is at most max_reps;
    otherwise only a basis of representatives is returned.
    """
    n = group.order
    if p * n > MAX_ORDER:
        raise TooLarge("extension group would exceed the table cap")
    if (p == 2 and n > 64) or (p == 3 and n > 81) or (p > 3 and (n - 1) ** 2 > 6400):
        raise TooLarge(f"H^2 linear algebra not supported at order {n} for p={p}")
    if n == 1:
        zero = Cocycle2(group, p, np.zeros((1, 1), dtype=np.int64), check=False)
        return H2Result(0, 1, [zero], True)
    eq = _cocycle_equation_space(group, p)
    z_basis = eq.nullspace()
    comp = GFMatrix((n - 1) * (n - 1), p)
    cob = CoboundarySpace(group, p)
    comp.add_rows(cob.mat.rows[:, : cob.C])
    chosen = []
    for v in z_basis:
        if comp.add_rows(np.atleast_2d(v)):
            chosen.append(v % p)
    h = len(chosen)
    count = p ** h
    reps = []
    if count <= max_reps:
        for coeffs in itertools.product(range(p), repeat=h):
            vec = np.zeros((n - 1) * (n - 1), dtype=np.int64)
            for c, v in zip(coeffs, chosen):
                vec = (vec + c * v) % p
            reps.append(Cocycle2.from_vec(group, p, vec, check=False))
        complete = True
    else:
        reps = [Cocycle2.from_vec(group, p, v, check=False) for v in chosen]
        complete = False
    return H2Result(h, count, reps, complete)


# -- restriction, inflation, corestriction -------------------------------------


def restrict(f: Cocycle2, H: Subgroup) -> Cocycle2:
    """Restriction to a subgroup, indexed by H.as_group() element order."""
    if H.parent is not f.group:
        raise KernelNotPrime("subgroup does not live in the cocycle's group")
    els = np.array(H.elements, dtype=np.int64)
    vals = f.values[np.ix_(els, els)]
    return Cocycle2(H.as_group(), f.p, vals, check=False)


def inflate(f: Cocycle2, proj: GroupHom) -> Cocycle2:
    """Pullback along a projection G -> G/N."""
    if proj.target is not f.group:
        raise KernelNotPrime("projection target does not carry the cocycle")
    phi = np.asarray(proj.images, dtype=np.int64)
    vals = f.values[phi[:, None], phi[None, :]]
    return Cocycle2(proj.source, f.p, vals, check=False)


def corestrict_tate(fbar: Cocycle2, H: Subgroup, g: int | None = None) -> Cocycle2:
    """Quadratic corestriction by the four-case transfer formula (p = 2)."""
    if fbar.p != 2:
        raise PrimeMismatch("the transfer formula is implemented for p = 2 only")
    if H.index() != 2:
        raise BadIndexSubgroup(f"subgroup has index {H.index()}, need 2")
    G = H.parent
    Hgrp = H.as_group()
    if fbar.group is not Hgrp and not (
        fbar.group.order == Hgrp.order
        and np.array_equal(fbar.group.np_table, Hgrp.np_table)
    ):
        raise BadIndexSubgroup("cocycle is not indexed by this subgroup")
    if g is None:
        g = min(x for x in range(G.order) if x not in H)
    if g in H:
        raise GInH(f"element {g} lies in the subgroup")
    n = G.order
    T = G.np_table
    inv_g = G.inv(g)
    xs = np.arange(n)
    A = T[xs, inv_g]          # x g^-1
    B = T[g, xs]              # g x
    Cc = T[B, inv_g]          # g x g^-1
    loc = -np.ones(n, dtype=np.int64)
    for e in H.elements:
        loc[e] = H.local(e)
    inH = loc >= 0
    fb = fbar.values
    lx, lAx, lBx, lCx = loc[xs], loc[A], loc[B], loc[Cc]
    right_in = np.where(inH, lx, lAx)      # l[y] / l[A y]
    right_out = np.where(inH, lCx, lBx)    # l[C y] / l[B y]
    t1 = np.where(
        inH[:, None],
        fb[lx[:, None], right_in[None, :]],
        fb[lAx[:, None], right_out[None, :]],
    )
    t2 = np.where(
        inH[:, None],
        fb[lCx[:, None], right_out[None, :]],
        fb[lBx[:, None], right_in[None, :]],
    )
    return Cocycle2(G, 2, (t1 + t2) % 2)


# -- the raise/lower companion construction ------------------------------------


def _resolve_element(G: Group, gen) -> int:
    if isinstance(gen, str):
        return G.gen(gen)
    return int(gen)


def cyclic_step_cocycle(p: int, n_exp: int) -> Cocycle2:
    """Class of 1 -> mu_p -> C_{p^n} -> C_{p^(n-1)} -> 1 (the carry cocycle)."""
    m = p ** (n_exp - 1)
    Cbig = cyclic(p ** n_exp)
    N = subgroup_generated(Cbig, [Cbig.power(1, m)])
    Q, proj = quotient(Cbig, N)
    return cocycle_of_extension(Cbig, proj, Cbig.power(1, m))


def raise_lower(E: ExtensionClass, sigma1, n_exp: int, direction: str) -> ExtensionClass:
    """Companion extension changing the order of sigma1's preimage by p.

    `raise` sends a preimage of order p^(n-1) to one of order p^n; `lower`
    is the inverse.  All relations not involving the sigma1 power persist.
    """
    if direction not in ("raise", "lower"):
        raise QuotientConditionFails(f"unknown direction {direction!r}")
    G = E.proj.target
    p = E.cocycle.p
    s1 = _resolve_element(G, sigma1)
    m = p ** (n_exp - 1)
    if G.element_order(s1) != m:
        raise QuotientConditionFails(f"sigma1 must have order {m} in the base group")
    others = [i for _, i in G.generators if i != s1]
    H = subgroup_generated(G, others)
    if s1 in H or G.order != m * H.order:
        raise QuotientConditionFails("quotient by the other generators is not cyclic of order p^(n-1)")
    if not H.is_normal():
        raise QuotientConditionFails("the subgroup of the other generators is not normal")
    for i in range(1, m):
        if G.power(s1, i) in H:
            raise QuotientConditionFails("sigma1 powers meet the complement subgroup")
    pre = min(x for x in range(E.extension.order) if E.proj(x) == s1)
    pre_order = E.extension.element_order(pre)
    want = m if direction == "raise" else p * m
    if pre_order != want:
        raise PreimageOrderMismatch(
            f"preimage of sigma1 has order {pre_order}, need {want} to {direction}")
    Q, projH = quotient(G, H)
    dlog = {}
    e = 0
    for i in range(m):
        dlog[e] = i
        e = Q.mul(e, projH(s1))
    fc = cyclic_step_cocycle(p, n_exp)
    # quotient of C_{p^n} by <t^m> orders cosets by least element: coset of t^i is i
    expo = np.array([dlog[projH(x)] for x in range(G.order)], dtype=np.int64)
    inf_vals = fc.values[expo[:, None], expo[None, :]]
    sign = 1 if direction == "raise" else -1
    new_vals = (E.cocycle.values + sign * inf_vals) % p
    out = extension_of_cocycle(Cocycle2(G, p, new_vals))
    return out


def lift_order_diag(f: Cocycle2, z: int) -> dict:
    """f(z^(k/2), z^(k/2)) and the order of z's preimages (p = 2)."""
    if f.p != 2:
        raise PrimeMismatch("defined for p = 2")
    if z == 0:
        raise IdentityElement("z must not be the identity")
    k = f.group.element_order(z)
    if k % 2:
        raise QuotientConditionFails("element order must be even")
    h = f.group.power(z, k // 2)
    val = int(f.values[h, h])
    return {"value": val, "lifted_order": k if val == 0 else 2 * k}


def prop54_report(G: Group, H: Subgroup, g: int, fbar: Cocycle2) -> dict:
    """Exponent comparison for a corestricted extension (transfer context).

    Part (2) needs exp(H) even (its argument lifts the half-order power of a
    maximal-order element), so the trivial subgroup is reported inapplicable.
    """
    f = corestrict_tate(fbar, H, g)
    ext2 = extension_of_cocycle(fbar)
    exp_h2 = ext2.extension.exponent()
    ext1 = extension_of_cocycle(f)
    E1 = ext1.extension
    n = G.order
    h1_elems = [i * n + x for i in range(2) for x in H.elements]
    exp_h1 = 1
    for e in h1_elems:
        o = E1.element_order(e)
        exp_h1 = exp_h1 if exp_h1 % o == 0 else _lcm(exp_h1, o)
    exp_h = H.as_group().exponent()
    applicable = exp_h % 2 == 0
    for x in H.elements:
        if not applicable or G.element_order(x) != exp_h:
            continue
        cyc = set()
        t = x
        while t != 0:
            cyc.add(t)
            t = G.mul(t, x)
        cyc.add(0)
        if G.conj(g, x) not in cyc:
            applicable = False
            break
    return {
        "expH1": exp_h1,
        "expH2": exp_h2,
        "ineq_holds": exp_h1 <= exp_h2,
        "part2_applicable": applicable,
        "part2_holds": (exp_h1 == exp_h) if applicable else None,
    }


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def cor_image_search(G: Group, target: Cocycle2):
    """Exhaustive search for (H, fbar) with cor(fbar) ~ target; None if none."""
    if target.p != 2:
        raise PrimeMismatch("search implemented for p = 2")
    if G.order > 16:
        raise TooLarge("corestriction image search limited to order 16")
    for H in subgroups_of_index2(G):
        Hgrp = H.as_group()
        res = h2_enumerate(Hgrp, 2)
        if not res.complete:
            raise TooLarge("subgroup has too many classes to enumerate")
        for rep in res.representatives:
            f = corestrict_tate(rep, H)
            if class_equal(f, target):
                return H, rep
    return None


# -- commutator data off chosen preimages --------------------------------------


def power_commutator_data(E: ExtensionClass, gens: list) -> tuple[list, dict]:
    """Read s_i^p = zeta^(d_ii) and s_i s_j = zeta^(d_ij) s_j s_i off least-index preimages.

    Entries are None when the corresponding element does not land in the
    kernel (the convention-dependent data only exists when it does).
    """
    ext, proj, p = E.extension, E.proj, E.cocycle.p
    kp = {}
    x = 0
    for j in range(p):
        kp[x] = j
        x = ext.mul(x, E.kernel_gen)
    idxs = [_resolve_element(E.proj.target, g) for g in gens]
    pre = []
    for s in idxs:
        pre.append(min(x for x in range(ext.order) if proj(x) == s))
    diag = []
    for s in pre:
        t = ext.power(s, p)
        diag.append(kp.get(t))
    offdiag = {}
    for i in range(len(pre)):
        for j in range(i + 1, len(pre)):
            lhs = ext.mul(pre[i], pre[j])
            rhs = ext.mul(pre[j], pre[i])
            c = ext.mul(lhs, ext.inv(rhs))
            offdiag[(i, j)] = kp.get(c)
    return diag, offdiag
