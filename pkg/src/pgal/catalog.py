"""The group catalog: named p-group families built from consistent normal forms.

Each family is described by generators in a fixed collection order with
relative orders, power words and conjugation words; the multiplication
table is produced by collection from the left.  No general coset
enumeration is performed: every family here has a known normal form, and
the table validation (Latin square + associativity) rejects inconsistent
data.
"""

from __future__ import annotations

import itertools
import re

import numpy as np

from .errors import OrderTooLarge, RelationInconsistent, UnknownFamily
from .groups import MAX_ORDER, Group, direct_product


class _PcPresentation:
    """Collection-from-the-left engine for a consistent pc presentation.

    Generators are listed in collection order; the normal form is
    x_0^{a_0} ... x_{k-1}^{a_{k-1}} with 0 <= a_i < rel_orders[i].
    `powers[i]` expands x_i^{e_i} as {pos: exp} over positions > i, and
    `conj[(i, j)]` (i < j) expands x_i^{-1} x_j x_i the same way over
    positions > i.
    """

    def __init__(self, rel_orders, powers=None, conj=None):
        self.e = list(rel_orders)
        self.k = len(self.e)
        self.powers = {i: sorted((powers or {}).get(i, {}).items()) for i in range(self.k)}
        self.conj = {}
        for (i, j), word in (conj or {}).items():
            self.conj[(i, j)] = sorted(word.items())

    def _conj_word(self, i: int, j: int):
        return self.conj.get((i, j), [(j, 1)])

    def right_mul_gen(self, nf: tuple, i: int) -> tuple:
        tail = [(j, nf[j]) for j in range(i + 1, self.k) if nf[j]]
        if not tail:
            a = nf[i] + 1
            out = list(nf)
            if a < self.e[i]:
                out[i] = a
                return tuple(out)
            out[i] = 0
            res = tuple(out)
            for pos, exp in self.powers[i]:
                for _ in range(exp):
                    res = self.right_mul_gen(res, pos)
            return res
        prefix = list(nf)
        for j, _ in tail:
            prefix[j] = 0
        res = self.right_mul_gen(tuple(prefix), i)
        for j, a in tail:
            word = self._conj_word(i, j)
            for _ in range(a):
                for pos, exp in word:
                    for _ in range(exp):
                        res = self.right_mul_gen(res, pos)
        return res

    def build_table(self) -> tuple[np.ndarray, dict]:
        forms = list(itertools.product(*[range(m) for m in self.e]))
        index = {f: i for i, f in enumerate(forms)}
        n = len(forms)
        T = np.zeros((n, n), dtype=np.int64)
        # incremental fill: b = b' * x_j with j the last nonzero position
        for bi, b in enumerate(forms):
            if bi == 0:
                T[:, 0] = np.arange(n)
                continue
            j = max(pos for pos in range(self.k) if b[pos])
            prev = list(b)
            prev[j] -= 1
            pi = index[tuple(prev)]
            for ai, a in enumerate(forms):
                T[ai, bi] = index[self.right_mul_gen(forms[int(T[ai, pi])], j)]
        return T, index


def _pc_group(rel_orders, powers, conj, display, name) -> Group:
    pres = _PcPresentation(rel_orders, powers, conj)
    T, index = pres.build_table()
    gens = []
    for gname, pos in display:
        unit = tuple(1 if t == pos else 0 for t in range(pres.k))
        gens.append((gname, index[unit]))
    try:
        return Group(T, gens, name=name)
    except RelationInconsistent as exc:
        raise RelationInconsistent(f"presentation for {name} fails to close: {exc.detail}") from exc


# -- individual families ------------------------------------------------------


def cyclic(n: int) -> Group:
    if n < 1:
        raise UnknownFamily("cyclic group needs order >= 1")
    if n > MAX_ORDER:
        raise OrderTooLarge(f"order {n} exceeds cap {MAX_ORDER}")
    T = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    gens = [("sigma", 1)] if n > 1 else []
    return Group(T, gens, name=f"C{n}")


def elem_abelian(p: int, r: int) -> Group:
    if p ** r > MAX_ORDER:
        raise OrderTooLarge(f"order {p ** r} exceeds cap {MAX_ORDER}")
    G = cyclic(p)
    out = G
    for _ in range(r - 1):
        out = direct_product(out, cyclic(p))
    if r == 0:
        return cyclic(1)
    gens = []
    n = p ** r
    for i in range(r):
        gens.append((f"e{i + 1}", p ** (r - 1 - i)))
    return Group(out.np_table, gens, name=f"EA({p},{r})")


def dihedral(order: int) -> Group:
    n = _two_power_log(order, minimum=8)
    m = order // 2
    return _pc_group(
        [2, m],
        {},
        {(0, 1): {1: m - 1}},
        [("sigma", 1), ("tau", 0)],
        f"D{order}",
    )


def semidihedral(order: int) -> Group:
    n = _two_power_log(order, minimum=16)
    m = order // 2
    return _pc_group(
        [2, m],
        {},
        {(0, 1): {1: m // 2 - 1}},
        [("sigma", 1), ("tau", 0)],
        f"SD{order}",
    )


def quaternion(order: int) -> Group:
    n = _two_power_log(order, minimum=8)
    m = order // 2
    return _pc_group(
        [2, m],
        {0: {1: m // 2}},
        {(0, 1): {1: m - 1}},
        [("sigma", 1), ("tau", 0)],
        f"Q{order}",
    )


def modular_max_cyclic(order: int) -> Group:
    """M_{2^n}: the modular 2-group with cyclic subgroup of index 2.

    Same presentation as M(2^n), but carrying the sigma/tau generator names
    used for the index-2 families.
    """
    _two_power_log(order, minimum=16)
    m = order // 2
    return _pc_group(
        [2, m],
        {},
        {(0, 1): {1: m // 2 + 1}},
        [("sigma", 1), ("tau", 0)],
        f"M{order}",
    )


def modular_pgroup(p: int, n: int) -> Group:
    """M(p^n), n >= 3: alpha of order p^(n-1), beta of order p, beta alpha = alpha^(1+p^(n-2)) beta."""
    if n < 3:
        raise UnknownFamily("modular group needs n >= 3")
    if p ** n > MAX_ORDER:
        raise OrderTooLarge(f"order {p ** n} exceeds cap {MAX_ORDER}")
    m = p ** (n - 1)
    q = p ** (n - 2)
    return _pc_group(
        [p, m],
        {},
        {(0, 1): {1: (1 - q) % m}},
        [("alpha", 1), ("beta", 0)],
        f"M({p}^{n})",
    )


def heisenberg(p: int) -> Group:
    """G1: the nonabelian group of order p^3 and exponent p (p odd)."""
    return _pc_group(
        [p, p, p],
        {},
        {(0, 1): {1: 1, 2: p - 1}},
        [("g1", 0), ("g2", 1), ("g3", 2)],
        f"G1({p})",
    )


def g2_group(p: int) -> Group:
    """G2: order p^3, g1 of order p^2, g1 g2 = g2 g1^(p+1)."""
    return _pc_group(
        [p, p * p],
        {},
        {(0, 1): {1: p + 1}},
        [("g1", 1), ("g2", 0)],
        f"G2({p})",
    )


def g3_group(p: int) -> Group:
    return _pc_group(
        [p, p, p, p],
        {1: {3: 1}},
        {(0, 1): {1: 1, 2: p - 1}},
        [("g1", 1), ("g2", 0), ("g3", 2), ("g4", 3)],
        f"G3({p})",
    )


def g4_group(p: int) -> Group:
    return _pc_group(
        [p, p, p, p],
        {0: {2: 1}, 1: {3: 1}},
        {(0, 1): {1: 1, 2: p - 1}},
        [("g1", 1), ("g2", 0), ("g3", 2), ("g4", 3)],
        f"G4({p})",
    )


def g5_group(p: int) -> Group:
    return _pc_group(
        [p, p, p, p],
        {1: {2: 1}, 2: {3: 1}},
        {(0, 1): {1: 1, 3: p - 1}},
        [("g1", 1), ("g2", 0), ("g3", 2), ("g4", 3)],
        f"G5({p})",
    )


def g6_group(p: int) -> Group:
    return _pc_group(
        [p, p, p, p],
        {2: {3: 1}},
        {(0, 1): {1: 1, 3: p - 1}},
        [("g1", 1), ("g2", 0), ("g3", 2), ("g4", 3)],
        f"G6({p})",
    )


def g7_group(p: int) -> Group:
    """G7 = (C_p)^3 x| C_p with [mu,tau]=sigma, [mu,lambda]=tau, sigma central."""
    return _pc_group(
        [p, p, p, p],
        {},
        {(0, 1): {1: 1, 2: p - 1}, (0, 2): {2: 1, 3: p - 1}},
        [("sigma", 3), ("tau", 2), ("lambda", 1), ("mu", 0)],
        f"G7({p})",
    )


def mss_semidirect(p: int, n: int, j: int) -> Group:
    """M_j x| C_{p^n}: the cyclic group ring quotient F_p[C_{p^n}]/(s-1)^j acted on by s."""
    if not 1 <= j <= p ** n:
        raise UnknownFamily(f"need 1 <= j <= p^n, got j={j}")
    order = p ** (j + n)
    if order > MAX_ORDER:
        raise OrderTooLarge(f"order {order} exceeds cap {MAX_ORDER}")
    pn = p ** n
    # module basis (s-1)^0 .. (s-1)^(j-1); s acts by b_i -> b_i + b_{i+1}
    A = [[1 if (r == c or r == c + 1) else 0 for c in range(j)] for r in range(j)]
    mats = []
    cur = [[1 if r == c else 0 for c in range(j)] for r in range(j)]
    for _ in range(pn):
        mats.append(cur)
        cur = [[sum(A[r][x] * cur[x][c] for x in range(j)) % p for c in range(j)] for r in range(j)]
    vecs = list(itertools.product(*[range(p)] * j))
    vindex = {v: i for i, v in enumerate(vecs)}
    npow = len(vecs)
    elems = [(v, t) for v in range(npow) for t in range(pn)]
    n_total = len(elems)
    T = np.zeros((n_total, n_total), dtype=np.int64)
    for i1, (v1, t1) in enumerate(elems):
        M = mats[t1]
        w1 = vecs[v1]
        for i2, (v2, t2) in enumerate(elems):
            w2 = vecs[v2]
            moved = tuple(sum(M[r][c] * w2[c] for c in range(j)) % p for r in range(j))
            total = tuple((w1[r] + moved[r]) % p for r in range(j))
            T[i1, i2] = vindex[total] * pn + (t1 + t2) % pn
    m_unit = vindex[tuple(1 if r == 0 else 0 for r in range(j))] * pn
    gens = [("s", 1), ("m", m_unit)]
    return Group(T, gens, name=f"MSS({p},{n},{j})")


def _two_power_log(order: int, minimum: int) -> int:
    n = order.bit_length() - 1
    if order < minimum or order != 1 << n:
        raise UnknownFamily(f"order {order} not in this 2-power family (min {minimum})")
    if order > MAX_ORDER:
        raise OrderTooLarge(f"order {order} exceeds cap {MAX_ORDER}")
    return n


# -- spec-string front end ----------------------------------------------------

_PARAM_RE = re.compile(r"^([a-zA-Z][a-zA-Z0-9]*)=(-?\d+)$")


def _params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        m = _PARAM_RE.match(piece.strip())
        if not m:
            raise UnknownFamily(f"bad parameter {piece!r}")
        out[m.group(1)] = int(m.group(2))
    return out


def parse_spec(spec: str):
    """Split a catalog spec like 'D:16' or 'G1:p=3' into (family, params)."""
    spec = spec.strip()
    if "*" in spec:
        return "product", {"parts": [parse_spec(s) for s in spec.split("*")]}
    if ":" not in spec:
        raise UnknownFamily(f"spec {spec!r} has no family prefix")
    fam, _, rest = spec.partition(":")
    fam = fam.strip()
    if fam in ("C", "D", "SD", "Q", "M"):
        try:
            return fam, {"order": int(rest)}
        except ValueError:
            raise UnknownFamily(f"spec {spec!r} needs a numeric order")
    return fam, _params(rest)


def canonical_spec(spec: str) -> str:
    fam, params = parse_spec(spec)
    if fam == "product":
        return "*".join(canonical_spec(_unparse(f, p)) for f, p in params["parts"])
    return _unparse(fam, params)


def _unparse(fam, params) -> str:
    if "order" in params:
        return f"{fam}:{params['order']}"
    inner = ",".join(f"{k}={v}" for k, v in sorted(params.items()))
    return f"{fam}:{inner}"


_FAMILIES = {
    "C": lambda prm: cyclic(prm["order"]),
    "D": lambda prm: dihedral(prm["order"]),
    "SD": lambda prm: semidihedral(prm["order"]),
    "Q": lambda prm: quaternion(prm["order"]),
    "M": lambda prm: modular_max_cyclic(prm["order"]),
    "EA": lambda prm: elem_abelian(prm["p"], prm["r"]),
    "G1": lambda prm: heisenberg(prm["p"]),
    "G2": lambda prm: g2_group(prm["p"]),
    "G3": lambda prm: g3_group(prm["p"]),
    "G4": lambda prm: g4_group(prm["p"]),
    "G5": lambda prm: g5_group(prm["p"]),
    "G6": lambda prm: g6_group(prm["p"]),
    "G7": lambda prm: g7_group(prm["p"]),
    "Mmod": lambda prm: modular_pgroup(prm["p"], prm["n"]),
    "MSS": lambda prm: mss_semidirect(prm["p"], prm["n"], prm["j"]),
}


def build_group(spec: str) -> Group:
    """Build a catalog group from its spec string (see parse_spec)."""
    fam, params = parse_spec(spec)
    if fam == "product":
        parts = [build_group(_unparse(f, p)) for f, p in params["parts"]]
        out = parts[0]
        for nxt in parts[1:]:
            out = direct_product(out, nxt)
        return out
    if fam not in _FAMILIES:
        raise UnknownFamily(f"unknown family {fam!r}")
    missing = _required_params(fam) - set(params)
    if missing:
        raise UnknownFamily(f"{fam} needs parameters {sorted(missing)}")
    return _FAMILIES[fam](params)


def _required_params(fam: str) -> set:
    if fam in ("C", "D", "SD", "Q", "M"):
        return {"order"}
    if fam == "EA":
        return {"p", "r"}
    if fam == "Mmod":
        return {"p", "n"}
    if fam == "MSS":
        return {"p", "n", "j"}
    return {"p"}
