"""Catalog construction, quotients, pullbacks and structure invariants."""

import pytest

from pgal.catalog import build_group, canonical_spec
from pgal.errors import (
    NotNormal,
    NotPGroup,
    OrderTooLarge,
    RelationInconsistent,
    TargetMismatch,
    UnknownFamily,
    BadM,
)
from pgal.groups import (
    DualActionData,
    Group,
    GroupHom,
    Subgroup,
    direct_product,
    dual_action_predicate,
    find_isomorphism,
    is_isomorphic,
    max_elem_abelian_quotient,
    min_generators,
    pullback,
    quotient,
    structure_invariants,
    subgroup_generated,
    subgroups_of_index2,
    trivial_subgroup,
)


def test_trivial_group_table():
    G = build_group("C:1")
    assert G.order == 1
    assert G.table == [[0]]


def test_dihedral_16_defining_relation():
    G = build_group("D:16")
    s, t = G.gen("sigma"), G.gen("tau")
    assert G.element_order(s) == 8
    assert G.element_order(t) == 2
    assert G.mul(t, s) == G.mul(G.power(s, -1), t)


def test_semidihedral_16_defining_relation():
    G = build_group("SD:16")
    s, t = G.gen("sigma"), G.gen("tau")
    assert G.mul(t, s) == G.mul(G.power(s, 3), t)


def test_quaternion_16_defining_relations():
    G = build_group("Q:16")
    s, t = G.gen("sigma"), G.gen("tau")
    assert G.power(t, 2) == G.power(s, 4)
    assert G.mul(t, s) == G.mul(G.power(s, -1), t)


def test_modular_16_defining_relation():
    G = build_group("M:16")
    s, t = G.gen("sigma"), G.gen("tau")
    assert G.mul(t, s) == G.mul(G.power(s, 5), t)


def test_modular_27_relations():
    G = build_group("Mmod:p=3,n=3")
    a, b = G.gen("alpha"), G.gen("beta")
    assert G.element_order(a) == 9
    assert G.element_order(b) == 3
    assert G.mul(b, a) == G.mul(G.power(a, 4), b)


def test_heisenberg_relations():
    G = build_group("G1:p=3")
    g1, g2, g3 = G.gen("g1"), G.gen("g2"), G.gen("g3")
    assert G.order == 27
    assert all(G.element_order(g) == 3 for g in (g1, g2, g3))
    assert G.mul(g1, g2) == G.mul(G.mul(g2, g1), g3)
    assert G.center().elements == subgroup_generated(G, [g3]).elements


def test_g2_group_relations():
    G = build_group("G2:p=3")
    g1, g2 = G.gen("g1"), G.gen("g2")
    assert G.element_order(g1) == 9
    assert G.element_order(g2) == 3
    assert G.mul(g1, g2) == G.mul(g2, G.power(g1, 4))


@pytest.mark.parametrize("spec,relations", [
    ("G3:p=3", {"g1^p": "g4", "g2^p": "1"}),
    ("G4:p=3", {"g1^p": "g4", "g2^p": "g3"}),
    ("G5:p=3", {"g1^p": "g3", "g2^p": "1"}),
    ("G6:p=3", {"g1^p": "1", "g2^p": "1"}),
])
def test_order_81_families(spec, relations):
    G = build_group(spec)
    assert G.order == 81
    g1, g2 = G.gen("g1"), G.gen("g2")
    g3, g4 = G.gen("g3"), G.gen("g4")
    want = {"1": 0, "g3": g3, "g4": g4}
    assert G.power(g1, 3) == want[relations["g1^p"]]
    assert G.power(g2, 3) == want[relations["g2^p"]]
    # [g2, g1] is the stated central element
    comm = G.commutator(g2, g1)
    if spec in ("G3:p=3", "G4:p=3"):
        assert comm == g3
    else:
        assert comm == g4
    # centrality of g3 and g4
    for c in (g3, g4):
        assert all(G.mul(c, x) == G.mul(x, c) for x in range(G.order))


def test_g5_power_chain():
    G = build_group("G5:p=3")
    g1 = G.gen("g1")
    assert G.element_order(g1) == 27


def test_g7_relations():
    G = build_group("G7:p=3")
    mu, lam, tau, sig = G.gen("mu"), G.gen("lambda"), G.gen("tau"), G.gen("sigma")
    assert G.commutator(mu, tau) == sig
    assert G.commutator(mu, lam) == tau
    assert G.commutator(lam, tau) == 0
    assert all(G.mul(sig, x) == G.mul(x, sig) for x in range(G.order))


def test_mss_semidirect_matches_g7_relations():
    """MSS(p,1,3) realizes the same presentation as G7 (order 81 case)."""
    G = build_group("MSS:p=3,n=1,j=3")
    s, m = G.gen("s"), G.gen("m")
    tau = G.commutator(s, m)
    sig = G.commutator(s, tau)
    assert sig != 0
    assert G.commutator(s, sig) == 0          # (sigma-1)^3 = 0
    assert G.commutator(m, tau) == 0
    assert all(G.mul(sig, x) == G.mul(x, sig) for x in range(G.order))
    assert len(G.closure([s, m])) == 81


def test_mss_small_is_isomorphic_to_heisenberg():
    # M_2 x| C_3 has order 27, exponent 3 and is nonabelian, so it is G1(3)
    A = build_group("MSS:p=3,n=1,j=2")
    B = build_group("G1:p=3")
    assert is_isomorphic(A, B)


def test_elem_abelian_and_products():
    G = build_group("EA:p=2,r=3")
    assert G.order == 8
    assert G.exponent() == 2
    H = build_group("C:4*C:2")
    assert H.order == 8
    assert sorted(H.element_orders()) == [1, 2, 2, 2, 4, 4, 4, 4]


def test_unknown_family_and_too_large():
    with pytest.raises(UnknownFamily):
        build_group("X:8")
    with pytest.raises(UnknownFamily):
        build_group("D:12")
    with pytest.raises(OrderTooLarge):
        build_group("C:8192")


def test_from_table_rejects_broken_table():
    with pytest.raises(RelationInconsistent):
        Group([[0, 1], [1, 1]], [("a", 1)])


def test_canonical_spec_roundtrip():
    assert canonical_spec("Mmod:n=3,p=3") == "Mmod:n=3,p=3"
    assert canonical_spec("D:16") == "D:16"


# -- pullbacks -----------------------------------------------------------------


def _mod2_hom(C4, C2):
    return GroupHom(C4, C2, tuple(x % 2 for x in range(4)))


def test_pullback_c4_c4_over_c2():
    C4 = build_group("C:4")
    C2 = build_group("C:2")
    f = _mod2_hom(C4, C2)
    P, p1, p2 = pullback(C4, C4, f, f)
    assert P.order == 8
    assert is_isomorphic(P, build_group("C:4*C:2"))
    assert p1.is_surjective() and p2.is_surjective()


def test_pullback_over_trivial_group_is_direct_product():
    C4 = build_group("C:4")
    C3 = build_group("C:3")
    T = build_group("C:1")
    f1 = GroupHom(C4, T, (0,) * 4)
    f2 = GroupHom(C3, T, (0,) * 3)
    P, _, _ = pullback(C4, C3, f1, f2)
    assert is_isomorphic(P, direct_product(C4, C3))


def test_pullback_reconstruction_from_trivially_intersecting_normals():
    G = build_group("C:4*C:2")
    a = G.gen("sigma")            # order 4
    b = G.gen("sigma'")           # order 2 from the second factor
    N1 = subgroup_generated(G, [G.power(a, 2)])
    N2 = subgroup_generated(G, [b])
    assert set(N1.elements) & set(N2.elements) == {0}
    Q1, pr1 = quotient(G, N1)
    Q2, pr2 = quotient(G, N2)
    N12 = subgroup_generated(G, list(N1.elements) + list(N2.elements))
    F, prF = quotient(G, N12)
    h1 = GroupHom(Q1, F, tuple(prF(x) for x in _section(pr1, Q1)))
    h2 = GroupHom(Q2, F, tuple(prF(x) for x in _section(pr2, Q2)))
    P, _, _ = pullback(Q1, Q2, h1, h2)
    assert is_isomorphic(P, G)


def _section(proj, Q):
    sec = [None] * Q.order
    for x in range(proj.source.order):
        z = proj(x)
        if sec[z] is None:
            sec[z] = x
    return sec


def test_pullback_target_mismatch():
    C4 = build_group("C:4")
    C2 = build_group("C:2")
    C3 = build_group("C:3")
    f1 = _mod2_hom(C4, C2)
    f2 = GroupHom(C3, build_group("C:1"), (0, 0, 0))
    with pytest.raises(TargetMismatch):
        pullback(C4, C3, f1, f2)


# -- quotients ------------------------------------------------------------------


def test_quotient_q8_by_center():
    Q8 = build_group("Q:8")
    Z = Q8.center()
    assert Z.order == 2
    Q, proj = quotient(Q8, Z)
    assert is_isomorphic(Q, build_group("EA:p=2,r=2"))
    assert proj.is_surjective()


def test_quotient_by_trivial_is_identity():
    G = build_group("D:8")
    Q, proj = quotient(G, trivial_subgroup(G))
    assert is_isomorphic(Q, G)


def test_modular16_center_and_quotient():
    G = build_group("M:16")
    s = G.gen("sigma")
    assert G.center().elements == subgroup_generated(G, [G.power(s, 2)]).elements
    Q, _ = quotient(G, subgroup_generated(G, [G.power(s, 2)]))
    assert is_isomorphic(Q, build_group("EA:p=2,r=2"))


def test_quotient_not_normal():
    G = build_group("D:8")
    t = G.gen("tau")
    with pytest.raises(NotNormal):
        quotient(G, subgroup_generated(G, [t]))


# -- structure invariants --------------------------------------------------------


@pytest.mark.parametrize("n", [4, 5])
def test_index2_cyclic_families_structure(n):
    """Centers, exponents and central quotients of the four order-2^n families."""
    order = 2 ** n
    for fam in ("D", "Q", "SD", "M"):
        if fam in ("SD", "M") and n < 4:
            continue
        G = build_group(f"{fam}:{order}")
        s = G.gen("sigma")
        assert G.exponent() == 2 ** (n - 1)
        if fam == "M":
            want_center = subgroup_generated(G, [G.power(s, 2)])
        else:
            want_center = subgroup_generated(G, [G.power(s, 2 ** (n - 2))])
        assert G.center().elements == want_center.elements
        Q, _ = quotient(G, subgroup_generated(G, [G.power(s, 2 ** (n - 2))]))
        if fam == "M":
            expect = build_group(f"C:{2 ** (n - 2)}*C:2")
        else:
            expect = build_group(f"D:{2 ** (n - 1)}")
        assert is_isomorphic(Q, expect)
        assert Q.exponent() == 2 ** (n - 2)


def test_structure_invariants_examples():
    assert build_group("D:16").exponent() == 8
    inv = structure_invariants(build_group("G1:p=3"))
    assert inv.center.order == 3
    assert min_generators(build_group("C:1")) == 0
    assert min_generators(build_group("Q:8")) == 2
    assert min_generators(build_group("EA:p=2,r=3")) == 3


def test_min_generators_quotient_monotone():
    for spec in ("D:16", "Q:16", "M:16", "G1:p=3", "C:4*C:2"):
        G = build_group(spec)
        dG = min_generators(G)
        Z = G.center()
        for x in Z.elements:
            if x == 0:
                continue
            N = subgroup_generated(G, [x])
            Q, _ = quotient(G, N)
            assert min_generators(Q) <= dG


def test_subgroups_of_index2():
    assert len(subgroups_of_index2(build_group("EA:p=2,r=2"))) == 3
    assert subgroups_of_index2(build_group("C:3")) == []
    q8 = build_group("Q:8")
    subs = subgroups_of_index2(q8)
    assert len(subs) == 3
    for H in subs:
        assert is_isomorphic(H.as_group(), build_group("C:4"))
        assert H.is_normal()


def test_max_elem_abelian_quotient():
    Q, _ = max_elem_abelian_quotient(build_group("D:8"), 2)
    assert is_isomorphic(Q, build_group("EA:p=2,r=2"))
    E = build_group("EA:p=3,r=2")
    Q2, _ = max_elem_abelian_quotient(E, 3)
    assert is_isomorphic(Q2, E)
    Q3, _ = max_elem_abelian_quotient(build_group("Mmod:p=3,n=3"), 3)
    assert is_isomorphic(Q3, build_group("EA:p=3,r=2"))
    with pytest.raises(NotPGroup):
        max_elem_abelian_quotient(build_group("C:6"), 2)


def test_group_json_roundtrip():
    G = build_group("D:8")
    doc = G.to_json()
    H = Group.from_json(doc)
    assert H.table == G.table
    assert H.generators == G.generators


def test_find_isomorphism_returns_actual_map():
    A = build_group("C:4*C:2")
    B = build_group("C:2*C:4")
    phi = find_isomorphism(A, B)
    assert phi is not None
    for x in range(A.order):
        for y in range(A.order):
            assert phi[A.mul(x, y)] == B.mul(phi[x], phi[y])


# -- dual action predicates -------------------------------------------------------


def test_dual_action_trivial():
    data = DualActionData((4,), {"r": ((1,),)}, {"r": 1})
    for m in (1, 3):
        flags = dual_action_predicate(data, m)
        assert flags["uniform_power"] and flags["pm_one"] and flags["thm24"]


def test_dual_action_inversion_is_pm_one():
    data = DualActionData((4,), {"r": ((3,),)}, {"r": 1})
    flags = dual_action_predicate(data, 3)
    assert flags["pm_one"]
    assert flags["thm24"]          # inversion equals chi -> chi^3 here


def test_dual_action_c8_cube():
    data = DualActionData((8,), {"r": ((3,),)}, {"r": 1})
    flags = dual_action_predicate(data, 3)
    assert flags["thm24"]
    assert flags["uniform_power"]
    assert not flags["pm_one"]


def test_dual_action_bad_m():
    data = DualActionData((8,), {"r": ((3,),)}, {"r": 1})
    with pytest.raises(BadM):
        dual_action_predicate(data, 2)


def test_dual_action_non_power_map():
    # swap of the two factors is not chi -> chi^t
    data = DualActionData((2, 2), {"r": ((0, 1), (1, 0))}, {"r": 1})
    flags = dual_action_predicate(data, 1)
    assert not flags["uniform_power"]
    assert not flags["thm24"]
