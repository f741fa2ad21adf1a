import itertools

import pytest

from mixedsurf.groups import (
    FiniteGroup,
    GroupError,
    GroupMap,
    GroupTooLarge,
    Word,
    build_group,
    format_cycles,
    group_signature,
    homomorphism_from_images,
    involutory_automorphisms,
    parse_cycles,
    semidirect_z2,
)

from conftest import CASE1A_GV, GROUPS, fixture_group, s3


def test_word_parse_and_str():
    w = Word.parse("g2 * g5^-1*g6^3")
    assert w.factors == (("g2", 1), ("g5", -1), ("g6", 3))
    assert str(w) == "g2*g5^-1*g6^3"
    for ident in ("", "1", "id", "e", "()"):
        assert Word.parse(ident).factors == ()
    with pytest.raises(GroupError):
        Word.parse("g1**g2")


def test_cycles_round_trip():
    p = parse_cycles("(1 3 2)(4 5)", 6)
    assert p == (2, 0, 1, 4, 3, 5)
    assert format_cycles(p) == "(1 3 2)(4 5)"
    assert format_cycles(tuple(range(4))) == "()"
    with pytest.raises(GroupError):
        parse_cycles("(1 2)(2 3)", 3)


def test_small_closures():
    assert build_group([[1, 0]]).order == 2
    S3 = s3()
    assert S3.order == 6
    assert not S3.is_abelian()
    assert S3.table[0] == list(range(6))


def test_right_action_convention():
    # x applied first: (1 2)*(2 3) sends 1 -> 2 -> 3
    G = build_group({"x": parse_cycles("(1 2)", 3), "y": parse_cycles("(2 3)", 3)})
    xy = G.mul(G.generators["x"], G.generators["y"])
    assert format_cycles(G.element_labels[xy]) == "(1 3 2)"


def test_element_cap():
    with pytest.raises(GroupTooLarge):
        build_group([parse_cycles("(1 2 3 4 5 6 7)", 7), parse_cycles("(1 2)", 7)], cap=100)


def test_element_orders_in_s3():
    S3 = s3()
    a, b = S3.generators["a"], S3.generators["b"]
    assert S3.element_order(0) == 1
    assert S3.element_order(a) == 2
    assert S3.element_order(b) == 3


def test_word_evaluation():
    Z2 = fixture_group("z2.grp")
    assert Z2.evaluate_word("") == 0
    assert Z2.evaluate_word("g1*g1") == 0
    S3 = s3()
    a, b = S3.generators["a"], S3.generators["b"]
    assert S3.evaluate_word("b^-1") == S3.inv[b]
    assert S3.evaluate_word("a*b^2") == S3.mul(a, b, b)
    with pytest.raises(GroupError):
        S3.evaluate_word("c")


def test_reference_word_is_an_involution():
    G = fixture_group("sg256_47930.grp")
    x = G.element(CASE1A_GV[0])
    assert G.element_order(x) == 2
    assert G.order == 256


def test_class_and_centralizer():
    S3 = s3()
    a = S3.generators["a"]
    assert S3.conjugacy_class(0) == {0}
    assert S3.centralizer(0) == frozenset(S3.elements)
    assert len(S3.conjugacy_class(a)) == 3
    assert len(S3.centralizer(a)) == 2


@pytest.mark.parametrize("name", ["sg48_38.grp", "sg24_14.grp", "sg64_153.grp", "s3.grp"])
def test_class_equation(name):
    G = fixture_group(name)
    for x in G.elements:
        assert len(G.conjugacy_class(x)) * len(G.centralizer(x)) == G.order
    assert sum(len(c) for c in G.conjugacy_classes()) == G.order


def test_subgroup_generated():
    S3 = s3()
    assert S3.subgroup_generated([]) == {0}
    assert len(S3.subgroup_generated([S3.generators["b"]])) == 3
    G = fixture_group("sg256_47930.grp")
    assert len(G.subgroup_generated([G.element(w) for w in CASE1A_GV])) == 128


@pytest.mark.parametrize("path", sorted(GROUPS.glob("*.grp")), ids=lambda p: p.stem)
def test_fixture_tables(path):
    G = fixture_group(path.name)
    assert G.check_associativity(samples=1000)
    assert all(G.mul(x, G.inv[x]) == 0 for x in G.elements)
    assert G.generates(G.generators.values())
    sid = G.metadata.get("small group id")
    if sid:
        assert G.order == int(sid.split(",")[0])


def test_word_for_round_trip():
    for name in ("sg256_47930.grp", "sg48_37.grp", "z6.grp"):
        G = fixture_group(name)
        for x in G.elements:
            assert G.evaluate_word(G.word_for(x)) == x
    G = fixture_group("sg256_47930.grp")
    # collected words reproduce the reference spelling
    assert [str(G.word_for(G.element(w))) for w in CASE1A_GV] == CASE1A_GV


def test_index_two_subgroups_file():
    lines = [ln for ln in (GROUPS / "index2_subgroups.txt").read_text().splitlines() if ln and not ln.startswith("#")]
    assert len(lines) >= 30
    for ln in lines:
        head, words = ln.split(":")
        n, i, m, _ = head.split()
        G = fixture_group(f"sg{n}_{i}.grp")
        sub = G.subgroup_generated(G.element(w.strip()) for w in words.split(","))
        assert len(sub) == int(m) == G.order // 2
        assert all(G.conjugate(x, g) in sub for x in sub for g in G.generators.values())


def test_group_map_checks_products():
    Z4 = fixture_group("z4.grp")
    with pytest.raises(GroupError):
        GroupMap(Z4, Z4, (0, 1, 1, 1))
    doubling = homomorphism_from_images(Z4, Z4, [Z4.power(Z4.generators["g1"], 2)])
    assert sorted(doubling.image) == sorted({0, Z4.power(1, 2)})
    with pytest.raises(GroupError):
        GroupMap(Z4, Z4, doubling.table, kind="automorphism")


def test_subgroup_embedding():
    G = fixture_group("sg48_38.grp")
    H, emb = G.subgroup([G.element(w) for w in ("g1", "g4", "g2*g5")])
    assert H.order == 24 and emb.target is G
    assert all(emb(H.mul(x, y)) == G.mul(emb(x), emb(y)) for x in H.elements for y in H.elements)


def test_involutory_automorphisms_small():
    Z2 = fixture_group("z2.grp")
    assert [p.is_identity() for p in involutory_automorphisms(Z2)] == [True]
    Z3 = build_group([[1, 2, 0]])
    psis = involutory_automorphisms(Z3)
    assert len(psis) == 2
    assert sorted(p.table for p in psis) == [(0, 1, 2), (0, 2, 1)]


def test_involutory_automorphisms_klein_four():
    V4 = build_group([[1, 0, 2, 3], [0, 1, 3, 2]])
    psis = involutory_automorphisms(V4)
    # brute force: all bijections fixing 0 that are automorphisms of order <= 2
    brute = []
    for perm in itertools.permutations(range(1, 4)):
        m = (0, *perm)
        if all(m[V4.mul(x, y)] == V4.mul(m[x], m[y]) for x in V4.elements for y in V4.elements):
            if all(m[m[x]] == x for x in V4.elements):
                brute.append(m)
    assert len(brute) == 4
    assert sorted(p.table for p in psis) == sorted(brute)


def test_semidirect_products():
    Z3 = build_group([[1, 2, 0]])
    inversion = next(p for p in involutory_automorphisms(Z3) if not p.is_identity())
    H, emb = semidirect_z2(Z3, inversion)
    assert H.order == 6 and not H.is_abelian()
    assert group_signature(H) == group_signature(fixture_group("s3.grp"))
    assert len(emb.image) == 3

    Z2 = fixture_group("z2.grp")
    H, _ = semidirect_z2(Z2, involutory_automorphisms(Z2)[0])
    assert H.order == 4 and H.is_abelian()
    assert all(H.element_order(x) <= 2 for x in H.elements)


def test_semidirect_from_order_24_fixture():
    G0 = fixture_group("sg24_14.grp")
    psis = involutory_automorphisms(G0)
    assert any(p.is_identity() for p in psis)
    nontrivial = [p for p in psis if not p.is_identity()]
    H, emb = semidirect_z2(G0, nontrivial[0])
    assert H.order == 48 and not H.is_abelian()
    assert H.check_associativity(samples=1000)
    image = emb.image
    assert all(H.conjugate(x, g) in image for x in image for g in H.elements)


def test_semidirect_rejects_non_involution():
    Z5 = build_group([[1, 2, 3, 4, 0]])
    squaring = homomorphism_from_images(Z5, Z5, [Z5.power(Z5.generators["g1"], 2)], kind="automorphism")
    with pytest.raises(GroupError):
        semidirect_z2(Z5, squaring)
    Z6 = fixture_group("z6.grp")
    for p in involutory_automorphisms(Z6):
        H, _ = semidirect_z2(Z6, p)
        assert H.order == 12


def test_table_validation():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]], {"a": 1})
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 0]], {})
