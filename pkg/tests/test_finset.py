import itertools

import pytest
from hypothesis import given, strategies as st

from descent_kit.finset import (EMPTY, FinFunction, FinSetError, FinSetObj,
                                all_functions, canonical_set, coproduct,
                                equalizer, mediating_map, pair_label, product,
                                pullback, quotient, unpair_label)


labels = st.text(st.characters(codec="ascii", min_codepoint=33), min_size=1, max_size=6)


@given(labels, labels)
def test_pair_label_round_trip(x, y):
    assert unpair_label(pair_label(x, y)) == (x, y)


def test_pair_label_nests():
    inner = pair_label("a,1", "(b)")
    outer = pair_label(inner, "c\\d")
    assert unpair_label(outer) == (inner, "c\\d")


def test_duplicate_labels_rejected():
    with pytest.raises(FinSetError):
        FinSetObj(("a", "a"))


def test_function_totality_checked():
    x, y = FinSetObj(("a", "b")), FinSetObj(("c",))
    with pytest.raises(FinSetError):
        FinFunction(x, y, (("a", "c"),))
    with pytest.raises(FinSetError):
        FinFunction(x, y, (("a", "z"), ("b", "c")))


def test_pullback_over_point_is_product():
    ab = FinSetObj(("a", "b"))
    pt = FinSetObj(("*",))
    f = FinFunction.of(ab, pt, lambda _: "*")
    p = pullback(f, f)
    assert len(p.obj) == 4
    assert p.obj.elements == tuple(pair_label(x, y) for x in "ab" for y in "ab")


def test_pullback_along_identity_is_bijective_projection():
    xy = FinSetObj(("x", "y"))
    ab = FinSetObj(("a", "b", "c"))
    g = FinFunction.of(ab, xy, {"a": "x", "b": "y", "c": "x"})
    p = pullback(FinFunction.identity(xy), g)
    assert p.pr2.is_bijective()


def test_pullback_enumerated_oracle():
    # oracle: pairs (x, y) with f(x) = g(y), filtered directly
    xs, ys, zs = FinSetObj(("a", "b")), FinSetObj(("c",)), FinSetObj(("x", "y"))
    f = FinFunction.of(xs, zs, {"a": "x", "b": "y"})
    g = FinFunction.of(ys, zs, {"c": "x"})
    expect = [(x, y) for x in xs for y in ys if f(x) == g(y)]
    assert expect == [("a", "c")]
    p = pullback(f, g)
    assert p.obj.elements == (pair_label("a", "c"),)


def test_pullback_codomain_mismatch():
    f = FinFunction.identity(FinSetObj(("a",)))
    g = FinFunction.identity(FinSetObj(("b",)))
    with pytest.raises(FinSetError):
        pullback(f, g)


def test_mediating_of_own_projections_is_identity():
    xs, zs = FinSetObj(("a", "b")), FinSetObj(("x",))
    f = FinFunction.of(xs, zs, lambda _: "x")
    p = pullback(f, f)
    u = mediating_map(f, f, p.pr1, p.pr2)
    assert u == FinFunction.identity(p.obj)


def test_mediating_diagonal():
    xs = FinSetObj(("a", "b"))
    zs = FinSetObj(("x",))
    f = FinFunction.of(xs, zs, lambda _: "x")
    u = mediating_map(f, f, FinFunction.identity(xs), FinFunction.identity(xs))
    assert all(u(e) == pair_label(e, e) for e in xs)


def test_mediating_from_singleton_is_pair_selection():
    w = FinSetObj(("w",))
    xs, zs = FinSetObj(("a", "b")), FinSetObj(("x", "y"))
    f = FinFunction.of(xs, zs, {"a": "x", "b": "y"})
    q1 = FinFunction.of(w, xs, {"w": "b"})
    q2 = FinFunction.of(w, xs, {"w": "b"})
    u = mediating_map(f, f, q1, q2)
    assert u("w") == pair_label("b", "b")


def test_mediating_rejects_non_commuting_cone():
    xs, zs = FinSetObj(("a", "b")), FinSetObj(("x", "y"))
    f = FinFunction.of(xs, zs, {"a": "x", "b": "y"})
    w = FinSetObj(("w",))
    q1 = FinFunction.of(w, xs, {"w": "a"})
    q2 = FinFunction.of(w, xs, {"w": "b"})
    with pytest.raises(FinSetError):
        mediating_map(f, f, q1, q2)


def test_mediating_uniqueness_exhaustive():
    # on small cospans, exactly one map satisfies the projection equations
    xs, zs = FinSetObj(("a", "b")), FinSetObj(("x",))
    f = FinFunction.of(xs, zs, lambda _: "x")
    p = pullback(f, f)
    w = FinSetObj(("w0", "w1"))
    q1 = FinFunction.of(w, xs, {"w0": "a", "w1": "b"})
    q2 = FinFunction.of(w, xs, {"w0": "b", "w1": "b"})
    u = mediating_map(f, f, q1, q2)
    solutions = [h for h in all_functions(w, p.obj)
                 if h.then(p.pr1) == q1 and h.then(p.pr2) == q2]
    assert solutions == [u]


def test_quotient_no_pairs_is_identity_like():
    x = FinSetObj(("a", "b"))
    q, proj = quotient(x, [])
    assert q == x and proj == FinFunction.identity(x)


def test_quotient_single_pair():
    x = FinSetObj(("a", "b"))
    q, proj = quotient(x, [("a", "b")])
    assert q.elements == ("a",)
    assert proj("a") == proj("b") == "a"


def test_quotient_transitive_closure():
    x = FinSetObj(("a", "b", "c"))
    q, proj = quotient(x, [("a", "b"), ("b", "c")])
    assert len(q) == 1


def test_quotient_kernel_pair_recovers_relation():
    x = FinSetObj(("a", "b", "c", "d"))
    pairs = [("a", "c"), ("c", "d")]
    q, proj = quotient(x, pairs)
    kernel = {(u, v) for u in x for v in x if proj(u) == proj(v)}
    # closure of pairs plus diagonal
    expect = {(u, v) for u in ("a", "c", "d") for v in ("a", "c", "d")} | {(e, e) for e in x}
    assert kernel == expect


def test_product_with_singleton_relabels():
    x = FinSetObj(("a", "b"))
    s = FinSetObj(("s",))
    pr = product(x, s)
    assert len(pr.obj) == 2 and pr.pr1.is_bijective()


def test_equalizer_of_equal_maps_is_identity():
    x = FinSetObj(("a", "b"))
    f = FinFunction.of(x, x, {"a": "b", "b": "a"})
    eq = equalizer(f, f)
    assert eq.obj == x


def test_equalizer_pointwise_oracle():
    x, y = FinSetObj(("a", "b")), FinSetObj(("u", "v"))
    f = FinFunction.of(x, y, {"a": "u", "b": "u"})
    g = FinFunction.of(x, y, {"a": "u", "b": "v"})
    eq = equalizer(f, g)
    assert eq.obj.elements == ("a",)


def test_coproduct_disjoint_and_jointly_surjective():
    x, y = FinSetObj(("a",)), FinSetObj(("a", "b"))
    c = coproduct(x, y)
    assert len(c.obj) == 3
    assert set(c.in1(e) for e in x).isdisjoint(set(c.in2(e) for e in y))


def _small_sets():
    return [canonical_set(n) for n in range(4)]


def test_pullback_of_epi_is_epi_exhaustive():
    for z in _small_sets():
        for x in _small_sets():
            for y in _small_sets():
                for f in all_functions(x, z):
                    if not f.is_surjective():
                        continue
                    for g in all_functions(y, z):
                        p = pullback(f, g)
                        assert p.pr2.is_surjective(), (f, g)


def test_pullback_swap_symmetry():
    x, y, z = canonical_set(2, "x"), canonical_set(3, "y"), canonical_set(2, "z")
    for f in itertools.islice(all_functions(x, z), 4):
        for g in itertools.islice(all_functions(y, z), 8):
            p, q = pullback(f, g), pullback(g, f)
            swap = {pair_label(a, b): pair_label(b, a)
                    for a in x for b in y if f(a) == g(b)}
            fn = FinFunction.of(p.obj, q.obj, swap)
            assert fn.is_bijective()
            assert fn.then(q.pr1) == p.pr2 and fn.then(q.pr2) == p.pr1
