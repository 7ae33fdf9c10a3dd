from descent_kit.cosimplicial import basic_fibration, validate_coherence
from descent_kit.finset import FinFunction, FinSetObj, canonical_set, all_functions
from descent_kit.fincat import NatIso
from descent_kit.slices import SliceMor


def fn(dom, cod, mapping):
    return FinFunction.of(FinSetObj(tuple(dom)), FinSetObj(tuple(cod)), mapping)


def test_identity_fibration_levels_relabel():
    p = FinFunction.identity(FinSetObj(("x", "y")))
    fib = basic_fibration(p, 2)
    # all projections are bijections, so every level has the same object count
    assert len(fib.e2) == 2 and len(fib.e3) == 2
    assert validate_coherence(fib, 2).is_empty()


def test_two_to_one_fibration_shapes():
    p = fn("ab", "*", lambda _: "*")
    fib = basic_fibration(p, 2)
    assert len(fib.e2) == 4
    assert len(fib.e3) == 8
    # the degeneracy pulls back along the 2-element diagonal
    assert fib.diagonal.dom.elements == p.dom.elements
    assert fib.diagonal.is_injective()


def test_empty_domain_fibration():
    p = fn("", "x", {})
    fib = basic_fibration(p, 2)
    assert len(fib.e2) == 0 and len(fib.e3) == 0
    assert validate_coherence(fib, 2).is_empty()


def test_face_projections_follow_omit_convention():
    p = fn("ab", "*", lambda _: "*")
    fib = basic_fibration(p, 3)
    from descent_kit.finset import unpair_label
    for t in fib.e2.elements:
        e0, e1 = unpair_label(t)
        assert fib.proj_omit0(t) == e1  # omitting coordinate 0 keeps the second
        assert fib.proj_omit1(t) == e0
    for t in fib.e3.elements:
        pair, e2 = unpair_label(t)
        e0, e1 = unpair_label(pair)
        assert fib.tproj_omit2(t) == pair
        r0 = fib.tproj_omit0(t)
        assert unpair_label(r0) == (e1, e2)
        r1 = fib.tproj_omit1(t)
        assert unpair_label(r1) == (e0, e2)


def test_basic_fibration_coherence_small_sweep():
    # must hold by universal-property reasoning; the run is the verification
    for esize in range(0, 3):
        for bsize in range(1, 3):
            e, b = canonical_set(esize, "e"), canonical_set(bsize, "b")
            for p in all_functions(e, b):
                fib = basic_fibration(p, 3)
                rep = validate_coherence(fib, 2)
                assert rep.is_empty(), (p, str(rep))


def test_theta_inverse_is_natural():
    p = fn("ab", "*", lambda _: "*")
    fib = basic_fibration(p, 2)
    assert fib.theta.inverse().check_naturality(2) == []


def test_tampered_theta_detected():
    # twist theta by a fiber swap: typechecks, breaks the presentation equations
    p = fn("ab", "*", lambda _: "*")
    fib = basic_fibration(p, 3)
    from descent_kit.mutations import invert_theta
    broken = invert_theta(fib)
    rep = validate_coherence(broken, 3)
    assert not rep.is_empty()
    assert any("presentation" in f.equation or "naturality" in f.equation
               for f in rep.failures)
