"""Structure-map application and the Hopf/star checks."""

import pytest

from qsv.algebra import EMPTY_WORD, elem_from_word, elem_unit, tensor_normalize
from qsv.hopf import (
    antipode_square,
    apply_antipode,
    apply_coproduct,
    apply_counit,
    apply_star,
    check_antipode_order,
    check_comaps_well_defined,
    check_hopf_axioms,
    check_primitive,
    check_star,
    determine_antipode_convention,
)
from qsv.parser import parse_element
from qsv.presets import preset, preset_maps
from qsv.scalar import I_UNIT, ONE, Q, S, ZERO, Scalar


@pytest.fixture(scope="module")
def ext():
    p = preset("P_ext")
    maps, star = preset_maps("P_ext")
    return p, maps, star


def test_coproduct_of_y(ext):
    p, maps, _ = ext
    d = apply_coproduct(maps, elem_from_word(p.word("y")))
    xm1, y = p.word(("x", -1)), p.word("y")
    assert d == {(xm1, y): ONE, (y, xm1): ONE}


def test_antipode_of_theta_squared(ext):
    p, maps, _ = ext
    got = p.normalize(apply_antipode(maps, elem_from_word(p.word(("theta", 2)))))
    assert got == {p.word(("theta", 2)): -ONE}


def test_counit_of_xk_theta(ext):
    p, maps, _ = ext
    for k in range(1, 5):
        val = apply_counit(maps, elem_from_word(p.word(("x", k), "theta")))
        assert val == ZERO


def test_star_of_x_y_product(ext):
    # (x*y)* = y* x* = (s^-1 x)(s y) = x*y, by composing the images
    p, _, star = ext
    e = p.normalize(parse_element("x * y", p))
    got = p.normalize(apply_star(star, e))
    assert got == e


def test_star_double_is_identity_on_generators(ext):
    p, _, star = ext
    for g in ("x", "theta", "y"):
        e = elem_from_word(p.word(g))
        back = p.normalize(apply_star(star, p.normalize(apply_star(star, e))))
        assert back == e


def test_comaps_well_defined_p_red_and_p_full():
    for source, maps_name in (("P_red", "P_ext"), ("P_full", "P_full_ext")):
        p_source = preset(source)
        maps, _ = preset_maps(maps_name)
        rep = check_comaps_well_defined(p_source, maps)
        assert rep.ok, rep.residual


def test_comaps_well_defined_u_lhbar():
    p = preset("U_Lhbar")
    maps, _ = preset_maps("U_Lhbar")
    rep = check_comaps_well_defined(p, maps)
    assert rep.ok, rep.residual


def test_hopf_axioms_smoke_degree2(ext):
    p, maps, _ = ext
    rep = check_hopf_axioms(p, maps, max_degree=2, laurent_window=1)
    assert rep.ok, rep.residual


def test_hopf_axioms_unit_word(ext):
    p, maps, _ = ext
    d = apply_coproduct(maps, elem_unit())
    assert d == {(EMPTY_WORD, EMPTY_WORD): ONE}


def test_antipode_square_examples(ext):
    p, maps, _ = ext
    # S^2(y) via S(-x*y*x) expanded by the antihomomorphism rule
    got = antipode_square(p, maps, p.word("y"), "plain")
    assert got == elem_from_word(p.word("y"))
    got = antipode_square(p, maps, p.word("theta"), "plain")
    assert got == elem_from_word(p.word("theta"))


def test_antipode_convention_determined(ext):
    p, maps, _ = ext
    conv, rep = determine_antipode_convention(p, maps, max_degree=3,
                                              laurent_window=1)
    assert conv == "plain"
    assert rep.ok
    flip = check_antipode_order(p, maps, 3, 1, convention="flip")
    assert not flip.ok


def test_primitive_sphere():
    p = preset("P_red")
    maps, _ = preset_maps("P_ext")
    r = parse_element("s * y * x + theta^2 - s^-1 * x * y", p)
    # normalize legs in the extended algebra but the element lives in P_red
    rep = check_primitive(r, preset("P_ext"), maps)
    assert rep.ok, rep.residual


def test_primitive_theta(ext):
    p, maps, _ = ext
    rep = check_primitive(elem_from_word(p.word("theta")), p, maps)
    assert rep.ok


def test_group_like_x_not_primitive(ext):
    p, maps, _ = ext
    rep = check_primitive(elem_from_word(p.word("x")), p, maps)
    assert not rep.ok
    assert "coproduct" in rep.residual


def test_star_checks_p_red():
    p = preset("P_red")
    _, star = preset_maps("P_red")
    rep = check_star(p, star, max_degree=3)
    assert rep.ok, rep.residual


def test_star_theta_antilinear_composition():
    # (theta*)* = (I theta)* = conj(I) * I theta = theta
    p = preset("P_red")
    _, star = preset_maps("P_red")
    th = elem_from_word(p.word("theta"))
    once = apply_star(star, th)
    assert once == {p.word("theta"): I_UNIT}
    twice = apply_star(star, once)
    assert twice == th


def test_lie_primitive_maps_hopf_axioms():
    p = preset("U_Lhbar")
    maps, _ = preset_maps("U_Lhbar")
    rep = check_hopf_axioms(p, maps, max_degree=3, laurent_window=0)
    assert rep.ok, rep.residual
    conv, rep2 = determine_antipode_convention(p, maps, 3, 0)
    assert rep2.ok
