"""Rewriting engine: normal forms, confluence, tensors, bases."""

import random

import pytest

from qsv.algebra import (
    EMPTY_WORD,
    Generator,
    ParityError,
    Presentation,
    RuleError,
    elem_from_word,
    elem_sub,
    elem_unit,
    free_mul,
    tensor_from_words,
    tensor_multiply,
    tensor_sub,
    word_key,
)
from qsv.parser import parse_element
from qsv.presets import preset
from qsv.scalar import ONE, Q, S, Scalar, integer


def E(text, p):
    return parse_element(text, p)


def nf(text, p):
    return p.normalize(E(text, p))


def exhaustive_reduce(p, word):
    """Independent oracle: follow every one-step choice to irreducibility.

    Returns the set of fully reduced elements reachable from the word along
    any reduction sequence (each element frozen as a sorted tuple).
    """
    results = set()

    def freeze(elem):
        return tuple(sorted(elem.items(), key=lambda kv: word_key(kv[0])))

    def reduce_elem(elem, seen):
        frozen = freeze(elem)
        if frozen in seen:
            return
        seen.add(frozen)
        steps = []
        for w, c in elem.items():
            for pos, rule in p.matches(w):
                steps.append((w, c, pos, rule))
        if not steps:
            results.add(frozen)
            return
        for w, c, pos, rule in steps:
            new = dict(elem)
            del new[w]
            repl = p.apply_at(w, pos, rule)
            from qsv.algebra import elem_add_scaled

            elem_add_scaled(new, repl, c)
            reduce_elem(new, seen)

    reduce_elem({word: ONE}, set())
    return results


# -- normalization -----------------------------------------------------------


def test_normalize_theta_x():
    p = preset("P_full")
    assert nf("theta * x", p) == E("q^-1 * x * theta", p)


def test_normalize_theta_squared_full():
    p = preset("P_full")
    assert nf("theta^2", p) == E("s^-3 * (q - 1) * x * y", p)


def test_normalize_x_xinv():
    p = preset("P_ext")
    assert nf("x * x^-1", p) == elem_unit()
    assert nf("x^-1 * x", p) == elem_unit()


def test_normalize_y_theta_x_matches_exhaustive_oracle():
    p = preset("P_full")
    w = p.word("y", "theta", "x")
    オ = exhaustive_reduce(p, w)
    assert len(オ) == 1
    expected = dict(オ.pop())
    assert p.normalize_word(w) == expected
    assert expected == E("q^-4 * x * theta * y", p)


def test_normalize_idempotent_random():
    p = preset("P_red")
    rng = random.Random(13)
    words = [w for w in p.iter_words(4, 0)]
    for _ in range(40):
        e = {}
        for w in rng.sample(words, 5):
            e[w] = Scalar.from_fraction(rng.randrange(-3, 4))
        n1 = p.normalize(e)
        assert p.normalize(n1) == n1


def test_normalize_is_homomorphism_mod_ideal():
    p = preset("P_red")
    rng = random.Random(17)
    words = [w for w in p.iter_words(3, 0)]
    for _ in range(25):
        a = {rng.choice(words): integer(rng.randrange(1, 5))}
        b = {rng.choice(words): integer(rng.randrange(1, 5))}
        lhs = p.normalize(free_mul(a, b))
        rhs = p.multiply(p.normalize(a), p.normalize(b))
        assert lhs == rhs


def test_parity_preserved_by_normalize():
    for name in ("P_full", "P_red", "SP_q_1|2", "U_Lhbar"):
        p = preset(name)
        for w in p.iter_words(4, 0):
            par = p.parity(w)
            for u in p.normalize_word(w):
                assert p.parity(u) == par


def test_multiply_examples():
    p = preset("P_full")
    x, th = elem_from_word(p.word("x")), elem_from_word(p.word("theta"))
    assert p.multiply(x, th) == E("x * theta", p)
    assert p.multiply(th, x) == E("q^-1 * x * theta", p)


def test_sphere_normal_forms_differ_between_presets():
    r = "s * y * x + theta^2 - s^-1 * x * y"
    p_full, p_red = preset("P_full"), preset("P_red")
    assert p_full.normalize(E(r, p_full)) == {}
    got = p_red.normalize(E(r, p_red))
    assert got == E("(s - s^-1) * x * y - q * theta^2", p_red)


def test_sphere_central_in_p_red():
    p = preset("P_red")
    r = p.normalize(E("s * y * x + theta^2 - s^-1 * x * y", p))
    for g in ("x", "theta", "y"):
        ge = elem_from_word(p.word(g))
        assert p.commutator(r, ge) == {}


# -- confluence ----------------------------------------------------------------


@pytest.mark.parametrize("name", ["P_full", "P_red", "P_ext", "SP_h",
                                  "SP_q_1|2", "Lambda_h", "U_Lhbar"])
def test_local_confluence_smoke(name):
    ok, witness = preset(name).check_local_confluence(4, 2)
    assert ok, witness


def test_broken_preset_fails_confluence():
    # dropping the (y, x) pair leaves y*theta*x with two irreducible results
    gens = [Generator("x", 0), Generator("theta", 1), Generator("y", 0)]
    table = ({g.name: i for i, g in enumerate(gens)}, tuple(gens))
    from qsv.parser import parse_relation

    rels = [parse_relation("x * theta = q * theta * x", table),
            parse_relation("theta * y = q * y * theta", table)]
    p = Presentation("broken", gens, rels)
    ok, witness = p.check_local_confluence(4, 0)
    assert not ok
    word, residual = witness
    assert word == p.word("y", "theta", "x")
    assert residual


def test_exhaustive_oracle_agrees_on_p_red():
    p = preset("P_red")
    for w in p.iter_words(4, 0):
        res = exhaustive_reduce(p, w)
        assert len(res) == 1
        assert dict(res.pop()) == p.normalize_word(w)


# -- tensor legs ----------------------------------------------------------------


def test_koszul_sign_examples():
    p = preset("P_red")
    th = p.word("theta")
    one = EMPTY_WORD
    t1 = tensor_from_words((th, one))
    t2 = tensor_from_words((one, th))
    # (theta x 1)(1 x theta) = theta x theta
    assert tensor_multiply(p, t1, t2) == {(th, th): ONE}
    # (1 x theta)(theta x 1) = -theta x theta
    assert tensor_multiply(p, t2, t1) == {(th, th): -ONE}


def test_primitive_square_cancels_cross_terms():
    p = preset("P_red")
    th = p.word("theta")
    one = EMPTY_WORD
    delta_theta = {(th, one): ONE, (one, th): ONE}
    sq = tensor_multiply(p, delta_theta, delta_theta)
    th2 = p.word(("theta", 2))
    assert sq == {(th2, one): ONE, (one, th2): ONE}


def test_even_legs_no_sign():
    p = preset("P_red")
    x, y = p.word("x"), p.word("y")
    a = tensor_from_words((x, EMPTY_WORD))
    b = tensor_from_words((EMPTY_WORD, y))
    assert tensor_multiply(p, a, b) == tensor_multiply(p, b, a)


# -- basis enumeration -------------------------------------------------------------


def test_basis_p_red_degree2():
    p = preset("P_red")
    words = p.enumerate_basis(2, 0)
    names = {p.print_word(w) for w in words}
    assert names == {"1", "x", "theta", "y", "x^2", "x*theta", "x*y",
                     "theta^2", "theta*y", "y^2"}
    assert len(words) == 10


def test_basis_p_full_degree2():
    assert len(preset("P_full").enumerate_basis(2, 0)) == 9


def test_basis_degree0():
    assert preset("P_red").enumerate_basis(0, 0) == [EMPTY_WORD]


def test_basis_laurent_window():
    p = preset("P_ext")
    words = p.enumerate_basis(2, 2)
    names = {p.print_word(w) for w in words}
    assert "x^-1" in names and "x^-2" in names
    assert "x^-1*theta" in names
    # all normal words are x^k theta^l y^m
    for w in words:
        runs = [g for g, _ in w]
        assert runs == sorted(runs)


# -- identity families ---------------------------------------------------------------


def test_identity_family_x_theta():
    p = preset("P_red")

    def family(k):
        lhs = elem_from_word(p.word(("x", k), "theta"))
        rhs = elem_from_word(p.word("theta", ("x", k)), Scalar.q_power(k))
        return elem_sub(lhs, rhs)

    ok, fail = p.verify_identity_family(family, range(1, 7))
    assert ok, fail


def test_identity_family_detects_wrong_coefficient():
    p = preset("P_red")

    def family(k):
        lhs = elem_from_word(p.word(("x", k), "theta"))
        rhs = elem_from_word(p.word("theta", ("x", k)), Scalar.q_power(k + 1))
        return elem_sub(lhs, rhs)

    ok, fail = p.verify_identity_family(family, range(1, 4))
    assert not ok and fail[0] == 1


# -- errors and validation ---------------------------------------------------------------


def test_parity_mismatch_rejected():
    gens = [Generator("x", 0), Generator("theta", 1)]
    table = ({g.name: i for i, g in enumerate(gens)}, tuple(gens))
    from qsv.parser import parse_relation

    rel = parse_relation("theta^2 = I * theta", table)
    with pytest.raises(ParityError):
        Presentation("bad", gens, [rel])


def test_odd_invertible_rejected():
    with pytest.raises(ValueError):
        Generator("theta", 1, invertible=True)


def test_specialize_rejects_degenerate_point():
    from qsv.presets import PresetError, specialize

    with pytest.raises(PresetError):
        specialize("P_full", {"s": ONE})
    # h-presets stay specializable
    sp = specialize("SP_h", {"h": ONE})
    assert len(sp.rules) == 3
