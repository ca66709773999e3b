"""Structure maps (coproduct, counit, antipode, star) and their checks.

Coproduct and counit extend generator images as algebra homomorphisms; the
antipode extends as a graded antihomomorphism with the Koszul reversal sign
(-1)^{o(o-1)/2} on a word with o odd letters; the star map extends the same
way but conjugates coefficients.  Images of inverse letters are derived by
inverting single-term images, which covers group-like generators.

The antipode-square check supports two coefficient conventions: 'plain'
normalizes both applications in the source presentation, 'flip' pushes the
intermediate result through s -> s^-1 first.  The suite records which one
holds; on the shipped superspace maps it is 'plain'.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .algebra import (
    EMPTY_WORD,
    Element,
    Presentation,
    TensorElement,
    Word,
    elem_add_scaled,
    elem_from_word,
    elem_map_coeff,
    elem_scale,
    elem_sub,
    elem_unit,
    tensor_add_scaled,
    tensor_from_words,
    tensor_multiply,
    tensor_normalize,
    tensor_sub,
    tensor_unit,
    word_inverse,
)
from .reports import FAIL, INCONCLUSIVE, PASS, CheckReport, Stopwatch, finding
from .scalar import ONE, ZERO, Scalar


class UnmappedGenerator(KeyError):
    pass


@dataclass
class StructureMaps:
    """Generator images of the three co-maps, normalized in presentation p."""

    p: Presentation
    coproduct: Dict[int, TensorElement]
    counit: Dict[int, Scalar]
    antipode: Dict[int, Element]

    def coproduct_letter(self, letter) -> TensorElement:
        g, sign = letter
        img = self.coproduct.get(g)
        if img is None:
            raise UnmappedGenerator(self.p.gens[g].name)
        if sign > 0:
            return img
        return _invert_tensor(self.p, img)

    def counit_letter(self, letter) -> Scalar:
        g, sign = letter
        val = self.counit.get(g)
        if val is None:
            raise UnmappedGenerator(self.p.gens[g].name)
        if sign > 0:
            return val
        if val.is_zero():
            raise UnmappedGenerator(f"{self.p.gens[g].name}^-1 (counit 0)")
        return val.inverse()

    def antipode_letter(self, letter) -> Element:
        g, sign = letter
        img = self.antipode.get(g)
        if img is None:
            raise UnmappedGenerator(self.p.gens[g].name)
        if sign > 0:
            return img
        return _invert_element(self.p, img)


@dataclass
class StarMap:
    p: Presentation
    images: Dict[int, Element]

    def image_letter(self, letter) -> Element:
        g, sign = letter
        img = self.images.get(g)
        if img is None:
            raise UnmappedGenerator(self.p.gens[g].name)
        if sign > 0:
            return img
        return _invert_element(self.p, img)


def _invert_element(p: Presentation, img: Element) -> Element:
    if len(img) != 1:
        raise UnmappedGenerator("cannot invert a multi-term image")
    (w, c), = img.items()
    return elem_from_word(word_inverse(w, p.gens), c.inverse())


def _invert_tensor(p: Presentation, img: TensorElement) -> TensorElement:
    if len(img) != 1:
        raise UnmappedGenerator("cannot invert a multi-term tensor image")
    (key, c), = img.items()
    if any(p.parity(w) for w in key):
        raise UnmappedGenerator("cannot invert an odd tensor image")
    legs = tuple(word_inverse(w, p.gens) for w in key)
    return tensor_from_words(legs, c.inverse())


def _reversal_sign(odd_count: int) -> int:
    return -1 if (odd_count * (odd_count - 1) // 2) & 1 else 1


# ---------------------------------------------------------------------------
# map application
# ---------------------------------------------------------------------------

def apply_coproduct(maps: StructureMaps, e: Element) -> TensorElement:
    out: TensorElement = {}
    for w, c in e.items():
        acc = tensor_unit(2)
        for letter in w:
            acc = tensor_multiply(maps.p, acc, maps.coproduct_letter(letter))
        tensor_add_scaled(out, acc, c)
    return out


def apply_coproduct_free(maps: StructureMaps, e: Element) -> TensorElement:
    """Homomorphic extension with concatenation-only leg products; exact on
    any presentation because no rewriting happens."""
    from .algebra import tensor_multiply_free

    out: TensorElement = {}
    for w, c in e.items():
        acc = tensor_unit(2)
        for letter in w:
            acc = tensor_multiply_free(maps.p, acc, maps.coproduct_letter(letter))
        tensor_add_scaled(out, acc, c)
    return out


def apply_counit(maps: StructureMaps, e: Element) -> Scalar:
    total = ZERO
    for w, c in e.items():
        val = c
        for letter in w:
            val = val * maps.counit_letter(letter)
            if val.is_zero():
                break
        total = total + val
    return total


def apply_antipode(maps: StructureMaps, e: Element) -> Element:
    out: Element = {}
    p = maps.p
    for w, c in e.items():
        odd = sum(p.gens[g].parity for g, _ in w)
        acc = elem_unit()
        for letter in reversed(w):
            acc = p.multiply(acc, maps.antipode_letter(letter))
        if _reversal_sign(odd) < 0:
            c = -c
        elem_add_scaled(out, acc, c)
    return out


def apply_star(star: StarMap, e: Element) -> Element:
    out: Element = {}
    p = star.p
    for w, c in e.items():
        odd = sum(p.gens[g].parity for g, _ in w)
        acc = elem_unit()
        for letter in reversed(w):
            acc = p.multiply(acc, star.image_letter(letter))
        c = c.conjugate()
        if _reversal_sign(odd) < 0:
            c = -c
        elem_add_scaled(out, acc, c)
    return out


def map_leg(maps: StructureMaps, te: TensorElement, leg: int, kind: str,
            free: bool = False) -> TensorElement:
    """Apply a co-map to one leg of a tensor element (maps are parity-even,
    so no crossing signs arise)."""
    out: TensorElement = {}
    for key, c in te.items():
        target = elem_from_word(key[leg])
        if kind == "coproduct":
            img = (apply_coproduct_free(maps, target) if free
                   else apply_coproduct(maps, target))
            for k2, c2 in img.items():
                nk = key[:leg] + k2 + key[leg + 1:]
                tensor_add_scaled(out, {nk: ONE}, c * c2)
        elif kind == "counit":
            val = apply_counit(maps, target)
            nk = key[:leg] + key[leg + 1:]
            tensor_add_scaled(out, {nk: ONE}, c * val)
        else:
            raise ValueError(kind)
    return out


def multiply_legs(p: Presentation, te: TensorElement) -> Element:
    """The product map m: collapse all legs left to right."""
    out: Element = {}
    for key, c in te.items():
        elem_add_scaled(out, p.multiply_words(key), c)
    return out


# ---------------------------------------------------------------------------
# construction from parsed spec files
# ---------------------------------------------------------------------------

def maps_from_spec(spec, p: Presentation) -> Tuple[Optional[StructureMaps], Optional[StarMap]]:
    from .parser import parse_element, parse_tensor

    cop: Dict[int, TensorElement] = {}
    cou: Dict[int, Scalar] = {}
    ant: Dict[int, Element] = {}
    star: Dict[int, Element] = {}
    for kind, gen, rhs, line_no in spec.map_lines:
        g = p.generator(gen)
        if kind == "coproduct":
            cop[g] = tensor_normalize(p, parse_tensor(rhs, p, 2, line_no))
        elif kind == "counit":
            e = parse_element(rhs, p, line_no)
            from .parser import _scalar_part

            val = _scalar_part(e)
            if val is None:
                raise ValueError(f"counit image must be scalar (line {line_no})")
            cou[g] = val
        elif kind == "antipode":
            ant[g] = p.normalize(parse_element(rhs, p, line_no))
        elif kind == "star":
            star[g] = p.normalize(parse_element(rhs, p, line_no))
    smaps = None
    if cop or cou or ant:
        smaps = StructureMaps(p, cop, cou, ant)
    smap = StarMap(p, star) if star else None
    return smaps, smap


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_comaps_well_defined(
    p_source: Presentation,
    maps: StructureMaps,
    *,
    antipode_target: str = "source",
) -> CheckReport:
    """Co-maps kill every defining relation of p_source."""
    with Stopwatch() as watch:
        target = maps.p if antipode_target == "source" else maps.p.flipped()
        for rel in p_source.relations:
            dres = tensor_normalize(maps.p, apply_coproduct(maps, rel))
            if dres:
                return _fail("comaps-well-defined", p_source, watch,
                             residual="coproduct: " +
                             _print_tensor(maps.p, dres))
            eres = apply_counit(maps, rel)
            if not eres.is_zero():
                return _fail("comaps-well-defined", p_source, watch,
                             residual=f"counit: {eres}")
            sres = target.normalize(apply_antipode(maps, rel))
            if sres:
                return _fail("comaps-well-defined", p_source, watch,
                             residual="antipode: " + target.print_element(sres))
        report = CheckReport("comaps-well-defined", PASS, preset=p_source.name,
                             params={"antipode_target": antipode_target})
    report.wall_ms = watch.ms
    return report


def check_hopf_axioms(
    p: Presentation,
    maps: StructureMaps,
    max_degree: int = 4,
    laurent_window: int = 2,
) -> CheckReport:
    """Coassociativity, both counit laws, both antipode laws on all basis
    words."""
    with Stopwatch() as watch:
        basis = p.enumerate_basis(max_degree, laurent_window)
        for w in basis:
            we = elem_from_word(w)
            d = apply_coproduct(maps, we)
            lhs = map_leg(maps, d, 0, "coproduct")
            rhs = map_leg(maps, d, 1, "coproduct")
            if lhs != rhs:
                return _fail("hopf-axioms", p, watch,
                             residual=f"coassociativity at {p.print_word(w)}")
            for leg in (0, 1):
                col = map_leg(maps, d, leg, "counit")
                back = {key[0]: c for key, c in col.items()}
                if p.normalize(back) != p.normalize(we):
                    return _fail("hopf-axioms", p, watch,
                                 residual=f"counit law (leg {leg}) at "
                                          f"{p.print_word(w)}")
            eps = apply_counit(maps, we)
            unit_part = elem_unit(eps)
            for leg in (0, 1):
                acc: Element = {}
                for key, c in d.items():
                    sided = apply_antipode(maps, elem_from_word(key[leg]))
                    other = elem_from_word(key[1 - leg])
                    prod = (p.multiply(sided, other) if leg == 0
                            else p.multiply(other, sided))
                    elem_add_scaled(acc, prod, c)
                if acc != unit_part:
                    return _fail("hopf-axioms", p, watch,
                                 residual=f"antipode law (leg {leg}) at "
                                          f"{p.print_word(w)}: "
                                          + p.print_element(
                                              elem_sub(acc, unit_part)))
        report = CheckReport(
            "hopf-axioms", PASS, preset=p.name,
            params={"max_degree": max_degree, "laurent_window": laurent_window,
                    "basis_words": len(basis)})
    report.wall_ms = watch.ms
    return report


def antipode_square(
    p: Presentation, maps: StructureMaps, w: Word, convention: str
) -> Element:
    e1 = apply_antipode(maps, elem_from_word(w))
    if convention == "flip":
        e1 = p.flipped().normalize(e1)
        e1 = elem_map_coeff(e1, lambda x: x.flip_s())
    else:
        e1 = p.normalize(e1)
    return p.normalize(apply_antipode(maps, e1))


def check_antipode_order(
    p: Presentation,
    maps: StructureMaps,
    max_degree: int = 4,
    laurent_window: int = 2,
    convention: str = "plain",
) -> CheckReport:
    with Stopwatch() as watch:
        basis = p.enumerate_basis(max_degree, laurent_window)
        for w in basis:
            got = antipode_square(p, maps, w, convention)
            if got != elem_from_word(w):
                return _fail(
                    "antipode-order", p, watch,
                    residual=f"S^2({p.print_word(w)}) = {p.print_element(got)}",
                    params={"convention": convention})
        report = CheckReport(
            "antipode-order", PASS, preset=p.name,
            params={"convention": convention, "max_degree": max_degree,
                    "basis_words": len(basis)},
            findings=[finding(
                "antipode-square-convention",
                f"S^2 = id holds on {p.name} under the {convention!r} "
                "coefficient convention")])
    report.wall_ms = watch.ms
    return report


def determine_antipode_convention(
    p: Presentation, maps: StructureMaps, max_degree: int = 4,
    laurent_window: int = 2,
) -> Tuple[str, CheckReport]:
    plain = check_antipode_order(p, maps, max_degree, laurent_window, "plain")
    if plain.ok:
        return "plain", plain
    flip = check_antipode_order(p, maps, max_degree, laurent_window, "flip")
    return ("flip", flip) if flip.ok else ("none", plain)


def check_primitive(e: Element, p: Presentation, maps: StructureMaps) -> CheckReport:
    with Stopwatch() as watch:
        en = p.normalize(e)
        d = tensor_normalize(p, apply_coproduct(maps, en))
        spread: TensorElement = {}
        for w, c in en.items():
            tensor_add_scaled(spread, {(w, EMPTY_WORD): ONE, (EMPTY_WORD, w): ONE}, c)
        dres = tensor_sub(d, spread)
        if dres:
            return _fail("primitive", p, watch,
                         residual="coproduct: " + _print_tensor(p, dres))
        eps = apply_counit(maps, en)
        if not eps.is_zero():
            return _fail("primitive", p, watch, residual=f"counit: {eps}")
        sres = p.normalize(elem_sub(apply_antipode(maps, en), elem_scale(en, -ONE)))
        if sres:
            return _fail("primitive", p, watch,
                         residual="antipode: " + p.print_element(sres))
        report = CheckReport("primitive", PASS, preset=p.name)
    report.wall_ms = watch.ms
    return report


def check_star(
    p: Presentation,
    star: StarMap,
    max_degree: int = 4,
    seed: int = 2024,
    pairs: int = 40,
) -> CheckReport:
    import random

    with Stopwatch() as watch:
        for rel in p.relations:
            res = p.normalize(apply_star(star, rel))
            if res:
                return _fail("star", p, watch,
                             residual="ideal: " + p.print_element(res))
        basis = p.enumerate_basis(max_degree, 0)
        for w in basis:
            back = p.normalize(apply_star(star, p.normalize(
                apply_star(star, elem_from_word(w)))))
            if back != elem_from_word(w):
                return _fail("star", p, watch,
                             residual=f"(a*)* != a at {p.print_word(w)}")
        rng = random.Random(seed)
        for _ in range(pairs):
            w1, w2 = rng.choice(basis), rng.choice(basis)
            a, b = elem_from_word(w1), elem_from_word(w2)
            lhs = p.normalize(apply_star(star, p.multiply(a, b)))
            sign = -ONE if (p.parity(w1) and p.parity(w2)) else ONE
            rhs = elem_scale(
                p.multiply(p.normalize(apply_star(star, b)),
                           p.normalize(apply_star(star, a))), sign)
            if lhs != p.normalize(rhs):
                return _fail("star", p, watch,
                             residual="graded antimultiplicativity at "
                                      f"{p.print_word(w1)}, {p.print_word(w2)}")
            lam = Scalar.from_fraction(rng.randrange(1, 5), rng.randrange(0, 3))
            left = p.normalize(apply_star(star, elem_scale(a, lam)))
            right = elem_scale(p.normalize(apply_star(star, a)), lam.conjugate())
            if left != right:
                return _fail("star", p, watch, residual="antilinearity")
        report = CheckReport("star", PASS, preset=p.name,
                             params={"max_degree": max_degree,
                                     "basis_words": len(basis)})
    report.wall_ms = watch.ms
    return report


def _fail(check: str, p: Presentation, watch, residual=None, params=None) -> CheckReport:
    report = CheckReport(check, FAIL, preset=p.name, params=params or {},
                         residual=residual)
    report.wall_ms = watch.ms
    return report


def _print_tensor(p: Presentation, te: TensorElement) -> str:
    from .algebra import print_tensor

    return print_tensor(p, te)
