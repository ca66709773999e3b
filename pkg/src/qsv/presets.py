"""Shipped algebra presentations.

Every preset is written in the spec-file input language and parsed at first
use, so the texts below double as documentation of the exact rule lists.
Relations are written as equalities; the engine orients them by the declared
generator order (graded, then position-lexicographic) and derives the
inverse-letter variants of two-letter rules for invertible generators.

Deformation presets whose coefficients live in q = s^2 refuse specialization
at s in {0, 1, -1}; the degenerate point is reachable only through the
contraction engine's exact limits.
"""

from __future__ import annotations

import os
from typing import Dict, List, Optional, Tuple

from .algebra import Presentation
from .parser import SpecFile, parse_relation, parse_spec
from .scalar import Scalar

PRESET_TEXTS: Dict[str, str] = {}

PRESET_TEXTS["P_full"] = """
# quantum symplectic superspace, four-relation presentation
generators:
  x : even
  theta : odd
  y : even
relations:
  x * theta = q * theta * x
  theta * y = q * y * theta
  y * x = q^-2 * x * y
  theta^2 = s*(q - 1) * y * x
"""

PRESET_TEXTS["P_red"] = """
# quantum symplectic superspace, three-relation presentation
generators:
  x : even
  theta : odd
  y : even
relations:
  x * theta = q * theta * x
  y * theta = q^-1 * theta * y
  x * y - y * x = s^-1*(q + 1) * theta^2
maps:
  star x = s * y
  star theta = I * theta
  star y = s^-1 * x
"""

_SUPERSPACE_MAPS = """
maps:
  coproduct x = x (x) x
  coproduct theta = theta (x) 1 + 1 (x) theta
  coproduct y = x^-1 (x) y + y (x) x^-1
  counit x = 1
  counit theta = 0
  counit y = 0
  antipode x = x^-1
  antipode theta = - theta
  antipode y = - x * y * x
  star x = s * y
  star theta = I * theta
  star y = s^-1 * x
"""

PRESET_TEXTS["P_ext"] = """
# three-relation superspace extended by the inverse of x
generators:
  x : even invertible
  theta : odd
  y : even
relations:
  x * theta = q * theta * x
  y * theta = q^-1 * theta * y
  x * y - y * x = s^-1*(q + 1) * theta^2
""" + _SUPERSPACE_MAPS

PRESET_TEXTS["P_full_ext"] = """
# four-relation superspace extended by the inverse of x
generators:
  x : even invertible
  theta : odd
  y : even
relations:
  x * theta = q * theta * x
  theta * y = q * y * theta
  y * x = q^-2 * x * y
  theta^2 = s*(q - 1) * y * x
""" + _SUPERSPACE_MAPS

PRESET_TEXTS["SP_h"] = """
# h-deformed symplectic superspace
generators:
  X_p : even
  Theta : odd
  X_m : even
relations:
  X_p * Theta = Theta * X_p
  X_m * Theta = Theta * X_m - 2*h * Theta * X_p
  X_p * X_m = X_m * X_p + 2 * Theta^2
"""

PRESET_TEXTS["SP_q_1|2"] = """
# dual quantum symplectic superspace (one even, two odd coordinates)
generators:
  phi_p : odd
  z : even
  phi_m : odd
relations:
  z * phi_p = q * phi_p * z
  z * phi_m = q^-1 * phi_m * z
  phi_m * phi_p + q^-2 * phi_p * phi_m + q^-2*(s - s^3) * z^2 = 0
  phi_p^2 = 0
  phi_m^2 = 0
consequences:
  # the five quadratics are not locally confluent by themselves: the overlap
  # phi_m^2*phi_p leaves a z^2*phi_m residue and phi_m*phi_p^2 leaves a
  # phi_p*z^2 residue, so the ideal contains the words below (finding
  # dual-superspace-completion); contraction uses only the quadratics
  phi_p * z^2 = 0
  z^2 * phi_m = 0
  z^4 = 0
"""

PRESET_TEXTS["Lambda_h"] = """
# exterior algebra of the h-deformed superspace
generators:
  Phi_p : odd
  Z : even
  Phi_m : odd
relations:
  Phi_p * Z = Z * Phi_p
  Z * Phi_m = Phi_m * Z - 2*h * Phi_p * Z
  Phi_m * Phi_p = - Phi_p * Phi_m
  Phi_p^2 = 0
  Phi_m^2 = h*(2 * Phi_m * Phi_p - Z^2)
consequences:
  # the odd-cube overlap Phi_m^3 reduces two ways that differ by
  # 8*h^2*Phi_p*Z^2, so the ideal contains Phi_p*Z^2 for formal h (finding
  # dual-superspace-completion); contraction compares quadratics only
  Phi_p * Z^2 = 0
"""

_GROUP_2_1 = """
  a * b = q^2 * b * a
  a * c = q^2 * c * a
  a * alpha = q * alpha * a
  a * delta = q * delta * a + (q - q^-1) * alpha * c
  a * d = d * a + (q - q^-1)*((1 + q^-1) * b * c + s^-1 * alpha * delta)
  b * c = c * b
  b * d = q^2 * d * b
  b * alpha = q^-1 * alpha * b
  b * delta = q * delta * b
  c * d = q^2 * d * c
  c * alpha = q^-1 * alpha * c
  c * delta = q * delta * c
  d * alpha = q^-1 * alpha * d + (q^-1 - q) * delta * b
  d * delta = q^-1 * delta * d
  alpha * delta = - q * delta * alpha + s^-1*(q^2 - 1) * b * c
  alpha^2 = s*(q - 1) * b * a
  delta^2 = s*(q - 1) * d * c
"""

PRESET_TEXTS["SPq21_sub6"] = """
# the complete six-generator subalgebra of the quantum supergroup
generators:
  a : even
  alpha : odd
  b : even
  c : even
  delta : odd
  d : even
relations:
""" + _GROUP_2_1

PRESET_TEXTS["SPq21_partial"] = """
# quantum supergroup on the full generator matrix; the relation set for the
# pairs involving gamma, e, beta is only partially supplied, so reductions
# touching those pairs may end INCONCLUSIVE
generators:
  a : even
  alpha : odd
  b : even
  gamma : odd
  e : even
  beta : odd
  c : even
  delta : odd
  d : even
relations:
""" + _GROUP_2_1 + """
  e * alpha - q * alpha * e = s*(q - 1) * (gamma * b + beta * a)
  e * beta - q^-1 * beta * e = s^-1*(q^-1 - 1) * (delta * b + alpha * d)
  e * gamma - q * gamma * e = s*(1 - q) * (delta * a + alpha * c)
  e * delta - q^-1 * delta * e = s^-1*(1 - q^-1) * (gamma * d + beta * c)
  beta^2 = s*(q - 1) * d * b
  gamma^2 = s*(q - 1) * c * a
  e^2 = 1 - s^-1*(alpha * delta - q * delta * alpha)
  e^2 = 1 + s*(beta * gamma - q^-1 * gamma * beta)
"""

PRESET_TEXTS["U_Lhbar"] = """
# enveloping presentation with a formal central bracket coefficient c
generators:
  u : even
  xi : odd
  v : even
relations:
  u * xi - xi * u = hb * xi
  xi * v - v * xi = 0
  u * v - v * u = c * xi^2
maps:
  coproduct u = u (x) 1 + 1 (x) u
  coproduct xi = xi (x) 1 + 1 (x) xi
  coproduct v = v (x) 1 + 1 (x) v
  counit u = 0
  counit xi = 0
  counit v = 0
  antipode u = - u
  antipode xi = - xi
  antipode v = - v
"""

# presets whose rule coefficients degenerate at q = 1
Q_PRESETS = {"P_full", "P_red", "P_ext", "P_full_ext", "SP_q_1|2",
             "SPq21_sub6", "SPq21_partial"}

ALIASES = {"SP_q_12": "SP_q_1|2"}

_SPEC_CACHE: Dict[str, SpecFile] = {}
_PRESET_CACHE: Dict[str, Presentation] = {}


class PresetError(ValueError):
    pass


def preset_names() -> List[str]:
    return sorted(PRESET_TEXTS)


def _resolve(name: str) -> str:
    name = ALIASES.get(name, name)
    if name in PRESET_TEXTS:
        return name
    path = _find_user_preset(name)
    if path:
        return name
    raise PresetError(f"unknown preset {name!r}; shipped: {', '.join(preset_names())}")


def _find_user_preset(name: str) -> Optional[str]:
    paths = os.environ.get("QSV_PRESET_PATH", "")
    for d in filter(None, paths.split(os.pathsep)):
        cand = os.path.join(d, name + ".qs")
        if os.path.isfile(cand):
            return cand
    return None


def preset_spec(name: str) -> SpecFile:
    name = _resolve(name)
    spec = _SPEC_CACHE.get(name)
    if spec is None:
        text = PRESET_TEXTS.get(name)
        if text is None:
            with open(_find_user_preset(name), "r", encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text, name=name)
        _SPEC_CACHE[name] = spec
    return spec


def build_presentation(spec: SpecFile) -> Presentation:
    table = ({g.name: i for i, g in enumerate(spec.generators)},
             tuple(spec.generators))
    relations = [parse_relation(line, table, line_no)
                 for line, line_no in spec.relation_lines]
    consequences = [parse_relation(line, table, line_no)
                    for line, line_no in spec.consequence_lines]
    return Presentation(spec.name, spec.generators, relations,
                        consequences=consequences)


def preset(name: str) -> Presentation:
    name = _resolve(name)
    p = _PRESET_CACHE.get(name)
    if p is None:
        p = build_presentation(preset_spec(name))
        _PRESET_CACHE[name] = p
    return p


_MAPS_CACHE: Dict[str, tuple] = {}


def preset_maps(name: str):
    """(StructureMaps or None, StarMap or None) declared by a preset."""
    name = _resolve(name)
    got = _MAPS_CACHE.get(name)
    if got is None:
        from .hopf import maps_from_spec

        got = maps_from_spec(preset_spec(name), preset(name))
        _MAPS_CACHE[name] = got
    return got


def specialize(name: str, bindings: Dict[str, Scalar]) -> Presentation:
    """Preset with parameters substituted; rejects the degenerate point."""
    name = _resolve(name)
    if name in Q_PRESETS and "s" in bindings:
        v = bindings["s"]
        for bad in (0, 1, -1):
            if v == Scalar.from_fraction(bad):
                raise PresetError(
                    f"preset {name} degenerates at s = {bad}; "
                    "use the contraction engine for exact limits")
    return preset(name).substituted(bindings, name=f"{name}@subst")
