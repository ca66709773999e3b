"""Exact arithmetic in the coefficient field Q(i)(s, h, hb, c).

Scalars are canonical fractions of multivariate polynomials in the four
commuting parameters

    s   -- square root of the deformation parameter (q = s^2)
    h   -- the h-deformation parameter
    hb  -- the infinitesimal deformation parameter (q = e^hb formally)
    c   -- formal stand-in for the transcendental bracket coefficient

with Gaussian-rational coefficients (I = sqrt(-1) lives in the coefficient,
never as a variable).  Half-integer powers of q are integer powers of s, so
every coefficient used by the rewrite engine is a Laurent-free fraction.

Canonical form: numerator and denominator coprime, denominator monic in its
leading graded-lex monomial, zero represented as 0/1.  Equality is plain
structural comparison of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Tuple

VARS = ("s", "h", "hb", "c")
NVARS = len(VARS)
VAR_INDEX = {name: i for i, name in enumerate(VARS)}

Mono = Tuple[int, int, int, int]
# Gaussian rational (re + im*I)/den as a normalized integer triple:
# gcd(re, im, den) == 1 and den > 0
Coeff = Tuple[int, int, int]
Poly = Dict[Mono, Coeff]

ZERO_MONO: Mono = (0, 0, 0, 0)
C_ONE: Coeff = (1, 0, 1)
C_ZERO: Coeff = (0, 0, 1)


class DivisionByZero(ZeroDivisionError):
    pass


class PoleError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rational coefficients
# ---------------------------------------------------------------------------

def c_norm(re: int, im: int, den: int) -> Coeff:
    if den < 0:
        re, im, den = -re, -im, -den
    g = gcd(gcd(re, im), den)
    if g > 1:
        return (re // g, im // g, den // g)
    return (re, im, den)


def c_from_fractions(re, im=0) -> Coeff:
    re = Fraction(re)
    im = Fraction(im)
    den = re.denominator * im.denominator
    return c_norm(re.numerator * im.denominator,
                  im.numerator * re.denominator, den)


def c_to_fractions(a: Coeff) -> Tuple[Fraction, Fraction]:
    return (Fraction(a[0], a[2]), Fraction(a[1], a[2]))


def c_add(a: Coeff, b: Coeff) -> Coeff:
    ar, ai, ad = a
    br, bi, bd = b
    if ad == bd:
        return c_norm(ar + br, ai + bi, ad)
    return c_norm(ar * bd + br * ad, ai * bd + bi * ad, ad * bd)


def c_mul(a: Coeff, b: Coeff) -> Coeff:
    ar, ai, ad = a
    br, bi, bd = b
    return c_norm(ar * br - ai * bi, ar * bi + ai * br, ad * bd)


def c_neg(a: Coeff) -> Coeff:
    return (-a[0], -a[1], a[2])


def c_inv(a: Coeff) -> Coeff:
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise DivisionByZero("inverting zero coefficient")
    return c_norm(a[0] * a[2], -a[1] * a[2], n)


def c_conj(a: Coeff) -> Coeff:
    return (a[0], -a[1], a[2])


def c_is_zero(a: Coeff) -> bool:
    return not a[0] and not a[1]


# ---------------------------------------------------------------------------
# polynomial layer
# ---------------------------------------------------------------------------

def mono_key(m: Mono) -> tuple:
    # graded lexicographic with s < h < hb < c
    return (m[0] + m[1] + m[2] + m[3], m)


def mono_mul(a: Mono, b: Mono) -> Mono:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def mono_div(a: Mono, b: Mono) -> Mono | None:
    m = (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
    if min(m) < 0:
        return None
    return m


def p_zero() -> Poly:
    return {}


def p_const(re, im=0) -> Poly:
    co = c_from_fractions(re, im)
    return {} if c_is_zero(co) else {ZERO_MONO: co}


def p_var(name: str, exp: int = 1) -> Poly:
    m = [0, 0, 0, 0]
    m[VAR_INDEX[name]] = exp
    return {tuple(m): C_ONE}


def p_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, co in b.items():
        cur = out.get(m)
        if cur is None:
            out[m] = co
        else:
            s = c_add(cur, co)
            if s[0] or s[1]:
                out[m] = s
            else:
                del out[m]
    return out


def p_neg(a: Poly) -> Poly:
    return {m: (-co[0], -co[1], co[2]) for m, co in a.items()}


def p_sub(a: Poly, b: Poly) -> Poly:
    return p_add(a, p_neg(b))


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ma, ca in a.items():
        car, cai, cad = ca
        for mb, cb in b.items():
            m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3])
            cbr, cbi, cbd = cb
            co = c_norm(car * cbr - cai * cbi, car * cbi + cai * cbr,
                        cad * cbd)
            cur = out.get(m)
            if cur is not None:
                co = c_add(cur, co)
            if co[0] or co[1]:
                out[m] = co
            elif cur is not None:
                del out[m]
    return out


def p_scale(a: Poly, co: Coeff) -> Poly:
    if c_is_zero(co):
        return {}
    out: Poly = {}
    for m, ca in a.items():
        v = c_mul(ca, co)
        if v[0] or v[1]:
            out[m] = v
    return out


def p_leading(a: Poly) -> Tuple[Mono, Coeff]:
    m = max(a, key=mono_key)
    return m, a[m]


def p_is_const(a: Poly) -> bool:
    return len(a) == 0 or (len(a) == 1 and ZERO_MONO in a)


def p_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    """Multivariate division with remainder by a single divisor."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    mb, cb = p_leading(b)
    cb_inv = c_inv(cb)
    quo: Poly = {}
    rem = dict(a)
    while rem:
        ma, ca = p_leading(rem)
        m = mono_div(ma, mb)
        if m is None:
            break
        co = c_mul(ca, cb_inv)
        quo[m] = co
        for mb2, cb2 in b.items():
            mm = mono_mul(m, mb2)
            sub = c_mul(co, cb2)
            cur = rem.get(mm, C_ZERO)
            v = c_add(cur, (-sub[0], -sub[1], sub[2]))
            if v[0] or v[1]:
                rem[mm] = v
            elif mm in rem:
                del rem[mm]
    return quo, rem


def p_divexact(a: Poly, b: Poly) -> Poly:
    quo, rem = p_divmod(a, b)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


def _p_content_mono(a: Poly) -> Mono:
    it = iter(a)
    m0 = next(it)
    lo = list(m0)
    for m in it:
        for i in range(NVARS):
            if m[i] < lo[i]:
                lo[i] = m[i]
    return tuple(lo)


def _p_shift_down(a: Poly, m: Mono) -> Poly:
    if m == ZERO_MONO:
        return dict(a)
    return {(k[0] - m[0], k[1] - m[1], k[2] - m[2], k[3] - m[3]): co
            for k, co in a.items()}


def _active_vars(a: Poly) -> set:
    out = set()
    for m in a:
        for i in range(NVARS):
            if m[i]:
                out.add(i)
    return out


def _p_monic(a: Poly) -> Poly:
    if not a:
        return a
    _, co = p_leading(a)
    if co == C_ONE:
        return a
    return p_scale(a, c_inv(co))


def _gcd_euclid(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = p_divmod(a, b)
        a, b = b, r
    return _p_monic(a)


_SYMPY_CACHE: dict = {}


def _sympy_ctx():
    if not _SYMPY_CACHE:
        import sympy

        _SYMPY_CACHE["sympy"] = sympy
        _SYMPY_CACHE["syms"] = sympy.symbols("s h hb c")
    return _SYMPY_CACHE["sympy"], _SYMPY_CACHE["syms"]


def _to_sympy(a: Poly):
    sympy, syms = _sympy_ctx()
    expr = sympy.Integer(0)
    for m, co in a.items():
        re, im = c_to_fractions(co)
        term = sympy.Rational(re) + sympy.Rational(im) * sympy.I
        for i, e in enumerate(m):
            if e:
                term *= syms[i] ** e
        expr += term
    return expr


def _from_sympy(expr) -> Poly:
    sympy, syms = _sympy_ctx()
    poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ_I")
    out: Poly = {}
    for mono, coeff in poly.terms():
        re = Fraction(int(sympy.re(coeff).p), int(sympy.re(coeff).q))
        im = Fraction(int(sympy.im(coeff).p), int(sympy.im(coeff).q))
        if re or im:
            out[tuple(mono)] = c_from_fractions(re, im)
    return out


def p_gcd(a: Poly, b: Poly) -> Poly:
    if not a:
        return _p_monic(dict(b))
    if not b:
        return _p_monic(dict(a))
    ca = _p_content_mono(a)
    cb = _p_content_mono(b)
    common = tuple(min(x, y) for x, y in zip(ca, cb))
    a1 = _p_shift_down(a, ca)
    b1 = _p_shift_down(b, cb)
    base: Poly = {common: C_ONE}
    if len(a1) == 1 or len(b1) == 1:
        return base
    active = _active_vars(a1) | _active_vars(b1)
    if len(active) <= 1:
        g = _gcd_euclid(a1, b1)
        if p_is_const(g):
            return base
        return p_mul(base, g)
    sympy, _ = _sympy_ctx()
    g = _from_sympy(sympy.gcd(_to_sympy(a1), _to_sympy(b1)))
    if p_is_const(g):
        return base
    return p_mul(base, _p_monic(g))


def p_subst_rational(a: Poly, var: int, value: Fraction) -> Poly:
    out: Poly = {}
    for m, co in a.items():
        e = m[var]
        if e:
            v = value ** e
            co = c_mul(co, c_norm(v.numerator, 0, v.denominator))
            if c_is_zero(co):
                continue
            m = m[:var] + (0,) + m[var + 1:]
        cur = out.get(m)
        if cur is not None:
            co = c_add(cur, co)
        if co[0] or co[1]:
            out[m] = co
        elif cur is not None:
            del out[m]
    return out


def p_div_linear(a: Poly, var: int, value: Fraction) -> Poly | None:
    """Exact division by (var - value); None when not divisible."""
    lin = p_sub(p_var(VARS[var]), p_const(value))
    quo, rem = p_divmod(a, lin)
    if rem:
        return None
    return quo


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class Scalar:
    """Canonical fraction num/den over Q(i)[s, h, hb, c]."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: Poly, den: Poly, _canonical: bool = False):
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._key = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_fraction(re, im=0) -> "Scalar":
        return Scalar(p_const(re, im), {ZERO_MONO: C_ONE}, _canonical=True)

    @staticmethod
    def var(name: str, exp: int = 1) -> "Scalar":
        if exp >= 0:
            return Scalar(p_var(name, exp), {ZERO_MONO: C_ONE}, _canonical=True)
        return Scalar({ZERO_MONO: C_ONE}, p_var(name, -exp), _canonical=True)

    @staticmethod
    def s_power(k: int) -> "Scalar":
        return Scalar.var("s", k)

    @staticmethod
    def q_power(k: int) -> "Scalar":
        """Integer power of q = s^2."""
        return Scalar.var("s", 2 * k)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == {ZERO_MONO: C_ONE} and self.den == {ZERO_MONO: C_ONE}

    def is_rational(self) -> bool:
        return p_is_const(self.num) and p_is_const(self.den)

    def as_fraction(self) -> Tuple[Fraction, Fraction]:
        if not self.is_rational():
            raise ValueError("scalar is not a constant")
        if not self.num:
            return (Fraction(0), Fraction(0))
        co = c_mul(self.num[ZERO_MONO], c_inv(self.den[ZERO_MONO]))
        return c_to_fractions(co)

    def monomial_s_power(self) -> int | None:
        """If self == +/- s^k (unit coefficient), return k, else None."""
        if len(self.num) != 1 or len(self.den) != 1:
            return None
        (mn, cn), = self.num.items()
        (md, cd), = self.den.items()
        if any(mn[i] or md[i] for i in (1, 2, 3)):
            return None
        ratio = c_mul(cn, c_inv(cd))
        if ratio not in ((1, 0, 1), (-1, 0, 1)):
            return None
        return mn[0] - md[0]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return Scalar(p_add(self.num, other.num), dict(self.den))
        g = p_gcd(self.den, other.den)
        if p_is_const(g) and g.get(ZERO_MONO) == C_ONE:
            num = p_add(p_mul(self.num, other.den), p_mul(other.num, self.den))
            return Scalar(num, p_mul(self.den, other.den))
        da = p_divexact(self.den, g)
        db = p_divexact(other.den, g)
        num = p_add(p_mul(self.num, db), p_mul(other.num, da))
        den = p_mul(self.den, db)
        return Scalar(num, den)

    def __neg__(self) -> "Scalar":
        return Scalar(p_neg(self.num), dict(self.den), _canonical=True)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not self.num or not other.num:
            return ZERO
        g1 = p_gcd(self.num, other.den)
        g2 = p_gcd(other.num, self.den)
        n1 = self.num if p_is_const(g1) else p_divexact(self.num, g1)
        d2 = other.den if p_is_const(g1) else p_divexact(other.den, g1)
        n2 = other.num if p_is_const(g2) else p_divexact(other.num, g2)
        d1 = self.den if p_is_const(g2) else p_divexact(self.den, g2)
        num = p_mul(n1, n2)
        den = p_mul(d1, d2)
        return Scalar(num, den, _canonical=_den_is_monic(den))

    def inverse(self) -> "Scalar":
        if not self.num:
            raise DivisionByZero("inverting zero scalar")
        return Scalar(dict(self.den), dict(self.num))

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure maps ------------------------------------------------------

    def conjugate(self) -> "Scalar":
        num = {m: c_conj(co) for m, co in self.num.items()}
        den = {m: c_conj(co) for m, co in self.den.items()}
        return Scalar(num, den, _canonical=True)

    def substitute(self, bindings: Mapping[str, "Scalar"]) -> "Scalar":
        if not bindings:
            return self
        num = _p_eval(self.num, bindings)
        den = _p_eval(self.den, bindings)
        if den.is_zero():
            raise DivisionByZero("denominator vanishes under substitution")
        return num / den

    def flip_s(self) -> "Scalar":
        """The coefficient map s -> s^-1 (q -> q^-1); h, hb, c fixed."""
        return self.substitute({"s": Scalar.var("s", -1)})

    def limit_at(self, var: str, value) -> "Scalar":
        value = Fraction(value)
        vi = VAR_INDEX[var]
        num, den = self.num, self.den
        if not num:
            return ZERO
        while True:
            nv = p_subst_rational(num, vi, value)
            dv = p_subst_rational(den, vi, value)
            if dv:
                if not nv:
                    return ZERO
                return Scalar(nv, dv)
            quo = p_div_linear(den, vi, value)
            if quo is None:
                raise PoleError(f"pole at {var} = {value}")
            nquo = p_div_linear(num, vi, value)
            if nquo is None:
                raise PoleError(f"pole at {var} = {value}")
            num, den = nquo, quo

    # -- comparisons / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                tuple(sorted(self.num.items(), key=lambda kv: mono_key(kv[0]))),
                tuple(sorted(self.den.items(), key=lambda kv: mono_key(kv[0]))),
            )
        return self._key

    def __hash__(self) -> int:
        return hash(self.key())

    # -- printing -------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        return scalar_to_text(self)


def _den_is_monic(den: Poly) -> bool:
    _, co = p_leading(den)
    return co == C_ONE


def _canonicalize(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return {}, {ZERO_MONO: C_ONE}
    g = p_gcd(num, den)
    if not (p_is_const(g) and g.get(ZERO_MONO) == C_ONE):
        num = p_divexact(num, g)
        den = p_divexact(den, g)
    _, lead = p_leading(den)
    if lead != C_ONE:
        inv = c_inv(lead)
        num = p_scale(num, inv)
        den = p_scale(den, inv)
    return num, den


def _p_eval(a: Poly, bindings: Mapping[str, "Scalar"]) -> "Scalar":
    out = ZERO
    cache: Dict[Tuple[int, int], Scalar] = {}

    def power(vi: int, e: int) -> Scalar:
        got = cache.get((vi, e))
        if got is None:
            name = VARS[vi]
            base = bindings.get(name)
            got = Scalar.var(name, e) if base is None else base ** e
            cache[(vi, e)] = got
        return got

    for m, co in a.items():
        re, im = c_to_fractions(co)
        term = Scalar.from_fraction(re, im)
        for vi, e in enumerate(m):
            if e:
                term = term * power(vi, e)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# printing (round-trips through the expression grammar in parser.py)
# ---------------------------------------------------------------------------

def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _coeff_text(co: Coeff) -> Tuple[str, bool]:
    """Textual coefficient plus a flag telling whether it is composite."""
    re, im = c_to_fractions(co)
    if not im:
        return _frac_text(re), re.numerator < 0 or re.denominator != 1
    if not re:
        if im == 1:
            return "I", False
        return f"{_frac_text(im)}*I", True
    sign = "+" if im > 0 else "-"
    ima = abs(im)
    itxt = "I" if ima == 1 else f"{_frac_text(ima)}*I"
    return f"{_frac_text(re)} {sign} {itxt}", True


def _mono_text(m: Mono) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(VARS[i])
        elif e:
            parts.append(f"{VARS[i]}^{e}")
    return "*".join(parts)


def poly_to_text(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for m in sorted(p, key=mono_key, reverse=True):
        co = p[m]
        neg = False
        if not co[1] and co[0] < 0:
            neg, co = True, (-co[0], co[1], co[2])
        elif not co[0] and co[1] < 0:
            neg, co = True, (co[0], -co[1], co[2])
        ctxt, composite = _coeff_text(co)
        mtxt = _mono_text(m)
        if not mtxt:
            txt = f"({ctxt})" if composite else ctxt
        elif ctxt == "1":
            txt = mtxt
        elif composite:
            txt = f"({ctxt})*{mtxt}"
        else:
            txt = f"{ctxt}*{mtxt}"
        terms.append(("-" if neg else "+", txt))
    sign, txt = terms[0]
    out = txt if sign == "+" else f"-{txt}"
    for sign, txt in terms[1:]:
        out += f" {sign} {txt}"
    return out


def scalar_to_text(x: Scalar) -> str:
    ntxt = poly_to_text(x.num)
    if x.den == {ZERO_MONO: C_ONE}:
        return ntxt
    dtxt = poly_to_text(x.den)
    if len(x.num) > 1:
        ntxt = f"({ntxt})"
    if len(x.den) > 1 or "*" in dtxt or "^" in dtxt:
        dtxt = f"({dtxt})"
    return f"{ntxt}/{dtxt}"


ZERO = Scalar.from_fraction(0)
ONE = Scalar.from_fraction(1)
MINUS_ONE = Scalar.from_fraction(-1)
I_UNIT = Scalar.from_fraction(0, 1)
S = Scalar.var("s")
H = Scalar.var("h")
HBAR = Scalar.var("hb")
C_FORMAL = Scalar.var("c")
Q = Scalar.q_power(1)


def integer(n) -> Scalar:
    return Scalar.from_fraction(n)
