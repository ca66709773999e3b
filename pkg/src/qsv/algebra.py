"""Parity-graded free algebra with oriented rewriting to normal form.

Words are tuples of letters; a letter is a pair (generator index, sign) with
sign -1 allowed only for invertible generators.  Adjacent mutually inverse
letters cancel on construction, so every stored word is canonical.  Elements
are finite dicts word -> Scalar.  A Presentation owns the generator list and
the oriented rules and exposes normalization, multiplication, bounded
confluence checking, Koszul-signed tensor products, and basis enumeration.

Rule orientation uses the graded term order (total letter count, then
position-lexicographic on generator rank).  Rules that are derived
automatically for inverse letters may fall outside that order; those are
validated against a lexicographic path order instead, which the shipped rule
sets all satisfy.  Normalization additionally carries a step bound so a bad
user rule set surfaces as an error instead of a hang.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, MINUS_ONE, Scalar

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]
Element = Dict[Word, Scalar]

EMPTY_WORD: Word = ()

EVEN, ODD = 0, 1


class RuleError(ValueError):
    pass


class ParityError(ValueError):
    pass


class NormalizationBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int
    invertible: bool = False

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"bad parity for {self.name}")
        if self.parity == ODD and self.invertible:
            raise ValueError(f"odd generator {self.name} cannot be invertible")


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def canon_letters(letters: Iterable[Letter]) -> Word:
    """Stack pass: cancel adjacent g, g^-1 pairs."""
    out: List[Letter] = []
    for let in letters:
        if out and out[-1][0] == let[0] and out[-1][1] == -let[1]:
            out.pop()
        else:
            out.append(let)
    return tuple(out)


def word_from_runs(runs: Sequence[Tuple[int, int]]) -> Word:
    letters: List[Letter] = []
    for g, e in runs:
        sign = 1 if e > 0 else -1
        letters.extend([(g, sign)] * abs(e))
    return canon_letters(letters)


def word_runs(w: Word) -> List[Tuple[int, int]]:
    runs: List[Tuple[int, int]] = []
    for g, s in w:
        if runs and runs[-1][0] == g:
            runs[-1] = (g, runs[-1][1] + s)
        else:
            runs.append((g, s))
    return runs


def word_key(w: Word) -> tuple:
    """Graded term order: length first, then letters (rank, then inverse flag)."""
    return (len(w), tuple((g, 0 if s > 0 else 1) for g, s in w))


def word_inverse(w: Word, gens: Sequence[Generator]) -> Word:
    letters = []
    for g, s in reversed(w):
        if not gens[g].invertible:
            raise RuleError(f"generator {gens[g].name} is not invertible")
        letters.append((g, -s))
    return tuple(letters)


def lpo_greater(u: Word, v: Word) -> bool:
    """Lexicographic path order on words; precedence = generator rank."""
    if not v:
        return bool(u)
    if not u:
        return False
    fu, fv = u[0][0], v[0][0]
    if fu > fv:
        return lpo_greater(u, v[1:])
    if fu == fv:
        return lpo_greater(u[1:], v[1:])
    rest = u[1:]
    return rest == v or lpo_greater(rest, v)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

def elem_zero() -> Element:
    return {}


def elem_unit(coeff: Scalar = ONE) -> Element:
    return {} if coeff.is_zero() else {EMPTY_WORD: coeff}


def elem_from_word(w: Word, coeff: Scalar = ONE) -> Element:
    return {} if coeff.is_zero() else {w: coeff}


def elem_add_scaled(target: Element, src: Element, coeff: Scalar) -> None:
    if coeff.is_zero():
        return
    one = coeff.is_one()
    for w, c in src.items():
        v = c if one else c * coeff
        cur = target.get(w)
        if cur is not None:
            v = cur + v
        if v.is_zero():
            if cur is not None:
                del target[w]
        else:
            target[w] = v


def elem_add(a: Element, b: Element) -> Element:
    out = dict(a)
    elem_add_scaled(out, b, ONE)
    return out


def elem_sub(a: Element, b: Element) -> Element:
    out = dict(a)
    elem_add_scaled(out, b, MINUS_ONE)
    return out


def elem_scale(a: Element, coeff: Scalar) -> Element:
    out: Element = {}
    elem_add_scaled(out, a, coeff)
    return out


def elem_neg(a: Element) -> Element:
    return {w: -c for w, c in a.items()}


def elem_map_coeff(a: Element, f: Callable[[Scalar], Scalar]) -> Element:
    out: Element = {}
    for w, c in a.items():
        v = f(c)
        if not v.is_zero():
            out[w] = v
    return out


def free_mul(a: Element, b: Element) -> Element:
    """Concatenation product in the free algebra (cancellation only)."""
    out: Element = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = canon_letters(wa + wb)
            v = ca * cb
            cur = out.get(w)
            if cur is not None:
                v = cur + v
            if v.is_zero():
                if cur is not None:
                    del out[w]
            else:
                out[w] = v
    return out


# ---------------------------------------------------------------------------
# rules and presentations
# ---------------------------------------------------------------------------

@dataclass
class Rule:
    lhs: Word
    rhs: Element
    derived: bool = False

    def __repr__(self):
        return f"Rule({self.lhs} -> {len(self.rhs)} terms)"


class Presentation:
    """Ordered generators plus oriented rewrite rules."""

    def __init__(
        self,
        name: str,
        generators: Sequence[Generator],
        relations: Sequence[Element] = (),
        *,
        consequences: Sequence[Element] = (),
        derive_inverse_rules: bool = True,
        normalize_budget: int = 2_000_000,
    ):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.name = name
        self.gens: Tuple[Generator, ...] = tuple(generators)
        self.gen_index = {g.name: i for i, g in enumerate(generators)}
        self.normalize_budget = normalize_budget
        self.relations: List[Element] = [dict(r) for r in relations]
        # consequence elements already lie in the ideal of the relations;
        # they enter the rule set (for complete rewriting) but not the
        # declared relation list (used by transforms and comparisons)
        self.consequences: List[Element] = [dict(r) for r in consequences]
        self.rules: List[Rule] = []
        self._rule_by_first: Dict[Letter, List[Rule]] = {}
        self._nf: Dict[Word, Element] = {}
        self._parity: Dict[Word, int] = {}
        self._orient_all(self.relations + self.consequences)
        if derive_inverse_rules:
            self._derive_inverse_rules()
        self._renormalize_rule_rhs()
        self._reindex()
        self._coverage = None
        self._flipped: Optional[Presentation] = None

    # -- construction helpers -------------------------------------------------

    def generator(self, name: str) -> int:
        try:
            return self.gen_index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} in {self.name}") from None

    def word(self, *items) -> Word:
        """word('x', ('y', -2), 'theta') -> canonical word."""
        runs = []
        for it in items:
            if isinstance(it, str):
                runs.append((self.generator(it), 1))
            else:
                nm, e = it
                runs.append((self.generator(nm), e))
        return word_from_runs(runs)

    def parity(self, w: Word) -> int:
        p = self._parity.get(w)
        if p is None:
            p = sum(self.gens[g].parity for g, _ in w) & 1
            self._parity[w] = p
        return p

    def element_parity(self, e: Element) -> Optional[int]:
        """Parity if homogeneous, else None; zero element counts as even."""
        parities = {self.parity(w) for w in e}
        if not parities:
            return EVEN
        if len(parities) == 1:
            return parities.pop()
        return None

    # -- orientation ----------------------------------------------------------

    def _orient_all(self, relations: Sequence[Element]) -> None:
        # later relations are pre-reduced by the rules oriented so far, so a
        # repeated leading word folds into the existing system instead of
        # producing a duplicate rule
        for rel in relations:
            e = self._normalize_uncached(rel)
            if not e:
                continue
            self._add_rule_from(e, derived=False)

    def _add_rule_from(self, e: Element, derived: bool) -> None:
        lead = max(e, key=word_key)
        coeff = e[lead]
        rhs: Element = {}
        for w, c in e.items():
            if w != lead:
                rhs[w] = -(c / coeff)
        self._validate_rule(lead, rhs, derived)
        rule = Rule(lhs=lead, rhs=rhs, derived=derived)
        self.rules.append(rule)
        self._reindex()
        self._nf.clear()

    def _validate_rule(self, lhs: Word, rhs: Element, derived: bool) -> None:
        if not lhs:
            raise RuleError("cannot orient: relation forces 1 = 0")
        lp = self.parity(lhs)
        for w in rhs:
            if self.parity(w) != lp:
                raise ParityError(
                    f"parity mismatch in rule for {self.print_word(lhs)}")
        bad = [w for w in rhs if not word_key(lhs) > word_key(w)]
        if bad:
            if all(lpo_greater(lhs, w) for w in bad):
                return
            raise RuleError(
                f"rule for {self.print_word(lhs)} does not decrease the term order")

    def _derive_inverse_rules(self) -> None:
        seen = {r.lhs for r in self.rules}
        queue = [r for r in self.rules if len(r.lhs) == 2]
        while queue:
            rule = queue.pop(0)
            for pos in (0, 1):
                g, s = rule.lhs[pos]
                if not self.gens[g].invertible:
                    continue
                invw: Word = ((g, -s),)
                conj = elem_from_word(invw)
                rel = elem_sub(elem_from_word(rule.lhs), rule.rhs)
                rel = free_mul(conj, free_mul(rel, conj))
                e = self._normalize_uncached(rel)
                if not e:
                    continue
                lead = max(e, key=lambda w: (word_key(w)))
                # prefer the LPO-maximal pivot for derived relations so that
                # PBW-normal words never become rule left-hand sides
                cands = [w for w in e if all(
                    v == w or lpo_greater(w, v) for v in e)]
                if cands:
                    lead = cands[0]
                coeff = e[lead]
                rhs = {w: -(c / coeff) for w, c in e.items() if w != lead}
                if lead in seen:
                    continue
                self._validate_rule(lead, rhs, derived=True)
                new = Rule(lhs=lead, rhs=rhs, derived=True)
                self.rules.append(new)
                seen.add(lead)
                self._reindex()
                self._nf.clear()
                if len(lead) == 2:
                    queue.append(new)

    def _renormalize_rule_rhs(self) -> None:
        for _ in range(8):
            changed = False
            for rule in self.rules:
                nf = self._normalize_uncached(rule.rhs)
                if nf != rule.rhs:
                    rule.rhs = nf
                    changed = True
            if changed:
                self._nf.clear()
            else:
                return
        raise RuleError("rule right-hand sides did not stabilize")

    def _reindex(self) -> None:
        index: Dict[Letter, List[Rule]] = {}
        for rule in self.rules:
            index.setdefault(rule.lhs[0], []).append(rule)
        self._rule_by_first = index

    # -- matching and rewriting ------------------------------------------------

    def matches(self, w: Word) -> List[Tuple[int, Rule]]:
        out = []
        n = len(w)
        index = self._rule_by_first
        for pos in range(n):
            cand = index.get(w[pos])
            if not cand:
                continue
            for rule in cand:
                L = len(rule.lhs)
                if pos + L <= n and w[pos:pos + L] == rule.lhs:
                    out.append((pos, rule))
        return out

    def first_match(self, w: Word) -> Optional[Tuple[int, Rule]]:
        n = len(w)
        index = self._rule_by_first
        for pos in range(n):
            cand = index.get(w[pos])
            if not cand:
                continue
            for rule in cand:
                L = len(rule.lhs)
                if pos + L <= n and w[pos:pos + L] == rule.lhs:
                    return (pos, rule)
        return None

    def apply_at(self, w: Word, pos: int, rule: Rule) -> Element:
        prefix = w[:pos]
        suffix = w[pos + len(rule.lhs):]
        out: Element = {}
        for u, c in rule.rhs.items():
            nw = canon_letters(prefix + u + suffix)
            cur = out.get(nw)
            v = c if cur is None else cur + c
            if v.is_zero():
                if cur is not None:
                    del out[nw]
            else:
                out[nw] = v
        return out

    def _normalize_uncached(self, e: Element) -> Element:
        """Normalization without the memo table (used during construction)."""
        work = dict(e)
        out: Element = {}
        budget = self.normalize_budget
        while work:
            w, c = work.popitem()
            m = self.first_match(w)
            if m is None:
                cur = out.get(w)
                v = c if cur is None else cur + c
                if v.is_zero():
                    if cur is not None:
                        del out[w]
                else:
                    out[w] = v
                continue
            budget -= 1
            if budget <= 0:
                raise NormalizationBudgetExceeded(self.name)
            repl = self.apply_at(w, *m)
            elem_add_scaled(work, repl, c)
        return out

    def normalize_word(self, w: Word) -> Element:
        memo = self._nf
        got = memo.get(w)
        if got is not None:
            return got
        budget = self.normalize_budget
        stack = [w]
        while stack:
            v = stack[-1]
            if v in memo:
                stack.pop()
                continue
            m = self.first_match(v)
            if m is None:
                memo[v] = {v: ONE}
                stack.pop()
                continue
            repl = self.apply_at(v, *m)
            unresolved = [u for u in repl if u not in memo]
            if unresolved:
                budget -= len(unresolved)
                if budget <= 0:
                    raise NormalizationBudgetExceeded(self.name)
                stack.extend(unresolved)
                continue
            acc: Element = {}
            for u, cu in repl.items():
                elem_add_scaled(acc, memo[u], cu)
            memo[v] = acc
            stack.pop()
        return memo[w]

    def normalize(self, e: Element) -> Element:
        out: Element = {}
        for w, c in e.items():
            elem_add_scaled(out, self.normalize_word(w), c)
        return out

    def multiply(self, a: Element, b: Element) -> Element:
        out: Element = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                w = canon_letters(wa + wb)
                elem_add_scaled(out, self.normalize_word(w), ca * cb)
        return out

    def multiply_words(self, words: Sequence[Word]) -> Element:
        acc = EMPTY_WORD
        for w in words:
            acc = canon_letters(acc + w)
        return self.normalize_word(acc)

    def commutator(self, a: Element, b: Element) -> Element:
        return elem_sub(self.multiply(a, b), self.multiply(b, a))

    # -- enumeration ------------------------------------------------------------

    def letters(self, laurent_window: int) -> List[Letter]:
        out: List[Letter] = []
        for i, g in enumerate(self.gens):
            out.append((i, 1))
            if g.invertible and laurent_window > 0:
                out.append((i, -1))
        return out

    def iter_words(self, max_len: int, laurent_window: int = 2) -> Iterator[Word]:
        """All canonical words up to max_len letters, inverse runs capped."""
        letters = self.letters(laurent_window)

        def extend(word: List[Letter], run: int):
            yield tuple(word)
            if len(word) == max_len:
                return
            for let in letters:
                if word:
                    last = word[-1]
                    if last[0] == let[0] and last[1] == -let[1]:
                        continue
                    if (last == let and self.gens[let[0]].invertible):
                        if run + 1 > laurent_window:
                            continue
                        new_run = run + 1
                    else:
                        new_run = 1
                else:
                    new_run = 1
                word.append(let)
                yield from extend(word, new_run)
                word.pop()

        yield from extend([], 0)

    def is_normal(self, w: Word) -> bool:
        return self.first_match(w) is None

    def enumerate_basis(self, max_degree: int, laurent_window: int = 0) -> List[Word]:
        out = [w for w in self.iter_words(max_degree, laurent_window)
               if self.is_normal(w)]
        out.sort(key=word_key)
        return out

    # -- confluence --------------------------------------------------------------

    def check_local_confluence(self, max_len: int, laurent_window: int = 2):
        """Reduction-order independence on all words up to max_len.

        Returns (ok, witness) where witness is None or a tuple
        (word, residual element) for the first divergent word.
        """
        if max_len < 2:
            raise ValueError("max_len must be >= 2")
        for w in sorted(self.iter_words(max_len, laurent_window), key=len):
            ms = self.matches(w)
            if len(ms) < 2:
                continue
            nf0 = self.normalize_word(w)
            for pos, rule in ms:
                e = self.apply_at(w, pos, rule)
                nf = self.normalize(e)
                if nf != nf0:
                    return False, (w, elem_sub(nf, nf0))
        return True, None

    # -- identity families ---------------------------------------------------------

    def verify_identity_family(
        self, template: Callable[[int], Element], k_range: Iterable[int]
    ):
        """Normalize template(k) for each k; returns (ok, first_failure)."""
        for k in k_range:
            residual = self.normalize(template(k))
            if residual:
                return False, (k, residual)
        return True, None

    # -- parameter handling ----------------------------------------------------------

    def substituted(self, bindings, name=None) -> "Presentation":
        """New presentation with scalar bindings applied to all relations."""
        rel = [elem_map_coeff(r, lambda x: x.substitute(bindings))
               for r in self.relations]
        cons = [elem_map_coeff(r, lambda x: x.substitute(bindings))
                for r in self.consequences]
        return Presentation(name or f"{self.name}+subst", self.gens, rel,
                            consequences=cons)

    def flipped(self) -> "Presentation":
        """Same generators, coefficients mapped through s -> s^-1."""
        if self._flipped is None:
            rel = [elem_map_coeff(r, lambda x: x.flip_s()) for r in self.relations]
            cons = [elem_map_coeff(r, lambda x: x.flip_s())
                    for r in self.consequences]
            self._flipped = Presentation(f"{self.name}^flip", self.gens, rel,
                                         consequences=cons)
        return self._flipped

    def extended_with_relations(self, extra: Sequence[Element], name=None) -> "Presentation":
        return Presentation(
            name or f"{self.name}+extra",
            self.gens,
            list(self.relations) + [dict(r) for r in extra],
            consequences=self.consequences,
        )

    # -- coverage ----------------------------------------------------------------

    def coverage(self):
        """(uncovered pair list, uncovered generator set).

        A disordered pair (g, h), rank g > rank h, is covered when a rule
        rewrites the word g*h; an odd square g*g counts as a pair too.
        """
        if self._coverage is None:
            lhss = {r.lhs for r in self.rules}
            missing = []
            bad_gens = set()
            n = len(self.gens)
            for i in range(n):
                for j in range(n):
                    if i > j or (i == j and self.gens[i].parity == ODD):
                        w = ((i, 1), (j, 1))
                        if w not in lhss:
                            missing.append((i, j))
                            bad_gens.add(i)
                            bad_gens.add(j)
            self._coverage = (missing, bad_gens)
        return self._coverage

    def uncovered_generators(self) -> set:
        return self.coverage()[1]

    def missing_pairs_for(self, gens_present: set) -> List[str]:
        missing, _ = self.coverage()
        out = []
        for i, j in missing:
            if i in gens_present or j in gens_present:
                if i == j:
                    out.append(f"{self.gens[i].name}^2")
                else:
                    out.append(f"{self.gens[i].name}*{self.gens[j].name}")
        return sorted(out)

    # -- printing -----------------------------------------------------------------

    def print_word(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for g, e in word_runs(w):
            nm = self.gens[g].name
            parts.append(nm if e == 1 else f"{nm}^{e}")
        return "*".join(parts)

    def print_element(self, e: Element) -> str:
        if not e:
            return "0"
        parts = []
        for w in sorted(e, key=word_key, reverse=True):
            c = e[w]
            ctxt = str(c)
            composite = ("+" in ctxt or (" - " in ctxt) or
                         ("/" in ctxt and not c.is_rational()))
            wtxt = self.print_word(w)
            if w == EMPTY_WORD:
                parts.append(f"({ctxt})" if composite else ctxt)
            elif c.is_one():
                parts.append(wtxt)
            elif c == MINUS_ONE:
                parts.append(f"-{wtxt}")
            else:
                if composite or ctxt.startswith("-") or "/" in ctxt:
                    parts.append(f"({ctxt})*{wtxt}")
                else:
                    parts.append(f"{ctxt}*{wtxt}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"Presentation({self.name}, {len(self.gens)} gens, {len(self.rules)} rules)"


# ---------------------------------------------------------------------------
# Koszul-signed tensor legs
# ---------------------------------------------------------------------------

TensorKey = Tuple[Word, ...]
TensorElement = Dict[TensorKey, Scalar]


def tensor_unit(legs: int, coeff: Scalar = ONE) -> TensorElement:
    return {} if coeff.is_zero() else {(EMPTY_WORD,) * legs: coeff}


def tensor_from_words(words: Sequence[Word], coeff: Scalar = ONE) -> TensorElement:
    return {} if coeff.is_zero() else {tuple(words): coeff}


def tensor_add_scaled(target: TensorElement, src: TensorElement, coeff: Scalar) -> None:
    if coeff.is_zero():
        return
    for k, c in src.items():
        v = c * coeff
        cur = target.get(k)
        if cur is not None:
            v = cur + v
        if v.is_zero():
            if cur is not None:
                del target[k]
        else:
            target[k] = v


def tensor_sub(a: TensorElement, b: TensorElement) -> TensorElement:
    out = dict(a)
    tensor_add_scaled(out, b, MINUS_ONE)
    return out


def tensor_scale(a: TensorElement, coeff: Scalar) -> TensorElement:
    out: TensorElement = {}
    tensor_add_scaled(out, a, coeff)
    return out


def koszul_sign(p: Presentation, left: TensorKey, right: TensorKey) -> int:
    """Sign for (u1 x ... x un)(v1 x ... x vn): each vj crosses u_{j+1..n}."""
    exp = 0
    n = len(left)
    for j in range(n - 1):
        if p.parity(right[j]):
            for i in range(j + 1, n):
                exp += p.parity(left[i])
    return -1 if exp & 1 else 1


def tensor_multiply(p: Presentation, a: TensorElement, b: TensorElement) -> TensorElement:
    out: TensorElement = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            sign = koszul_sign(p, ka, kb)
            coeff = ca * cb
            if sign < 0:
                coeff = -coeff
            legs = [p.normalize_word(canon_letters(wa + wb))
                    for wa, wb in zip(ka, kb)]
            _accumulate_leg_product(out, legs, coeff)
    return out


def tensor_multiply_free(p: Presentation, a: TensorElement, b: TensorElement) -> TensorElement:
    """Koszul-signed product with concatenation only (no rewriting); used by
    checks that must stay independent of an incomplete relation set."""
    out: TensorElement = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            sign = koszul_sign(p, ka, kb)
            coeff = ca * cb
            if sign < 0:
                coeff = -coeff
            key = tuple(canon_letters(wa + wb) for wa, wb in zip(ka, kb))
            cur = out.get(key)
            v = coeff if cur is None else cur + coeff
            if v.is_zero():
                if cur is not None:
                    del out[key]
            else:
                out[key] = v
    return out


def _accumulate_leg_product(out: TensorElement, legs: Sequence[Element], coeff: Scalar) -> None:
    """Expand a product of per-leg elements into tensor terms."""
    keys: List[TensorKey] = [()]
    coeffs: List[Scalar] = [coeff]
    for leg in legs:
        nkeys: List[TensorKey] = []
        ncoeffs: List[Scalar] = []
        for k, c in zip(keys, coeffs):
            for w, cw in leg.items():
                nkeys.append(k + (w,))
                ncoeffs.append(c * cw)
        keys, coeffs = nkeys, ncoeffs
    for k, c in zip(keys, coeffs):
        cur = out.get(k)
        v = c if cur is None else cur + c
        if v.is_zero():
            if cur is not None:
                del out[k]
        else:
            out[k] = v


def tensor_normalize(p: Presentation, a: TensorElement) -> TensorElement:
    out: TensorElement = {}
    for k, c in a.items():
        legs = [p.normalize_word(w) for w in k]
        _accumulate_leg_product(out, legs, c)
    return out


def tensor_parity(p: Presentation, key: TensorKey) -> int:
    return sum(p.parity(w) for w in key) & 1


def print_tensor(p: Presentation, a: TensorElement) -> str:
    if not a:
        return "0"
    parts = []
    for k in sorted(a, key=lambda key: tuple(word_key(w) for w in key), reverse=True):
        c = a[k]
        legs = " (x) ".join(p.print_word(w) for w in k)
        ctxt = str(c)
        if c.is_one():
            parts.append(legs)
        elif c == MINUS_ONE:
            parts.append(f"-{legs}")
        else:
            parts.append(f"({ctxt})*{legs}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out
