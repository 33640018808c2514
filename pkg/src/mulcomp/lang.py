"""Single-line descriptor language for sets and construction recipes.

Prime sets::

    all | explicit:[2,3,5] | intervals:(2,29],(100,200] | residue:1 mod 4
    | thinned(<prime set>,n0=3)

Integer sets::

    all | explicit(1,4,9) | sf-over-q(<prime set>) | sfpart-avoids-q(<prime set>)
    | evenval(k=2) | sf-first-k(k=3)

Recipes::

    lemma-q(<prime set> | sf-over-q(<prime set>)) | vegeseset(k=3)
    | rset(f=x/logx-loglogx, c1=0.25, xmin=16, X=1000000[, n0max=1000])
    | liminffx(f=x, kmax=2, cap=1000000)
    | explicit(A=1,2;B=1) | pair(A=<int set>;B=<int set>)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .constructions import (
    TargetFunction,
    explicit_pair,
    lemma_q_pair,
    limsupfxyes_build,
    liminffx_schedule,
    vegeseset_pair,
    ComplementPair,
)
from .errors import InvalidArgumentError, ParseError
from .sets import (
    ALL_PRIMES,
    AllInts,
    EvenValuationAtFirstK,
    ExplicitInts,
    ExplicitPrimes,
    Intervals,
    ResidueClass,
    SquarefreeOverFirstK,
    SquarefreeOverQ,
    SquarefreePartAvoidsQ,
    Thinned,
)

_INT = re.compile(r"[+-]?\d+")
_VALUE = re.compile(r"[^,;()\s]+")


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def here(self):
        self.ws()
        return self.pos

    def peek(self, s):
        self.ws()
        return self.text.startswith(s, self.pos)

    def accept(self, s):
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.accept(s):
            self.error(f"expected {s!r}")

    def regex(self, pat, what):
        self.ws()
        m = pat.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def int_(self):
        return int(self.regex(_INT, "integer"))

    def ints(self, close):
        out = []
        if self.peek(close):
            return out
        out.append(self.int_())
        while self.accept(","):
            out.append(self.int_())
        return out

    def end(self):
        self.ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing text")

    def build(self, ctor, *args, at):
        try:
            return ctor(*args)
        except InvalidArgumentError as e:
            self.error(str(e), at)


def _prime_set(s):
    start = s.here()
    if s.accept("all"):
        return ALL_PRIMES
    if s.accept("explicit:["):
        vals = s.ints("]")
        s.expect("]")
        return s.build(ExplicitPrimes, tuple(vals), at=start)
    if s.accept("intervals:"):
        ivs = []
        while True:
            s.expect("(")
            m = s.int_()
            s.expect(",")
            n = s.int_()
            s.expect("]")
            ivs.append((m, n))
            mark = s.pos
            if s.accept(",") and s.peek("("):
                continue
            s.pos = mark
            break
        return s.build(Intervals, tuple(ivs), at=start)
    if s.accept("residue:"):
        r = s.int_()
        s.expect("mod")
        m = s.int_()
        return s.build(ResidueClass, m, r, at=start)
    if s.accept("thinned("):
        base = _prime_set(s)
        s.expect(",")
        s.expect("n0=")
        n0 = s.int_()
        s.expect(")")
        return s.build(Thinned, base, n0, at=start)
    s.error("expected a prime set (all, explicit:[..], intervals:, residue:, thinned(..))")


def _int_set(s):
    start = s.here()
    if s.accept("all"):
        return AllInts()
    if s.accept("explicit("):
        vals = s.ints(")")
        s.expect(")")
        return s.build(ExplicitInts, tuple(vals), at=start)
    for tag, ctor in (("sf-over-q(", SquarefreeOverQ), ("sfpart-avoids-q(", SquarefreePartAvoidsQ)):
        if s.accept(tag):
            q = _prime_set(s)
            s.expect(")")
            return ctor(q)
    for tag, ctor in (("evenval(", EvenValuationAtFirstK), ("sf-first-k(", SquarefreeOverFirstK)):
        if s.accept(tag):
            s.expect("k=")
            k = s.int_()
            s.expect(")")
            return s.build(ctor, k, at=start)
    s.error("expected an integer set (all, explicit(..), sf-over-q(..), sfpart-avoids-q(..), "
            "evenval(k=..), sf-first-k(k=..))")


def _parse(fn, text):
    s = _Scanner(text)
    out = fn(s)
    s.end()
    return out


def parse_prime_set(text):
    return _parse(_prime_set, text)


def parse_int_set(text):
    return _parse(_int_set, text)


# -- recipes --------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaQRecipe:
    q: object

    def __str__(self):
        return f"lemma-q({self.q})"


@dataclass(frozen=True)
class VegesesetRecipe:
    k: int

    def __str__(self):
        return f"vegeseset(k={self.k})"


@dataclass(frozen=True)
class RSetRecipe:
    f: TargetFunction
    c1: float
    x_min: int
    x_max: int
    n0_limit: int = 1000

    def __str__(self):
        tail = f", n0max={self.n0_limit}" if self.n0_limit != 1000 else ""
        return f"rset(f={self.f}, c1={self.c1:g}, xmin={self.x_min}, X={self.x_max}{tail})"


@dataclass(frozen=True)
class LiminffxRecipe:
    f: TargetFunction
    k_max: int
    cap: int

    def __str__(self):
        return f"liminffx(f={self.f}, kmax={self.k_max}, cap={self.cap})"


@dataclass(frozen=True)
class PairRecipe:
    a: object
    b: object
    explicit: bool = False

    def __str__(self):
        if self.explicit:
            return (f"explicit(A={','.join(map(str, self.a.values))};"
                    f"B={','.join(map(str, self.b.values))})")
        return f"pair(A={self.a};B={self.b})"


def _kwargs(s, keys):
    """``key=value`` list up to ``)``; ``keys`` maps key -> (converter, required)."""
    got = {}
    while True:
        at = s.here()
        key = s.regex(re.compile(r"[A-Za-z_][A-Za-z0-9_]*"), "key")
        if key not in keys:
            s.error(f"unknown key {key!r}; expected one of {', '.join(keys)}", at)
        s.expect("=")
        vat = s.here()
        raw = s.regex(_VALUE, f"value for {key}")
        try:
            got[key] = keys[key][0](raw)
        except (ValueError, InvalidArgumentError) as e:
            s.error(f"bad value for {key}: {e}", vat)
        if not s.accept(","):
            break
    s.expect(")")
    for key, (_, required) in keys.items():
        if required and key not in got:
            s.error(f"missing key {key!r}")
    return got


def _int_value(raw):
    if _INT.fullmatch(raw):
        return int(raw)
    v = float(raw)  # allow 1e6
    if v != int(v):
        raise ValueError(f"{raw} is not an integer")
    return int(v)


def _recipe(s):
    start = s.here()
    if s.accept("lemma-q("):
        if s.peek("sf-over-q("):
            s.expect("sf-over-q(")
            q = _prime_set(s)
            s.expect(")")
        else:
            q = _prime_set(s)
        s.expect(")")
        return LemmaQRecipe(q)
    if s.accept("vegeseset("):
        s.expect("k=")
        k = s.int_()
        s.expect(")")
        if k < 1:
            s.error("k must be >= 1", start)
        return VegesesetRecipe(k)
    if s.accept("rset("):
        kw = _kwargs(s, {"f": (TargetFunction, True), "c1": (float, False),
                         "xmin": (_int_value, False), "X": (_int_value, True),
                         "n0max": (_int_value, False)})
        f = kw["f"]
        return RSetRecipe(f, kw.get("c1", 0.25), kw.get("xmin", f.x_min), kw["X"],
                          kw.get("n0max", 1000))
    if s.accept("liminffx("):
        kw = _kwargs(s, {"f": (TargetFunction, True), "kmax": (_int_value, True),
                         "cap": (_int_value, True)})
        return LiminffxRecipe(kw["f"], kw["kmax"], kw["cap"])
    if s.accept("explicit("):
        s.expect("A=")
        a = s.ints(";")
        s.expect(";")
        s.expect("B=")
        b = s.ints(")")
        s.expect(")")
        return PairRecipe(s.build(ExplicitInts, tuple(a), at=start),
                          s.build(ExplicitInts, tuple(b), at=start), True)
    if s.accept("pair("):
        s.expect("A=")
        a = _int_set(s)
        s.expect(";")
        s.expect("B=")
        b = _int_set(s)
        s.expect(")")
        return PairRecipe(a, b)
    s.error("expected a recipe (lemma-q, vegeseset, rset, liminffx, explicit, pair)")


def parse_recipe(text):
    return _parse(_recipe, text)


def realize(recipe, t):
    """Build the pair a recipe describes.

    Returns ``(pair, info)`` where ``info`` is an ordered dict of provenance
    and certification fields; ``pair`` is None when a schedule certifies no
    interval.
    """
    info = {"recipe": str(recipe)}
    if isinstance(recipe, LemmaQRecipe):
        pair = lemma_q_pair(recipe.q)
    elif isinstance(recipe, VegesesetRecipe):
        pair = vegeseset_pair(recipe.k)
        info["|B|"] = 2**recipe.k
    elif isinstance(recipe, PairRecipe):
        if recipe.explicit:
            pair = explicit_pair(recipe.a.values, recipe.b.values)
        else:
            pair = ComplementPair(recipe.a, recipe.b, None)
    elif isinstance(recipe, RSetRecipe):
        res = limsupfxyes_build(recipe.f, recipe.c1, recipe.x_max, t, recipe.x_min, recipe.n0_limit)
        info["R_size"] = len(res.r)
        info["R_first"] = res.r[0] if res.r else ""
        if res.n0 is None:
            info["N0"] = f"undetermined (no N0 <= {res.n0_limit} up to X={res.x_max})"
            return None, info
        info["N0"] = f"{res.n0} (certified up to X={res.certified_up_to} only)"
        info["max_window_sum"] = res.max_window
        pair = lemma_q_pair(res.q)
        pair = ComplementPair(pair.a_desc, pair.b_desc, pair.rule,
                              f"lemma-q(thinned(rset,n0={res.n0}))")
        info["Q_size"] = len(res.r[res.n0 - 1 :: res.n0])
    elif isinstance(recipe, LiminffxRecipe):
        sched = liminffx_schedule(recipe.f, recipe.k_max, recipe.cap, t)
        for e in sched.entries:
            if e.certified:
                info[f"entry{e.k}"] = f"(M={e.m}, N={e.n}] certified sum={e.recip_sum:.12g}"
            else:
                info[f"entry{e.k}"] = f"uncertified: {e.binding}"
        if sched.q is None:
            return None, info
        pair = lemma_q_pair(sched.q)
    else:
        raise InvalidArgumentError(f"not a recipe: {recipe!r}")
    info["A"] = str(pair.a_desc)
    info["B"] = str(pair.b_desc)
    info["rule"] = str(pair.rule) if pair.rule is not None else "none"
    return pair, info
