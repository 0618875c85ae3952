"""A finite-model evaluator for the generalized quantifier ∇ ("for almost all").

Formulas are monadic first-order formulas over one-place predicates, with
equality between variables, extended by

* ``N x. phi`` – ``∇x φ(x)``: some set of the weak filter over the whole
  domain consists of ``φ``-elements only;
* ``N x: phi . psi`` – ``∇x φ(x):ψ(x)``: some set of the weak filter over the
  extension of ``φ`` consists of ``ψ``-elements only.

Concrete syntax: ``A x. phi`` (for all), ``E x. phi`` (exists), ``P(x)``,
``x = y``, ``true``, ``false``, and the propositional connectives
``~ & | -> <->``.  A quantifier's body extends as far to the right as
possible.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .choice import PropertyVerdict
from .errors import DomainMissError, FormulaSyntaxError, InputError
from .logic import ModelSet, format_set, is_subset, members, submasks
from .size import Filter, check_filter, random_filter

# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------


class NablaFormula:
    """Base class of ∇-formula nodes."""

    def free_vars(self) -> frozenset[str]:  # pragma: no cover - abstract
        raise NotImplementedError

    def rename(self, old: str, new: str) -> "NablaFormula":  # pragma: no cover
        """Replace free occurrences of ``old`` by ``new``."""
        raise NotImplementedError

    def __str__(self) -> str:
        return self._show()

    def _show(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def _cached_hash(self) -> int:
        # Formulas are immutable and used as memo keys, so compute the hash of
        # a (possibly deep) tree once per node.
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, k) for k in self.__dataclass_fields__))
            self.__dict__["_hash"] = h
        return h


@dataclass(frozen=True)
class Truth(NablaFormula):
    __hash__ = NablaFormula._cached_hash

    value: bool

    def free_vars(self):
        return frozenset()

    def rename(self, old, new):
        return self

    def _show(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Pred(NablaFormula):
    __hash__ = NablaFormula._cached_hash

    name: str
    var: str

    def free_vars(self):
        return frozenset({self.var})

    def rename(self, old, new):
        return Pred(self.name, new) if self.var == old else self

    def _show(self):
        return f"{self.name}({self.var})"


@dataclass(frozen=True)
class Eq(NablaFormula):
    __hash__ = NablaFormula._cached_hash

    left: str
    right: str

    def free_vars(self):
        return frozenset({self.left, self.right})

    def rename(self, old, new):
        return Eq(new if self.left == old else self.left, new if self.right == old else self.right)

    def _show(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Neg(NablaFormula):
    __hash__ = NablaFormula._cached_hash

    body: NablaFormula

    def free_vars(self):
        return self.body.free_vars()

    def rename(self, old, new):
        return Neg(self.body.rename(old, new))

    def _show(self):
        return f"~{_wrap(self.body)}"


_BIN_OPS = {"and": "&", "or": "|", "imp": "->", "iff": "<->"}


@dataclass(frozen=True)
class Bin(NablaFormula):
    __hash__ = NablaFormula._cached_hash

    op: str
    left: NablaFormula
    right: NablaFormula

    def __post_init__(self) -> None:
        if self.op not in _BIN_OPS:
            raise ValueError(f"unknown connective {self.op!r}")

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def rename(self, old, new):
        return Bin(self.op, self.left.rename(old, new), self.right.rename(old, new))

    def _show(self):
        return f"{_wrap(self.left)} {_BIN_OPS[self.op]} {_wrap(self.right)}"


_QUANTS = {"all": "A", "ex": "E", "nabla": "N"}


@dataclass(frozen=True)
class Quant(NablaFormula):
    """``∀``, ``∃`` or unrestricted ``∇``."""

    __hash__ = NablaFormula._cached_hash

    kind: str
    var: str
    body: NablaFormula

    def __post_init__(self) -> None:
        if self.kind not in _QUANTS:
            raise ValueError(f"unknown quantifier {self.kind!r}")

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def rename(self, old, new):
        if self.var == old:
            return self
        if self.var == new and old in self.body.free_vars():
            raise ValueError(f"renaming {old} to {new} would be captured")
        return Quant(self.kind, self.var, self.body.rename(old, new))

    def _show(self):
        return f"{_QUANTS[self.kind]} {self.var}. {self.body._show()}"


@dataclass(frozen=True)
class RNabla(NablaFormula):
    """Restricted ``∇x φ(x):ψ(x)``."""

    __hash__ = NablaFormula._cached_hash

    var: str
    restriction: NablaFormula
    body: NablaFormula

    def free_vars(self):
        return (self.restriction.free_vars() | self.body.free_vars()) - {self.var}

    def rename(self, old, new):
        if self.var == old:
            return self
        if self.var == new and old in self.free_vars():
            raise ValueError(f"renaming {old} to {new} would be captured")
        return RNabla(self.var, self.restriction.rename(old, new), self.body.rename(old, new))

    def _show(self):
        return f"N {self.var}: {_wrap(self.restriction)} . {self.body._show()}"


def _wrap(f: NablaFormula) -> str:
    if isinstance(f, (Truth, Pred, Neg)):
        return f._show()
    return f"({f._show()})"


# Convenience constructors, used to build axiom instances.


def forall(var: str, body: NablaFormula) -> NablaFormula:
    return Quant("all", var, body)


def exists(var: str, body: NablaFormula) -> NablaFormula:
    return Quant("ex", var, body)


def nabla(var: str, body: NablaFormula) -> NablaFormula:
    return Quant("nabla", var, body)


def rnabla(var: str, restriction: NablaFormula, body: NablaFormula) -> NablaFormula:
    return RNabla(var, restriction, body)


def conj(a: NablaFormula, b: NablaFormula) -> NablaFormula:
    return Bin("and", a, b)


def disj(a: NablaFormula, b: NablaFormula) -> NablaFormula:
    return Bin("or", a, b)


def imp(a: NablaFormula, b: NablaFormula) -> NablaFormula:
    return Bin("imp", a, b)


def iff(a: NablaFormula, b: NablaFormula) -> NablaFormula:
    return Bin("iff", a, b)


_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[~&|().:=])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        tok = m.group(1) or m.group(2)
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self, k: int = 0) -> Optional[str]:
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else self.end

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula", self.end)
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise FormulaSyntaxError(f"expected {tok!r}", self.pos())
        self.i += 1

    def variable(self) -> str:
        tok = self.peek()
        if tok is None or not re.match(r"[A-Za-z_]", tok) or tok in ("true", "false"):
            raise FormulaSyntaxError("expected a variable", self.pos())
        self.i += 1
        return tok

    def parse(self) -> NablaFormula:
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def iff(self) -> NablaFormula:
        left = self.imp()
        while self.peek() == "<->":
            self.take()
            left = Bin("iff", left, self.imp())
        return left

    def imp(self) -> NablaFormula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Bin("imp", left, self.imp())
        return left

    def disj(self) -> NablaFormula:
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Bin("or", left, self.conj())
        return left

    def conj(self) -> NablaFormula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = Bin("and", left, self.unary())
        return left

    def _is_quantifier(self) -> bool:
        tok, nxt = self.peek(), self.peek(1)
        return tok in ("A", "E", "N") and nxt is not None and nxt not in ("(", ".", ":", "=") and \
            re.match(r"[A-Za-z_]", nxt) is not None

    def unary(self) -> NablaFormula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula", self.end)
        if tok == "~":
            self.take()
            return Neg(self.unary())
        if tok == "(":
            self.take()
            f = self.iff()
            self.expect(")")
            return f
        if self._is_quantifier():
            q = self.take()
            var = self.variable()
            if q == "N" and self.peek() == ":":
                self.take()
                restriction = self.iff()
                self.expect(".")
                return RNabla(var, restriction, self.iff())
            self.expect(".")
            kind = {"A": "all", "E": "ex", "N": "nabla"}[q]
            return Quant(kind, var, self.iff())
        if tok in ("true", "false"):
            self.take()
            return Truth(tok == "true")
        if re.match(r"[A-Za-z_]", tok):
            name = self.take()
            if self.peek() == "(":
                self.take()
                var = self.variable()
                self.expect(")")
                return Pred(name, var)
            if self.peek() == "=":
                self.take()
                return Eq(name, self.variable())
            raise FormulaSyntaxError(f"expected '(' or '=' after {name!r}", self.pos())
        raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos())


def parse_nabla(text: str) -> NablaFormula:
    """Parse the concrete syntax described in the module docstring."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NStructure:
    """A finite domain ``{0, …, n−1}``, monadic predicates and a weak-filter system.

    ``nsystem`` maps subsets of the domain to weak filters over them; only
    the subsets an evaluation touches need entries.  With ``validate`` each
    entry is checked to be a weak filter (the empty subset admits only
    ``{∅}``).
    """

    size: int
    predicates: Mapping[str, ModelSet] = field(hash=False)
    nsystem: Mapping[ModelSet, Filter] = field(hash=False)
    validate: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InputError("an N-structure needs a non-empty domain")
        full = self.domain
        preds = {str(k): int(v) for k, v in dict(self.predicates).items()}
        for name, ext in preds.items():
            if not is_subset(ext, full):
                raise InputError(f"predicate {name} leaves the domain")
        system = {int(k): v for k, v in dict(self.nsystem).items()}
        for n, flt in system.items():
            if flt.base != n or not is_subset(n, full):
                raise InputError(f"nsystem entry for {n:#b} has a mismatched base")
            if self.validate:
                ok = flt.family == frozenset({0}) if n == 0 else check_filter(flt).is_weak_filter
                if not ok:
                    raise InputError(f"nsystem entry for {format_set(n)} is not a weak filter")
        object.__setattr__(self, "predicates", preds)
        object.__setattr__(self, "nsystem", system)

    @property
    def domain(self) -> ModelSet:
        return (1 << self.size) - 1

    def filter_over(self, n: ModelSet) -> Filter:
        try:
            return self.nsystem[n]
        except KeyError:
            raise DomainMissError(n, f"no weak filter given over {format_set(n)}") from None


class _Evaluator:
    def __init__(self, m: NStructure) -> None:
        self.m = m
        self.elems = members(m.domain)
        self.memo: dict = {}

    def ext(self, f: NablaFormula, var: str, env: dict) -> ModelSet:
        """The elements that satisfy ``f`` when assigned to ``var``."""
        key = (f, var, tuple(sorted((v, env[v]) for v in f.free_vars() if v != var)))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = 0
        for a in self.elems:
            if self._ev(f, {**env, var: a}):
                out |= 1 << a
        self.memo[key] = out
        return out

    def ev(self, f: NablaFormula, env: dict) -> bool:
        return self._ev(f, env)

    def _ev(self, f: NablaFormula, env: dict) -> bool:
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, Pred):
            if f.name not in self.m.predicates:
                raise InputError(f"unknown predicate {f.name!r}")
            return bool((self.m.predicates[f.name] >> self._val(f.var, env)) & 1)
        if isinstance(f, Eq):
            return self._val(f.left, env) == self._val(f.right, env)
        if isinstance(f, Neg):
            return not self._ev(f.body, env)
        if isinstance(f, Bin):
            a = self._ev(f.left, env)
            if f.op == "and":
                return a and self._ev(f.right, env)
            if f.op == "or":
                return a or self._ev(f.right, env)
            if f.op == "imp":
                return (not a) or self._ev(f.right, env)
            return a == self._ev(f.right, env)
        if isinstance(f, Quant):
            ext = self.ext(f.body, f.var, env)
            if f.kind == "all":
                return ext == self.m.domain
            if f.kind == "ex":
                return ext != 0
            flt = self.m.filter_over(self.m.domain)
            return any(is_subset(a, ext) for a in flt.family)
        if isinstance(f, RNabla):
            base = self.ext(f.restriction, f.var, env)
            flt = self.m.filter_over(base)
            ext = self.ext(f.body, f.var, env)
            return any(is_subset(a, ext) for a in flt.family)
        raise TypeError(f"not a ∇-formula: {f!r}")  # pragma: no cover

    @staticmethod
    def _val(var: str, env: dict) -> int:
        try:
            return env[var]
        except KeyError:
            raise InputError(f"variable {var!r} is free") from None


def eval_nabla(m: NStructure, phi: NablaFormula | str, env: Optional[Mapping[str, int]] = None) -> bool:
    """Truth of a formula in ``m`` (closed unless ``env`` binds its free variables)."""
    if isinstance(phi, str):
        phi = parse_nabla(phi)
    env = dict(env or {})
    missing = phi.free_vars() - set(env)
    if missing:
        raise InputError(f"formula has free variables {sorted(missing)}")
    return _Evaluator(m).ev(phi, env)


# ---------------------------------------------------------------------------
# Axiom schemata
# ---------------------------------------------------------------------------

NABLA_SCHEMATA = {
    "U1": "∇xφ ∧ ∀x(φ → ψ) → ∇xψ",
    "U2": "∇xφ → ¬∇x¬φ",
    "U3a": "∀xφ → ∇xφ",
    "U3b": "∇xφ → ∃xφ",
    "U4": "∇xφ(x) ↔ ∇yφ(y)",
    "S1a": "∇xφ ↔ ∇x(x = x):φ",
    "S1b": "∀x(σ ↔ τ) ∧ ∇xσ:φ → ∇xτ:φ",
    "S2": "∇xφ:ψ ∧ ∀x(φ ∧ ψ → ϑ) → ∇xφ:ϑ",
    "S3": "∃xφ ∧ ∇xφ:ψ → ¬∇xφ:¬ψ",
    "S4a": "∀x(φ → ψ) → ∇xφ:ψ",
    "S4b": "∇xφ:ψ → (∃xφ → ∃x(φ ∧ ψ))",
    "S5": "∇xφ(x):ψ(x) ↔ ∇yφ(y):ψ(y)",
}

UNRESTRICTED = ("U1", "U2", "U3a", "U3b", "U4")
RESTRICTED = ("S1a", "S1b", "S2", "S3", "S4a", "S4b", "S5")


def schema_instances(schema: str, pool: Sequence[NablaFormula], var: str = "x",
                     fresh: str = "y") -> Iterator[NablaFormula]:
    """All instances of one schema over pool formulas in the free variable ``var``."""
    x, y = var, fresh
    one = [(p,) for p in pool]
    two = list(product(pool, repeat=2))
    three = list(product(pool, repeat=3))
    if schema == "U1":
        for p, q in two:
            yield imp(conj(nabla(x, p), forall(x, imp(p, q))), nabla(x, q))
    elif schema == "U2":
        for (p,) in one:
            yield imp(nabla(x, p), Neg(nabla(x, Neg(p))))
    elif schema == "U3a":
        for (p,) in one:
            yield imp(forall(x, p), nabla(x, p))
    elif schema == "U3b":
        for (p,) in one:
            yield imp(nabla(x, p), exists(x, p))
    elif schema == "U4":
        for (p,) in one:
            yield iff(nabla(x, p), nabla(y, p.rename(x, y)))
    elif schema == "S1a":
        for (p,) in one:
            yield iff(nabla(x, p), rnabla(x, Eq(x, x), p))
    elif schema == "S1b":
        for s, t, p in three:
            yield imp(conj(forall(x, iff(s, t)), rnabla(x, s, p)), rnabla(x, t, p))
    elif schema == "S2":
        for p, q, r in three:
            yield imp(conj(rnabla(x, p, q), forall(x, imp(conj(p, q), r))), rnabla(x, p, r))
    elif schema == "S3":
        for p, q in two:
            yield imp(conj(exists(x, p), rnabla(x, p, q)), Neg(rnabla(x, p, Neg(q))))
    elif schema == "S4a":
        for p, q in two:
            yield imp(forall(x, imp(p, q)), rnabla(x, p, q))
    elif schema == "S4b":
        for p, q in two:
            yield imp(rnabla(x, p, q), imp(exists(x, p), exists(x, conj(p, q))))
    elif schema == "S5":
        for p, q in two:
            yield iff(rnabla(x, p, q), rnabla(y, p.rename(x, y), q.rename(x, y)))
    else:
        raise InputError(f"unknown schema {schema!r}")


@lru_cache(maxsize=64)
def _instances(schema: str, pool: tuple[NablaFormula, ...], var: str, fresh: str) -> tuple[NablaFormula, ...]:
    return tuple(schema_instances(schema, pool, var, fresh))


def check_nabla_axioms(
    m: NStructure,
    pool: Sequence[NablaFormula | str],
    schemata: Iterable[str] = UNRESTRICTED + RESTRICTED,
    var: str = "x",
    fresh: str = "y",
) -> list[PropertyVerdict]:
    """Evaluate every schema instance over the pool; one verdict per schema.

    Pool formulas may have ``var`` free and nothing else; ``fresh`` must not
    occur in them.  A failing verdict's witness holds the instance as text.
    """
    formulas = [parse_nabla(p) if isinstance(p, str) else p for p in pool]
    for p in formulas:
        extra = p.free_vars() - {var}
        if extra:
            raise InputError(f"pool formula {p} has free variables {sorted(extra)}")
        if fresh in _all_vars(p):
            raise InputError(f"pool formula {p} mentions the fresh variable {fresh}")
    ev = _Evaluator(m)
    out = []
    for schema in schemata:
        checked = 0
        verdict = None
        for inst in _instances(schema, tuple(formulas), var, fresh):
            checked += 1
            if not ev.ev(inst, {}):
                verdict = PropertyVerdict(schema, False, {"instance": str(inst)}, checked)
                break
        out.append(verdict if verdict is not None else PropertyVerdict(schema, True, None, checked))
    return out


def _all_vars(f: NablaFormula) -> set[str]:
    if isinstance(f, Truth):
        return set()
    if isinstance(f, Pred):
        return {f.var}
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, Neg):
        return _all_vars(f.body)
    if isinstance(f, Bin):
        return _all_vars(f.left) | _all_vars(f.right)
    if isinstance(f, Quant):
        return {f.var} | _all_vars(f.body)
    return {f.var} | _all_vars(f.restriction) | _all_vars(f.body)


# ---------------------------------------------------------------------------
# Random structures and formula pools
# ---------------------------------------------------------------------------


def random_nstructure(
    rng: random.Random, size: int, predicates: Sequence[str] = ("P", "Q", "R")
) -> NStructure:
    """Random predicates and a random weak filter over every subset."""
    full = (1 << size) - 1
    preds = {p: rng.randrange(full + 1) for p in predicates}
    system = {n: random_filter(n, rng, "weak") for n in submasks(full)}
    return NStructure(size, preds, system)


def formula_pool(predicates: Sequence[str] = ("P", "Q"), var: str = "x",
                 depth: int = 2, inner: str = "z") -> list[NablaFormula]:
    """Formulas in one free variable, up to the given connective depth.

    Depth 0 holds the predicate atoms, ``x = x`` and ``false``; each further
    level adds negations and binary combinations of the previous levels, plus
    (at depth 2) atoms guarded by a closed ∇- or ∀-sentence over ``inner``.
    """
    level0: list[NablaFormula] = [Pred(p, var) for p in predicates] + [Eq(var, var), Truth(False)]
    pool = list(level0)
    prev = level0
    for d in range(1, depth + 1):
        new: list[NablaFormula] = []
        for a in prev:
            if not isinstance(a, Neg):
                new.append(Neg(a))
        atoms = [Pred(p, var) for p in predicates]
        for i, a in enumerate(atoms):
            for b in atoms[i + 1:]:
                for op in ("and", "or", "imp"):
                    new.append(Bin(op, a, b) if d == 1 else Bin(op, Neg(a), b))
        if d == 2:
            for p in predicates:
                new.append(conj(Pred(p, var), nabla(inner, Pred(predicates[0], inner))))
                new.append(imp(forall(inner, Pred(p, inner)), Pred(predicates[-1], var)))
        seen = set(pool)
        new = [f for f in new if f not in seen]
        pool.extend(new)
        prev = new
    return pool
