"""Independent brute-force oracles on frozensets.

Nothing here imports the bitmask machinery of the package under test except
to convert inputs; every definition is restated directly from the condition
texts so that disagreements expose implementation errors.
"""

from __future__ import annotations

from itertools import chain, combinations, product

import sympy


def fs(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def mask(s) -> int:
    m = 0
    for e in s:
        m |= 1 << e
    return m


def subsets(elems) -> list[frozenset[int]]:
    elems = sorted(elems)
    return [frozenset(c) for c in chain.from_iterable(combinations(elems, r) for r in range(len(elems) + 1))]


def fs_table(f) -> dict[frozenset, frozenset]:
    """A choice function's table with frozenset keys and values."""
    return {fs(x): fs(y) for x, y in f.table.items()}


# ---------------------------------------------------------------------------
# Choice conditions on a full power-set domain
# ---------------------------------------------------------------------------


def mu_oracle(prop: str, t: dict[frozenset, frozenset]) -> bool:
    dom = list(t)
    pairs = list(product(dom, repeat=2))
    if prop == "mu_sub":
        return all(t[x] <= x for x in dom)
    if prop in ("mu_empty", "mu_empty_fin"):
        return all(t[x] or not x for x in dom)
    if prop == "mu_OR":
        return all(t[x | y] <= t[x] | t[y] for x, y in pairs)
    if prop == "mu_wOR":
        return all(t[x | y] <= t[x] | y for x, y in pairs)
    if prop == "mu_disjOR":
        return all(t[x | y] <= t[x] | t[y] for x, y in pairs if not x & y)
    if prop == "mu_PR":
        return all(t[y] & x <= t[x] for x, y in pairs if x <= y)
    if prop == "mu_PR_prime":
        return all(t[x] & y <= t[x & y] for x, y in pairs)
    if prop == "mu_CUT":
        return all(t[x] <= t[y] for x, y in pairs if t[x] <= y <= x)
    if prop == "mu_CM":
        return all(t[y] <= t[x] for x, y in pairs if t[x] <= y <= x)
    if prop == "mu_CUM":
        return all(t[y] == t[x] for x, y in pairs if t[x] <= y <= x)
    if prop == "mu_ResM":
        return all(t[x & a] <= b for x, a, b in product(dom, repeat=3) if t[x] <= a & b)
    if prop == "mu_subsup":
        return all(t[x] == t[y] for x, y in pairs if t[x] <= y and t[y] <= x)
    if prop == "mu_RatM":
        return all(t[x] <= t[y] & x for x, y in pairs if x <= y and x & t[y])
    if prop == "mu_eq":
        return all(t[x] == t[y] & x for x, y in pairs if x <= y and x & t[y])
    if prop == "mu_eq_prime":
        return all(t[y & x] == t[y] & x for x, y in pairs if t[y] & x)
    if prop == "mu_par":
        return all(t[x | y] in (t[x], t[y], t[x] | t[y]) for x, y in pairs)
    if prop == "mu_cup":
        return all(not (t[x | y] & y) for x, y in pairs if t[y] & (x - t[x]))
    if prop == "mu_cup_prime":
        return all(t[x | y] == t[x] for x, y in pairs if t[y] & (x - t[x]))
    if prop == "mu_in":
        return all(
            any(a not in t[frozenset({a, b})] for b in x)
            for x in dom
            for a in x - t[x]
        )
    raise KeyError(prop)


# ---------------------------------------------------------------------------
# Preferential structures
# ---------------------------------------------------------------------------


def pref_mu(nodes, attacks, x: frozenset) -> frozenset:
    """Elements of x with a copy that no node of x attacks."""
    out = set()
    for e, c in nodes:
        if e not in x:
            continue
        if not any(v == (e, c) and u[0] in x for u, v in attacks):
            out.add(e)
    return frozenset(out)


def transitive(rel) -> bool:
    rel = set(rel)
    return all((a, d) in rel for a, b in rel for c, d in rel if b == c)


def ranked(rel, elems) -> bool:
    """Modularity: incomparable x, y have the same predecessors and successors."""
    rel = set(rel)
    for x in elems:
        for y in elems:
            if x == y or (x, y) in rel or (y, x) in rel:
                continue
            for z in elems:
                if (z, x) in rel and (z, y) not in rel:
                    return False
                if (x, z) in rel and (y, z) not in rel:
                    return False
    return True


def has_cycle(rel, elems) -> bool:
    """Brute force: some element reaches itself."""
    rel = set(rel)
    for s in elems:
        seen, stack = set(), [s]
        while stack:
            u = stack.pop()
            for a, b in rel:
                if a == u:
                    if b == s:
                        return True
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
    return False


# ---------------------------------------------------------------------------
# Propositional formulas through sympy
# ---------------------------------------------------------------------------


def sympy_models(expr, atoms: list[str]) -> int:
    """Model set of a sympy boolean expression; model i sets atom j iff bit j of i."""
    syms = [sympy.Symbol(a) for a in atoms]
    out = 0
    for i in range(1 << len(atoms)):
        env = {s: bool((i >> j) & 1) for j, s in enumerate(syms)}
        if bool(expr.subs(env)):
            out |= 1 << i
    return out


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def collective(dist, x: frozenset, y: frozenset) -> frozenset:
    best = min(dist[(a, b)] for a in x for b in y)
    return frozenset(b for b in y if any(dist[(a, b)] == best for a in x))


def individual(dist, x: frozenset, y: frozenset) -> frozenset:
    out = set()
    for a in x:
        best = min(dist[(a, b)] for b in y)
        out |= {b for b in y if dist[(a, b)] == best}
    return frozenset(out)


# ---------------------------------------------------------------------------
# AGM postulates on model sets
# ---------------------------------------------------------------------------


def revision_ok(universe: frozenset, base: frozenset, rev: dict) -> bool:
    sets = subsets(universe)
    for a in sets:
        r = rev[a]
        if not r <= a:
            return False
        if not base & a <= r:
            return False
        if base & a and not r <= base & a:
            return False
        if not r and a:
            return False
        for b in sets:
            if not (r & b) <= rev[a & b]:
                return False
            if r & b and not rev[a & b] <= r & b:
                return False
    return True


def contraction_ok(universe: frozenset, base: frozenset, con: dict) -> bool:
    sets = subsets(universe)
    for a in sets:
        c = con[a]
        if not base <= c:
            return False
        if not base <= a and c != base:
            return False
        if a != universe and c <= a:
            return False
        if not (c & a) <= base:
            return False
        for b in sets:
            if not con[a & b] <= con[a] | con[b]:
                return False
            if not con[a & b] <= a and not con[a] <= con[a & b]:
                return False
    return True


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------


def filter_conditions(base: frozenset, family: set) -> dict[str, bool]:
    sets = subsets(base)
    fam = set(family)
    return {
        "FAll": base in fam,
        "F_up": all(b in fam for a in fam for b in sets if a <= b),
        "F_cap": all(a & b in fam for a in fam for b in fam),
        "F_cap_prime": all(a & b for a in fam for b in fam),
    }
