"""Finite groupoids given by explicit partial composition tables.

Source and target are not stored: they are derived from the table as the
sets ``Target(a) = {b : ab defined}`` and ``Source(b) = {c : c^-1 b defined}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import BudgetExceeded, UndefinedCompositionError, UnknownElementError, WeakAxiomViolation

DEFAULT_MAX_ELEMENTS = 512


@dataclass(frozen=True)
class FiniteGroupoid:
    """Elements ``0..n-1`` with a partial product and an inverse map.

    ``labels`` maps ids back to the caller's tokens; ``objects`` optionally
    records a user-supplied ``(source, target)`` object for each element,
    which :func:`verify_axioms` checks against the derived sets.
    """

    size: int
    table: Mapping[tuple[int, int], int]
    inverse: Mapping[int, int]
    labels: tuple[Hashable, ...] = ()
    objects: Mapping[int, tuple[Hashable, Hashable]] = field(default_factory=dict)

    def __post_init__(self):
        n = self.size
        for (a, b), c in self.table.items():
            for x in (a, b, c):
                if not 0 <= x < n:
                    raise UnknownElementError(f"table references unknown element {x!r}")
        for a, b in self.inverse.items():
            if not (0 <= a < n and 0 <= b < n):
                raise UnknownElementError(f"inverse map references unknown element ({a!r}, {b!r})")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        right: dict[int, list[int]] = {a: [] for a in range(n)}
        for a, b in sorted(self.table):
            right[a].append(b)
        object.__setattr__(self, "_right", {a: tuple(bs) for a, bs in right.items()})

    @property
    def elements(self) -> range:
        return range(self.size)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownElementError(f"unknown element {label!r}") from None

    def label(self, a: int):
        return self.labels[a]

    def defined(self, a: int, b: int) -> bool:
        return (a, b) in self.table

    @classmethod
    def from_labeled(
        cls,
        morphisms: Iterable[tuple[Hashable, Hashable, Hashable]],
        compose,
        inverse,
    ) -> "FiniteGroupoid":
        """Build from ``(label, source, target)`` triples.

        ``compose(x, y)`` returns the label of "x then y" (called only when
        target(x) == source(y)); ``inverse(x)`` returns a label.
        """
        morphisms = list(morphisms)
        labels = tuple(m[0] for m in morphisms)
        idx = {lab: i for i, lab in enumerate(labels)}
        objs = {i: (s, t) for i, (_, s, t) in enumerate(morphisms)}
        table = {}
        for i, (x, _, tx) in enumerate(morphisms):
            for j, (y, sy, _) in enumerate(morphisms):
                if tx == sy:
                    table[(i, j)] = idx[compose(x, y)]
        inv = {i: idx[inverse(x)] for i, (x, _, _) in enumerate(morphisms)}
        return cls(len(labels), table, inv, labels, objs)


def compose(g: FiniteGroupoid, a: int, b: int) -> int:
    try:
        return g.table[(a, b)]
    except KeyError:
        raise UndefinedCompositionError(
            f"{g.label(a)!r}.{g.label(b)!r} is undefined (target/source mismatch)"
        ) from None


def _check(g: FiniteGroupoid, a: int):
    if not (isinstance(a, int) and 0 <= a < g.size):
        raise UnknownElementError(f"unknown element {a!r}")


def target_set(g: FiniteGroupoid, a: int) -> frozenset[int]:
    """``{b : ab is defined}``."""
    _check(g, a)
    return frozenset(g._right[a])


def source_set(g: FiniteGroupoid, b: int) -> frozenset[int]:
    """``{c : c^-1 b is defined}``; elements without an inverse never qualify."""
    _check(g, b)
    return frozenset(c for c in g.elements if c in g.inverse and (g.inverse[c], b) in g.table)


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[tuple[str, tuple], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self, g: FiniteGroupoid | None = None) -> dict:
        def lab(x):
            return g.label(x) if g is not None else x

        return {
            "passed": self.passed,
            "violations": [
                {"axiom": ax, "witness": [lab(x) for x in w]} for ax, w in self.violations
            ],
        }


def _cap(g: FiniteGroupoid, max_elements: int):
    if g.size > max_elements:
        raise BudgetExceeded(f"{g.size} elements exceeds the exhaustive-check cap {max_elements}")


def _associativity(g: FiniteGroupoid, limit: int) -> list:
    t, right = g.table, g._right
    out = []
    for (a, b), ab in t.items():
        # (ab)c defined => bc and a(bc) defined and equal
        for c in right[ab]:
            bc = t.get((b, c))
            abc = t.get((a, bc)) if bc is not None else None
            if abc is None or abc != t[(ab, c)]:
                out.append(("associativity", (a, b, c)))
                if len(out) >= limit:
                    return out
        # a(bc) defined => ab . c defined, checked from the other side
    for (b, c), bc in t.items():
        for a in g.elements:
            if (a, bc) in t and ((a, b) not in t or (t[(a, b)], c) not in t):
                out.append(("associativity", (a, b, c)))
                if len(out) >= limit:
                    return out
    return out


def verify_axioms(g: FiniteGroupoid, *, max_elements: int = DEFAULT_MAX_ELEMENTS, limit: int = 64) -> AxiomReport:
    """Exhaustively check the groupoid axioms on ``g``.

    Checks associativity over every defined triple, existence of inverses and
    the four two-sided inverse laws, the equivalence
    ``ab defined <=> Target(a) == Source(b)``, and agreement with any
    user-supplied object labelling. At most ``limit`` witnesses are kept
    per axiom.
    """
    _cap(g, max_elements)
    t, inv = g.table, g.inverse
    v: list = _associativity(g, limit)

    def add(axiom, witness):
        if sum(1 for ax, _ in v if ax == axiom) < limit:
            v.append((axiom, witness))

    for a in g.elements:
        ai = inv.get(a)
        if ai is None or (a, ai) not in t or (ai, a) not in t:
            add("inverse", (a,))
            continue
        l_id, r_id = t[(ai, a)], t[(a, ai)]  # a^-1 a, a a^-1
        for b in g.elements:
            if (a, b) in t and t.get((l_id, b)) != b:
                add("2a", (a, b))
            if (ai, b) in t and t.get((r_id, b)) != b:
                add("2b", (a, b))
            if (b, a) in t and t.get((b, r_id)) != b:
                add("2c", (a, b))
            if (b, ai) in t and t.get((b, l_id)) != b:
                add("2d", (a, b))

    targets = {a: target_set(g, a) for a in g.elements}
    sources = {b: source_set(g, b) for b in g.elements}
    for a in g.elements:
        for b in g.elements:
            if ((a, b) in t) != (targets[a] == sources[b]):
                add("target-source", (a, b))

    if g.objects:
        for a in g.elements:
            tgt = g.objects[a][1]
            expected = frozenset(b for b in g.elements if g.objects[b][0] == tgt)
            if targets[a] != expected:
                add("labeling", (a,))
    return AxiomReport(tuple(v))


def check_weak_axioms(
    g: FiniteGroupoid, left: Mapping[int, int], right: Mapping[int, int], *, limit: int = 64
) -> list:
    """Violations of associativity and the one-sided inverse laws 2'a, 2'b."""
    t = g.table
    v = _associativity(g, limit)
    for a in g.elements:
        al, ar = left.get(a), right.get(a)
        if al is None or (al, a) not in t:
            v.append(("2'a", (a,)))
        else:
            e = t[(al, a)]
            v += [("2'a", (a, b)) for b in g._right[a] if t.get((e, b)) != b]
        if ar is None or (a, ar) not in t:
            v.append(("2'b", (a,)))
        else:
            e = t[(a, ar)]
            v += [("2'b", (a, b)) for b in g.elements if (b, a) in t and t.get((b, e)) != b]
    return v


def derive_strong_inverses(
    g: FiniteGroupoid,
    left: Mapping[int, int],
    right: Mapping[int, int],
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> AxiomReport:
    """Replay the left-inverse = right-inverse argument on a concrete table.

    For each ``a`` the chain ``aL = aL (a aR) = (aL a) aR = aR`` is evaluated
    step by step; then, with ``a^-1`` the common inverse,
    ``a = a (a^-1 (a^-1)^-1) = (a a^-1)(a^-1)^-1 = (a^-1)^-1``. Any step that
    fails to be defined or to hold is reported.

    Raises :class:`WeakAxiomViolation` if the weak axioms themselves fail.
    """
    _cap(g, max_elements)
    bad = check_weak_axioms(g, left, right)
    if bad:
        ax, w = bad[0]
        raise WeakAxiomViolation(f"weak axiom {ax} fails at {[g.label(x) for x in w]}")
    t = g.table
    v = []
    for a in g.elements:
        al, ar = left[a], right[a]
        a_ar = t[(a, ar)]
        step1 = t.get((al, a_ar))  # aL (a aR)
        step2 = t.get((t[(al, a)], ar))  # (aL a) aR
        if step1 != al or step2 != step1 or step2 != ar:
            v.append(("left-right", (a,)))
    if not v:
        inv = dict(left)
        for a in g.elements:
            ai, aii = inv[a], inv[inv[a]]
            inner = t.get((ai, aii))  # a^-1 (a^-1)^-1
            lhs = t.get((a, inner)) if inner is not None else None
            rhs = t.get((t[(a, ai)], aii))
            if lhs != a or rhs != lhs or aii != a:
                v.append(("double-inverse", (a,)))
    return AxiomReport(tuple(v))


# -- constructors ----------------------------------------------------------

def pair_groupoid(n_objects: int) -> FiniteGroupoid:
    """One arrow ``i -> j`` for every ordered pair of objects."""
    objs = range(n_objects)
    morphisms = [((i, j), i, j) for i in objs for j in objs]
    return FiniteGroupoid.from_labeled(
        morphisms, compose=lambda x, y: (x[0], y[1]), inverse=lambda x: (x[1], x[0])
    )


def cyclic_group(order: int, obj: Hashable = 0) -> FiniteGroupoid:
    """The group Z_order as a one-object groupoid; label ``(obj, k)``."""
    morphisms = [((obj, k), obj, obj) for k in range(order)]
    return FiniteGroupoid.from_labeled(
        morphisms,
        compose=lambda x, y: (obj, (x[1] + y[1]) % order),
        inverse=lambda x: (obj, (-x[1]) % order),
    )


def permutation_group(degree: int, obj: Hashable = 0) -> FiniteGroupoid:
    """The symmetric group on ``degree`` letters; "x then y" is ``y o x``."""
    perms = list(itertools.permutations(range(degree)))
    morphisms = [((obj, p), obj, obj) for p in perms]

    def comp(x, y):
        p, q = x[1], y[1]
        return (obj, tuple(q[p[i]] for i in range(degree)))

    def inv(x):
        p = x[1]
        out = [0] * degree
        for i, pi in enumerate(p):
            out[pi] = i
        return (obj, tuple(out))

    return FiniteGroupoid.from_labeled(morphisms, comp, inv)


def disjoint_union(*parts: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union; labels become ``(part_index, label)``."""
    table, inv, labels, objects = {}, {}, [], {}
    off = 0
    for k, g in enumerate(parts):
        for (a, b), c in g.table.items():
            table[(a + off, b + off)] = c + off
        for a, b in g.inverse.items():
            inv[a + off] = b + off
        labels += [(k, lab) for lab in g.labels]
        for a, (s, t) in g.objects.items():
            objects[a + off] = ((k, s), (k, t))
        off += g.size
    if objects and len(objects) != off:
        objects = {}
    return FiniteGroupoid(off, table, inv, tuple(labels), objects)


def relabel(g: FiniteGroupoid, perm) -> FiniteGroupoid:
    """Renumber element ``a`` as ``perm[a]``."""
    table = {(perm[a], perm[b]): perm[c] for (a, b), c in g.table.items()}
    inv = {perm[a]: perm[b] for a, b in g.inverse.items()}
    labels = [None] * g.size
    for a in g.elements:
        labels[perm[a]] = g.labels[a]
    objects = {perm[a]: o for a, o in g.objects.items()}
    return FiniteGroupoid(g.size, table, inv, tuple(labels), objects)


# -- text format -------------------------------------------------------------

def parse_table(text: str) -> tuple[FiniteGroupoid, dict[int, int], dict[int, int]]:
    """Parse ``a b -> c`` / ``inv a -> b`` lines.

    ``linv a -> b`` and ``rinv a -> b`` give separate left and right
    inverses; when absent, both default to the ``inv`` map. ``#`` starts a
    comment. Returns ``(groupoid, left_inverse, right_inverse)``.
    """
    comps, invs, linvs, rinvs = [], [], [], []
    labels: dict[str, int] = {}

    def ident(tok):
        return labels.setdefault(tok, len(labels))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("->")
        lhs_t, rhs_t = lhs.split(), rhs.split()
        if not sep or len(rhs_t) != 1 or len(lhs_t) != 2:
            raise ValueError(f"line {lineno}: expected 'a b -> c' or 'inv a -> b', got {raw!r}")
        head, arg = lhs_t
        if head in ("inv", "linv", "rinv"):
            dest = {"inv": invs, "linv": linvs, "rinv": rinvs}[head]
            dest.append((ident(arg), ident(rhs_t[0])))
        else:
            comps.append((ident(head), ident(arg), ident(rhs_t[0])))

    table = {}
    for a, b, c in comps:
        if table.get((a, b), c) != c:
            raise ValueError(f"conflicting entries for {a} {b}")
        table[(a, b)] = c
    inv = dict(invs)
    left = dict(linvs) if linvs else dict(inv)
    right = dict(rinvs) if rinvs else dict(inv)
    if not inv and linvs:
        inv = dict(left)
    order = tuple(sorted(labels, key=labels.get))
    return FiniteGroupoid(len(order), table, inv, order), left, right


def _token(label) -> str:
    return str(label).replace(" ", "")


def format_table(g: FiniteGroupoid) -> str:
    tok = [_token(lab) for lab in g.labels]
    lines = [f"{tok[a]} {tok[b]} -> {tok[c]}" for (a, b), c in sorted(g.table.items())]
    lines += [f"inv {tok[a]} -> {tok[b]}" for a, b in sorted(g.inverse.items())]
    return "\n".join(lines) + "\n"
