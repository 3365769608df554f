"""Compositions, isotropic flag chains, flag tuples, enumeration, action.

A FlagChain is a tuple of nested Subspaces; a FlagTuple is a tuple of
chains over one ambient space.  Everything is hashable, which is what the
orbit engine keys on.

Enumeration works over GF(q) by extending isotropic flags one vector at a
time inside perp(V)\\V (or inside the whole space with ``isotropic=False``,
which is what the GL-flag spot checks of the appendix formula use).
"""

import os

from .linalg import canonicalize, act_on_subspace, zero_space
from .geometry import perp, form, is_isotropic


DEFAULT_ENUM_BUDGET = 10 ** 8


class BudgetExceeded(Exception):
    def __init__(self, projected, budget):
        self.projected = projected
        self.budget = budget
        super().__init__("enumeration budget exceeded: %r > %r" % (projected, budget))


def enum_budget():
    return int(os.environ.get("FLAGTYPE_BUDGET", DEFAULT_ENUM_BUDGET))


class Composition:
    """A nonempty tuple of positive parts with sum <= n."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if not parts or any(p < 1 for p in parts):
            raise ValueError("composition parts must be positive, got %r" % (parts,))
        self.parts = parts

    @property
    def dims(self):
        out, s = [], 0
        for p in self.parts:
            s += p
            out.append(s)
        return tuple(out)

    def total(self):
        return sum(self.parts)

    def check(self, n):
        if self.total() > n:
            raise ValueError("composition %r exceeds n=%d" % (self.parts, n))

    def __eq__(self, other):
        return isinstance(other, Composition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "Composition%r" % (self.parts,)


def chain(*spaces):
    return tuple(spaces)


def validate(ch, comp, n):
    """None if the chain is a valid member of M_comp, else the first violation."""
    dims = comp.dims
    if len(ch) != len(dims):
        return "length: chain has %d spaces, composition needs %d" % (len(ch), len(dims))
    for i, s in enumerate(ch):
        if s.ambient != 2 * n:
            return "ambient: space %d lives in F^%d, expected F^%d" % (i, s.ambient, 2 * n)
        if s.dim != dims[i]:
            return "dimension: space %d has dim %d, expected %d" % (i, s.dim, dims[i])
    for i in range(len(ch) - 1):
        if not ch[i + 1].contains_space(ch[i]):
            return "nesting: space %d is not contained in space %d" % (i, i + 1)
    if not is_isotropic(ch[-1], n):
        return "isotropy: top space is not isotropic"
    return None


def validate_tuple(ft, comps, n):
    for i, (ch, comp) in enumerate(zip(ft, comps)):
        v = validate(ch, comp, n)
        if v is not None:
            return "chain %d: %s" % (i, v)
    if len(ft) != len(comps):
        return "tuple length mismatch"
    return None


def act(g, ft):
    """Componentwise image of a FlagTuple (tuple of chains) under g."""
    return tuple(tuple(act_on_subspace(g, s) for s in ch) for ch in ft)


def act_chain(g, ch):
    return tuple(act_on_subspace(g, s) for s in ch)


def _space_vectors(s):
    """All vectors of a subspace over GF(q), including 0."""
    q = s.q
    vecs = [tuple([0] * s.ambient)]
    for row in s.rows:
        new = []
        for v in vecs:
            for c in range(1, q):
                new.append(tuple((x + c * y) % q for x, y in zip(v, row)))
        vecs.extend(new)
    return vecs


def _projective_vectors(s):
    """One vector per line of the subspace (leading coefficient normalized)."""
    q = s.q
    out = []
    k = s.dim
    for lead in range(k):
        # coefficient vectors (0,..,0,1,c_{lead+1},..,c_{k-1})
        tails = [()]
        for _ in range(k - lead - 1):
            tails = [t + (c,) for t in tails for c in range(q)]
        for t in tails:
            coeffs = (0,) * lead + (1,) + t
            v = [0] * s.ambient
            for cf, row in zip(coeffs, s.rows):
                if cf:
                    for i, x in enumerate(row):
                        v[i] = (v[i] + cf * x) % q
            out.append(tuple(v))
    return out


def _extensions(cur, step, n, isotropic, budget_state, room_full=None):
    """All spaces W with cur ⊂ W, dim W = dim cur + step (canonical, deduped)."""
    q = cur.q
    level = {cur}
    for _ in range(step):
        nxt = set()
        for v_space in level:
            room = perp(v_space, n) if isotropic else room_full
            for vec in _projective_vectors(room):
                if v_space.contains(vec):
                    continue
                if isotropic and form(q, n, vec, vec) != 0:
                    continue
                w = canonicalize(q, cur.ambient, list(v_space.rows) + [vec])
                nxt.add(w)
                budget_state[0] += 1
                if budget_state[0] > budget_state[1]:
                    raise BudgetExceeded(budget_state[0], budget_state[1])
        level = nxt
    return level


def enumerate_chains(q, n, comp, isotropic=True, budget=None):
    """All flags of M_comp over GF(q), each exactly once, deterministic order.

    With isotropic=False this enumerates plain GL-flags of F_q^{2n}; the
    appendix spot checks call it with the ambient reinterpreted as F_q^m via
    ``ambient`` below.
    """
    return enumerate_chains_ambient(q, 2 * n, comp, n if isotropic else None, budget)


def enumerate_chains_ambient(q, ambient, comp, iso_n=None, budget=None):
    """Flag enumeration in F_q^ambient; isotropy enforced iff iso_n is set."""
    if budget is None:
        budget = enum_budget()
    budget_state = [0, budget]
    isotropic = iso_n is not None
    if isotropic:
        comp.check(iso_n)
    else:
        if comp.total() > ambient:
            raise ValueError("composition exceeds ambient dimension")
    room_full = None
    if not isotropic:
        room_full = canonicalize(q, ambient,
                                 [[1 if i == j else 0 for j in range(ambient)]
                                  for i in range(ambient)])
    chains = [(zero_space(q, ambient),)]
    for part in comp.parts:
        nxt = []
        for ch in chains:
            for w in sorted(_extensions(ch[-1], part, iso_n if isotropic else 0,
                                        isotropic, budget_state, room_full),
                            key=lambda s: s.rows):
                nxt.append(ch + (w,))
        chains = nxt
    return [ch[1:] for ch in chains]


def enumerate_subspaces(q, ambient, dim, iso_n=None, budget=None):
    """All dim-dimensional (isotropic) subspaces, via the chain enumerator."""
    return [ch[0] for ch in
            enumerate_chains_ambient(q, ambient, Composition([dim]), iso_n, budget)]


def tuple_to_json(ft, n, q):
    return {"n": n, "q": q if q else "rational",
            "chains": [[s.to_json() for s in ch] for ch in ft]}
