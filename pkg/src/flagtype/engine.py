"""Exact orbit computation over GF(q): BFS orbits with word recovery,
same-orbit decisions with connecting elements, and orbit censuses.

Everything here is exact; large jobs either finish or report Infeasible.
The workhorse is a stabilizer descent: components of a flag tuple are fixed
one at a time, and the stabilizer of the fixed prefix is tracked exactly.
Descents start from the whole group (order known by formula), standard
coordinate subspaces get their structural stabilizer generators (torus,
root elements, block swap), and every other step uses Schreier generators
of the point stabilizer, materialized when the exact order - known by the
orbit-stabilizer telescope - fits in memory.
"""

import os

from .linalg import Mat, identity, inverse, mat_mul, act_on_subspace, meet
from .geometry import (group_order, perp, pair_stabilizer_generators,
                       coordinate_subspace)
from . import flags as _flags


DEFAULT_ORBIT_BUDGET = 5 * 10 ** 7
MATERIALIZE_CAP = 500_000
GENLIST_CAP = 20_000


def orbit_budget():
    return int(os.environ.get("FLAGTYPE_BUDGET", DEFAULT_ORBIT_BUDGET))


INFEASIBLE = "Infeasible"
SAME = "Yes"
DIFFERENT = "No"


class Infeasible(Exception):
    pass


class ActionCache:
    """Memoized action of a fixed generator list on subspaces."""

    def __init__(self, gens):
        self.gens = list(gens)
        self.cache = {}

    def sub(self, gi, s):
        key = (gi, s)
        out = self.cache.get(key)
        if out is None:
            out = act_on_subspace(self.gens[gi], s)
            self.cache[key] = out
        return out

    def chain(self, gi, ch):
        return tuple(self.sub(gi, s) for s in ch)

    def tuple(self, gi, ft):
        return tuple(self.chain(gi, ch) for ch in ft)


def tuple_key(ft):
    return tuple(tuple(s.rows for s in ch) for ch in ft)


def chain_key(ch):
    return tuple(s.rows for s in ch)


def orbit_with_tree(start, gens, act_fn, budget=None, stop_at=None):
    """BFS orbit with a spanning tree {member: (parent, gen_index) | None}."""
    if budget is None:
        budget = orbit_budget()
    tree = {start: None}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for gi in range(len(gens)):
                y = act_fn(gi, x)
                if y not in tree:
                    tree[y] = (x, gi)
                    order.append(y)
                    nxt.append(y)
                    if len(tree) > budget:
                        raise Infeasible("orbit budget exceeded")
                    if stop_at is not None and y == stop_at:
                        return order, tree
        frontier = nxt
    return order, tree


def path_element(member, tree, gens, q, dim):
    """Group element carrying the orbit root to `member` along the tree."""
    steps = []
    x = member
    while tree[x] is not None:
        parent, gi = tree[x]
        steps.append(gi)
        x = parent
    g = identity(q, dim)
    for gi in reversed(steps):
        g = mat_mul(gens[gi], g)
    return g


def subspace_orbit_with_transversal(start, gens, q, dim, budget=None):
    """Orbit of one Subspace plus a transversal matrix per member."""
    if budget is None:
        budget = orbit_budget()
    cache = ActionCache(gens)
    trans = {start: identity(q, dim)}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            gx = trans[x]
            for gi in range(len(gens)):
                y = cache.sub(gi, x)
                if y not in trans:
                    trans[y] = mat_mul(gens[gi], gx)
                    order.append(y)
                    nxt.append(y)
                    if len(trans) > budget:
                        raise Infeasible("orbit budget exceeded")
        frontier = nxt
    return order, trans


def close_group(gens, cap):
    """Materialize <gens> by BFS; raises Infeasible beyond cap."""
    q = gens[0].q
    dim = gens[0].nrows
    ident = identity(q, dim)
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g)
                if y not in group:
                    group.add(y)
                    nxt.append(y)
                    if len(group) > cap:
                        raise Infeasible("group materialization cap exceeded")
        frontier = nxt
    return group


def grow_group(elements, gens, h, cap):
    """Extend the closed set `elements` = <gens> to <gens + [h]> in place."""
    gens = list(gens) + [h]
    frontier = []
    for m in list(elements):
        y = mat_mul(m, h)
        if y not in elements:
            elements.add(y)
            frontier.append(y)
            if len(elements) > cap:
                raise Infeasible("group materialization cap exceeded")
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(x, g)
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise Infeasible("group materialization cap exceeded")
        frontier = nxt
    return elements


class StabLevel:
    """Exact stabilizer description along a descent chain.

    gens always generate the group exactly; elements is the materialized
    set when available; order is the exact group order when known.
    """

    def __init__(self, gens, order=None, elements=None):
        self.gens = list(gens)
        self.order = order
        self.elements = elements


def schreier_descend(level, point, q, dim, budget=None,
                     materialize_cap=MATERIALIZE_CAP):
    """Exact stabilizer of `point` inside `level`, plus orbit and transversal.

    The returned level's generators are Schreier generators (complete by
    Schreier's lemma).  When the exact order is known and fits the cap the
    subgroup is materialized and generator acceptance stops early; otherwise
    a deduplicated generator list is kept.
    """
    order_list, trans = subspace_orbit_with_transversal(point, level.gens, q,
                                                        dim, budget)
    if len(order_list) == 1:
        # every generator fixes the point: the stabilizer is the whole level
        return level, order_list, trans
    sub_order = None
    if level.order is not None:
        if level.order % len(order_list):
            raise AssertionError("orbit size does not divide the group order")
        sub_order = level.order // len(order_list)
    cache = ActionCache(level.gens)
    ident = identity(q, dim)
    accepted = []
    elements = {ident}
    materialized = sub_order is not None and sub_order <= materialize_cap
    seen_raw = {ident}
    inv_cache = {}
    done = False
    for x in order_list:
        if done:
            break
        gx = trans[x]
        for gi in range(len(level.gens)):
            y = cache.sub(gi, x)
            gy_inv = inv_cache.get(y)
            if gy_inv is None:
                gy_inv = inverse(trans[y])
                inv_cache[y] = gy_inv
            h = mat_mul(gy_inv, mat_mul(level.gens[gi], gx))
            if materialized:
                if h in elements:
                    continue
                accepted.append(h)
                grow_group(elements, accepted, h, materialize_cap)
                if len(elements) == sub_order:
                    done = True
                    break
            else:
                if h in seen_raw:
                    continue
                seen_raw.add(h)
                accepted.append(h)
                if len(accepted) > GENLIST_CAP:
                    raise Infeasible("stabilizer generator list too large")
    if materialized and len(elements) != sub_order:
        raise AssertionError("Schreier closure does not reach the exact order")
    new = StabLevel(accepted if accepted else [ident],
                    order=sub_order,
                    elements=elements if materialized else None)
    return new, order_list, trans


def is_standard_chain(ch):
    """True when every space of the chain is an initial coordinate segment."""
    for s in ch:
        std = coordinate_subspace(s.q, s.ambient, list(range(1, s.dim + 1)))
        if s != std:
            return False
    return True


def standard_chain_stabilizer(ch, n, q):
    """Structural generators of Stab_G(U_[d1] ⊂ ... ⊂ U_[dk]).

    Torus plus every root element fixing each space, plus the non-SO block
    swap at the first position after the top space (present iff top dim < n).
    The set is exact: the connected part is generated by the torus and the
    shared root subgroups, and the swap covers the non-SO coset.
    """
    top = ch[-1].dim
    gens = pair_stabilizer_generators(q, n, top, 0, 0, 0)
    keep = []
    for g in gens:
        if all(act_on_subspace(g, s) == s for s in ch):
            keep.append(g)
    return keep


def signature(ft, n):
    """G-invariant vector: dims of components, their perps, pairwise meets."""
    subs = [s for ch in ft for s in ch]
    pool = list(subs) + [perp(s, n) for s in subs]
    sig = [s.dim for s in pool]
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            sig.append(meet(pool[i], pool[j]).dim)
    return tuple(sig)


def orbit(start, gens, q, budget=None):
    """Orbit of a FlagTuple with a spanning tree of generator words."""
    cache = ActionCache(gens)
    return orbit_with_tree(start, gens, cache.tuple, budget)


def same_orbit(x, y, gens, n, q, budget=None, tuple_bfs_limit=120_000):
    """Exact same-orbit decision; returns (verdict, connecting element|None)."""
    if tuple(len(ch) for ch in x) != tuple(len(ch) for ch in y):
        return DIFFERENT, None
    if tuple_key(x) == tuple_key(y):
        return SAME, identity(q, 2 * n)
    if signature(x, n) != signature(y, n):
        return DIFFERENT, None
    if group_order(q, n) <= tuple_bfs_limit:
        return _same_orbit_bfs(x, y, gens, n, q, budget)
    return _same_orbit_descent(x, y, gens, n, q, budget)


def _same_orbit_bfs(x, y, gens, n, q, budget):
    cache = ActionCache(gens)
    try:
        order_list, tree = orbit_with_tree(x, gens, cache.tuple, budget,
                                           stop_at=y)
    except Infeasible:
        return INFEASIBLE, None
    if y not in tree:
        return DIFFERENT, None
    g = path_element(y, tree, gens, q, 2 * n)
    if _flags.act(g, x) != y:
        raise AssertionError("same_orbit produced a wrong connecting element")
    return SAME, g


def _standard_anchor(members, q, ambient):
    for m in members:
        std = coordinate_subspace(q, ambient, list(range(1, m.dim + 1)))
        if m == std:
            return m
    return None


def _same_orbit_descent(x, y, gens, n, q, budget):
    fx = [s for ch in x for s in ch]
    fy = [s for ch in y for s in ch]
    # fix large components first: stabilizer orders then drop fastest
    order_idx = sorted(range(len(fx)), key=lambda i: (-fx[i].dim, i))
    level = StabLevel(list(gens), order=group_order(q, n))
    gx = identity(q, 2 * n)
    gy = identity(q, 2 * n)
    cx = list(fx)
    cy = list(fy)
    try:
        for pos, idx in enumerate(order_idx):
            if level.elements is not None:
                # stabilizer materialized: transport and filter directly
                if cx[idx] == cy[idx]:
                    found = identity(q, 2 * n)
                else:
                    found = None
                    for m in sorted(level.elements, key=lambda x: x.rows):
                        if act_on_subspace(m, cx[idx]) == cy[idx]:
                            found = m
                            break
                    if found is None:
                        return DIFFERENT, None
                gx = mat_mul(found, gx)
                cx = [act_on_subspace(found, s) for s in cx]
                target = cy[idx]
                stab = [m for m in level.elements
                        if act_on_subspace(m, target) == target]
                level = StabLevel(stab, order=len(stab), elements=set(stab))
                continue
            members, trans = subspace_orbit_with_transversal(
                cx[idx], level.gens, q, 2 * n, budget)
            if cy[idx] not in trans:
                return DIFFERENT, None
            anchor = None
            if pos == 0 and level.order == group_order(q, n):
                anchor = _standard_anchor(members, q, 2 * n)
            if anchor is None:
                anchor = cy[idx]
            hx = trans[anchor]
            hy = mat_mul(trans[anchor], inverse(trans[cy[idx]]))
            gx = mat_mul(hx, gx)
            gy = mat_mul(hy, gy)
            cx = [act_on_subspace(hx, s) for s in cx]
            cy = [act_on_subspace(hy, s) for s in cy]
            if pos == 0 and is_standard_chain((anchor,)):
                level = StabLevel(standard_chain_stabilizer((anchor,), n, q),
                                  order=level.order // len(members))
            else:
                level, _, _ = schreier_descend(level, anchor, q, 2 * n, budget)
    except Infeasible:
        return INFEASIBLE, None
    if cx != cy:
        raise AssertionError("descent lost track of the tuple")
    g = mat_mul(inverse(gy), gx)
    if _flags.act(g, x) != y:
        raise AssertionError("same_orbit produced a wrong connecting element")
    return SAME, g


# ---------------------------------------------------------------------------
# censuses


class OrbitCensus:
    def __init__(self, descriptor, q, orbit_count, orbit_sizes, representatives,
                 signatures, total):
        self.descriptor = descriptor
        self.q = q
        self.orbit_count = orbit_count
        self.orbit_sizes = orbit_sizes
        self.representatives = representatives
        self.signatures = signatures
        self.total = total

    def to_json(self, n):
        return {
            "descriptor": self.descriptor,
            "q": self.q,
            "orbit_count": self.orbit_count,
            "orbit_sizes": sorted(self.orbit_sizes),
            "total": self.total,
            "signatures": [list(s) for s in self.signatures],
            "representatives": [_flags.tuple_to_json(r, n, self.q)
                                for r in self.representatives],
        }


def census_direct(tuples, gens, n, q, descriptor=""):
    """Union-find census of an explicit FlagTuple list under the generators."""
    index = {tuple_key(t): i for i, t in enumerate(tuples)}
    if len(index) != len(tuples):
        raise ValueError("census space contains duplicates")
    parent = list(range(len(tuples)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    cache = ActionCache(gens)
    for i, t in enumerate(tuples):
        for gi in range(len(gens)):
            img = cache.tuple(gi, t)
            j = index.get(tuple_key(img))
            if j is None:
                raise AssertionError("census space not closed under the action")
            ra, rb = find(i), find(j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(len(tuples)):
        groups.setdefault(find(i), []).append(i)
    reps, sizes, sigs = [], [], []
    for root in sorted(groups):
        members = groups[root]
        rep = min((tuples[i] for i in members), key=tuple_key)
        reps.append(rep)
        sizes.append(len(members))
        sigs.append(signature(rep, n))
    return OrbitCensus(descriptor, q, len(reps), sizes, reps, sigs, len(tuples))


def census_product(component_spaces, gens, n, q, descriptor="",
                   direct_limit=200_000, budget=None):
    """Census of a product of component chain-spaces under <gens>.

    Small products use the direct union-find; larger ones use the exact
    stabilizer descent.  Orbit sizes multiply along the descent, which is
    exact by orbit-stabilizer.
    """
    total = 1
    for cs in component_spaces:
        total *= len(cs)
    if total <= direct_limit:
        tuples = [()]
        for cs in component_spaces:
            tuples = [t + (c,) for t in tuples for c in cs]
        return census_direct(tuples, gens, n, q, descriptor)
    # fix big components first
    perm = sorted(range(len(component_spaces)),
                  key=lambda i: -max(s.dim for ch in component_spaces[i][:1]
                                     for s in ch))
    spaces = [component_spaces[i] for i in perm]
    level = StabLevel(list(gens), order=group_order(q, n))
    leaves = []
    _descend_census(level, spaces, 0, (), 1, leaves, n, q, budget, depth0=True)
    inv = [perm.index(i) for i in range(len(perm))]
    reps, sizes, sigs = [], [], []
    for rep, size in sorted(leaves, key=lambda t: tuple_key(t[0])):
        rep = tuple(rep[inv[i]] for i in range(len(inv)))
        reps.append(rep)
        sizes.append(size)
        sigs.append(signature(rep, n))
    return OrbitCensus(descriptor, q, len(reps), sizes, reps, sigs, total)


def _descend_census(level, spaces, depth, prefix, size_acc, leaves, n, q,
                    budget, depth0=False):
    if depth == len(spaces):
        leaves.append((prefix, size_acc))
        return
    chains = spaces[depth]
    cache = ActionCache(level.gens)
    remaining = {chain_key(ch): ch for ch in chains}
    last = depth == len(spaces) - 1
    while remaining:
        start = remaining[min(remaining)]
        members, tree = orbit_with_tree(start, level.gens, cache.chain, budget)
        for m in members:
            remaining.pop(chain_key(m), None)
        if last:
            rep = min(members, key=chain_key)
            leaves.append((prefix + (rep,), size_acc * len(members)))
            continue
        rep = None
        if depth0 and level.order == group_order(q, n):
            for m in members:
                if is_standard_chain(m):
                    rep = m
                    break
        if rep is not None:
            sub = StabLevel(standard_chain_stabilizer(rep, n, q),
                            order=level.order // len(members))
        else:
            rep = min(members, key=chain_key)
            sub = level
            for s in rep:
                sub, _, _ = schreier_descend(sub, s, q, 2 * n, budget)
        _descend_census(sub, spaces, depth + 1, prefix + (rep,),
                        size_acc * len(members), leaves, n, q, budget)


def census_space(n, q, comps, gens, isotropic=True, descriptor="",
                 direct_limit=200_000, budget=None):
    """Census of M_{c1} x ... x M_{ck} over GF(q) under <gens>."""
    spaces = [_flags.enumerate_chains(q, n, c, isotropic=isotropic)
              for c in comps]
    desc = descriptor or "n=%d %s" % (n, "|".join(str(c.parts) for c in comps))
    return census_product(spaces, gens, n, q, desc, direct_limit, budget)
