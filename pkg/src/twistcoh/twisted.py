"""Central twisted products, extension equivalence, and twisted 1-cocycles.

The twisted product of G by Gamma along (theta, c) is the set G x Gamma with

    (g1, y1) * (g2, y2) = (c(y1, y2) * g1 * theta_y1(g2), y1 * y2),

which is associative exactly when c satisfies the 2-cocycle identity; the
constructor reports the violating triple otherwise.  Twisted 1-cocycles
rho: Gamma_x -> G satisfy rho(y1 y2) = c(y1,y2) rho(y1) theta_y1(rho(y2));
their classes under rho ~ g^-1 rho theta(g) are the local types attached to
isotropy points.  For SL(n, C) the classes are handled symbolically through
root-of-unity eigenvalue multisets, never through matrix arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (CapacityError, CocycleError, InvalidParameterError,
                     UnsupportedModeError)
from .groups import (FiniteAbelianGroup, FiniteGroup, GroupAction, GroupHom,
                     validate_action)
from .cohomology import Cocycle2, are_cohomologous, is_cocycle2

MAX_TWISTED_ORDER = 512
MAX_COCYCLE_SEARCH = 10 ** 7


def _resolve_center_embed(g_group: FiniteGroup, c: Cocycle2,
                          center_embed: Optional[GroupHom]) -> GroupHom:
    module = c.base.module
    if center_embed is not None:
        if center_embed.source != module or center_embed.target != g_group:
            raise InvalidParameterError("center embedding must map the cocycle module into G")
        return center_embed
    zero = module.zero
    if np.all(c.table == zero):
        # only the identity value is ever used
        return GroupHom(module, g_group, tuple(g_group.identity for _ in range(module.order)))
    if g_group.order == module.order and np.array_equal(g_group.mul, module.add_table()):
        return GroupHom(module, g_group, tuple(range(module.order)))
    raise InvalidParameterError(
        "a nontrivial cocycle into a structure group needs an explicit center embedding")


class TwistedGroup:
    """The twisted product of G by Gamma along (theta, c).

    Elements are indexed as g * |Gamma| + y.  `derived` is the resulting
    FiniteGroup; `projection` maps element indices onto Gamma, and
    `kernel_embed` realizes G as its kernel via g -> (g * c(1,1)^-1, 1).
    """

    def __init__(self, g_group: FiniteGroup, gamma: FiniteGroup,
                 theta: GroupAction, c: Cocycle2,
                 center_embed: Optional[GroupHom] = None,
                 max_order: int = MAX_TWISTED_ORDER):
        if theta.actor != gamma or theta.module != g_group:
            raise InvalidParameterError("theta must be an action of Gamma on G")
        if c.base.actor != gamma:
            raise InvalidParameterError("the cocycle actor must be Gamma")
        n = g_group.order * gamma.order
        if n > max_order:
            raise CapacityError(f"twisted group order {n} exceeds bound {max_order}",
                                bound_name="max_order", bound=max_order, actual=n)
        report = validate_action(theta)
        if not report:
            raise InvalidParameterError(f"theta is not an action: {report.first_violation}")
        embed = _resolve_center_embed(g_group, c, center_embed)
        emb = np.array(embed.map, dtype=np.int64)
        # embedded values must be central and theta must restrict to the module action
        for z in range(c.base.module.order):
            gz = int(emb[z])
            if any(g_group.op(gz, a) != g_group.op(a, gz) for a in range(g_group.order)):
                raise InvalidParameterError(
                    f"cocycle value {z} embeds to non-central element {gz}")
        for y in range(gamma.order):
            for z in range(c.base.module.order):
                if int(theta.act[y, emb[z]]) != int(emb[c.base.act[y, z]]):
                    raise InvalidParameterError(
                        f"center embedding is not theta-equivariant at (gamma={y}, z={z})")
        ok, triple = is_cocycle2(c)
        if not ok:
            raise CocycleError(
                f"multiplication is not associative: the cocycle identity fails "
                f"at triple {triple}", triple=triple)
        self.g_group = g_group
        self.gamma = gamma
        self.theta = theta
        self.c = c
        self.center_embed = embed
        r = gamma.order
        nG = g_group.order
        cg = emb[c.table]  # c values as G elements
        mul = np.zeros((n, n), dtype=np.int64)
        for g1 in range(nG):
            for y1 in range(r):
                left = g1 * r + y1
                # c(y1,y2) * g1 * theta_y1(g2) over all (g2, y2)
                tg2 = theta.act[y1]  # length nG
                part = g_group.mul[g1, tg2]  # g1 * theta_y1(g2), per g2
                for y2 in range(r):
                    vals = g_group.mul[cg[y1, y2], part]  # per g2
                    mul[left, np.arange(nG) * r + y2] = vals * r + gamma.mul[y1, y2]
        e_g = g_group.inv[cg[gamma.identity, gamma.identity]]
        identity = int(e_g) * r + gamma.identity
        labels = [f"({g_group.label(g)}|{gamma.label(y)})"
                  for g in range(nG) for y in range(r)]
        self.derived = FiniteGroup(mul, identity=identity, labels=labels,
                                   name=f"tw({g_group.name},{gamma.name})")
        self.projection = np.arange(n) % r
        kernel_shift = int(e_g)
        self.kernel_embed = np.array(
            [g_group.op(g, kernel_shift) * r + gamma.identity for g in range(nG)],
            dtype=np.int64)
        self._check_exact_sequence()

    def _check_exact_sequence(self):
        n = self.derived.order
        r = self.gamma.order
        proj = self.projection
        mul = self.derived.mul
        # projection is a homomorphism onto Gamma
        for x in range(n):
            if not np.array_equal(proj[mul[x]], self.gamma.mul[proj[x], proj]):
                raise AssertionError("projection failed to be a homomorphism")
        # kernel copy of G is an embedding
        ke = self.kernel_embed
        for a in range(self.g_group.order):
            row = mul[ke[a], ke]
            if not np.array_equal(row, ke[self.g_group.mul[a]]):
                raise AssertionError("kernel embedding failed to be a homomorphism")

    def element(self, g: int, y: int) -> int:
        return g * self.gamma.order + y

    def parts(self, idx: int) -> tuple[int, int]:
        return idx // self.gamma.order, idx % self.gamma.order

    def fiber(self, y: int) -> np.ndarray:
        """All elements projecting onto y."""
        return np.arange(self.g_group.order) * self.gamma.order + y


def build_twisted_group(g_group: FiniteGroup, gamma: FiniteGroup,
                        theta: GroupAction, c: Cocycle2,
                        center_embed: Optional[GroupHom] = None,
                        max_order: int = MAX_TWISTED_ORDER) -> TwistedGroup:
    """Construct the twisted product; fails with the violating triple iff the
    table is not a 2-cocycle."""
    return TwistedGroup(g_group, gamma, theta, c, center_embed, max_order)


@dataclass
class ExtensionIsomorphism:
    mapping: np.ndarray       # element permutation, source index -> target index
    witness: "object"         # the Cochain1 with c2 = c1 + d(witness)


def extension_equivalent(E1: TwistedGroup, E2: TwistedGroup) -> Optional[ExtensionIsomorphism]:
    """An isomorphism over Gamma between two twisted products, if one exists.

    Cohomologous cocycles give the map (g, y) -> (g * f(y)^-1, y); the map is
    verified exhaustively before being returned.  Returns None when the
    cocycle classes differ.
    """
    if E1.g_group != E2.g_group or E1.gamma != E2.gamma \
            or not np.array_equal(E1.theta.act, E2.theta.act):
        raise InvalidParameterError("extensions live over different (G, Gamma, theta)")
    if not np.array_equal(np.array(E1.center_embed.map), np.array(E2.center_embed.map)):
        raise InvalidParameterError("extensions use different center embeddings")
    f = are_cohomologous(E1.c, E2.c)
    if f is None:
        return None
    G, r = E1.g_group, E1.gamma.order
    emb = np.array(E1.center_embed.map, dtype=np.int64)
    mapping = np.zeros(E1.derived.order, dtype=np.int64)
    for g in range(G.order):
        for y in range(r):
            img = G.op(g, G.inv[emb[f.values[y]]])
            mapping[g * r + y] = img * r + y
    # verify: bijective homomorphism commuting with the projections
    if not np.array_equal(np.sort(mapping), np.arange(E1.derived.order)):
        raise AssertionError("equivalence map is not a bijection")
    m1, m2 = E1.derived.mul, E2.derived.mul
    for x in range(E1.derived.order):
        if not np.array_equal(mapping[m1[x]], m2[mapping[x], mapping]):
            raise AssertionError("equivalence map is not a homomorphism")
    if not np.array_equal(E2.projection[mapping], E1.projection):
        raise AssertionError("equivalence map does not commute with the projections")
    return ExtensionIsomorphism(mapping, f)


# -- twisted 1-cocycles -------------------------------------------------------


@dataclass
class TwistedContext:
    """The data (Gamma_x, G, theta, c) a twisted 1-cocycle lives over.

    c_in_g is the cocycle table with values already embedded as (central)
    elements of G.
    """

    gamma: FiniteGroup
    g_group: FiniteGroup
    theta: GroupAction
    c_in_g: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c_in_g, dtype=np.int64)
        r = self.gamma.order
        if arr.shape != (r, r):
            raise InvalidParameterError("embedded cocycle table has wrong shape")
        self.c_in_g = arr
        if self.theta.actor != self.gamma or self.theta.module != self.g_group:
            raise InvalidParameterError("theta must be an action of Gamma_x on G")

    @classmethod
    def from_cocycle(cls, g_group: FiniteGroup, theta: GroupAction, c: Cocycle2,
                     center_embed: Optional[GroupHom] = None) -> "TwistedContext":
        embed = _resolve_center_embed(g_group, c, center_embed)
        emb = np.array(embed.map, dtype=np.int64)
        return cls(c.base.actor, g_group, theta, emb[c.table])


@dataclass(frozen=True)
class TwistedCocycle1:
    """A map rho: Gamma_x -> G satisfying the twisted cocycle condition."""

    context: TwistedContext = field(compare=False)
    values: tuple = ()

    def __call__(self, y: int) -> int:
        return self.values[y]


@dataclass
class LocalTypeClass:
    """One equivalence class of twisted 1-cocycles (a local type)."""

    class_id: int
    mode: str                      # "finite" or "sl"
    representative: tuple          # rho values, or sorted eigenvalue exponents
    orbit_size: Optional[int] = None
    members: Optional[list] = None


def _generating_set(gamma: FiniteGroup) -> list[int]:
    """A small generating set, preferring a single generator."""
    if gamma.order == 1:
        return []
    for g in range(gamma.order):
        if gamma.element_order(g) == gamma.order:
            return [g]
    from .groups import generated_subgroup
    gens: list[int] = []
    covered = 1
    for g in range(gamma.order):
        if g == gamma.identity:
            continue
        size = generated_subgroup(gamma, gens + [g]).group.order
        if size > covered:
            gens.append(g)
            covered = size
            if covered == gamma.order:
                return gens
    raise AssertionError("failed to find a generating set")


def z1_twisted(ctx: TwistedContext, max_search: int = MAX_COCYCLE_SEARCH) -> list[TwistedCocycle1]:
    """All twisted 1-cocycles, enumerated by generator images.

    Images of a generating set determine the map through the cocycle
    relation; each candidate is extended along a fixed spanning order and
    then verified on every pair.  Results are sorted lexicographically.
    """
    gamma, G = ctx.gamma, ctx.g_group
    r = gamma.order
    rho1 = int(G.inv[ctx.c_in_g[gamma.identity, gamma.identity]])
    gens = _generating_set(gamma)
    if not gens:
        return [TwistedCocycle1(ctx, (rho1,))]
    space = G.order ** len(gens)
    if space > max_search:
        raise CapacityError(
            f"{space} candidate generator images exceed bound {max_search}",
            bound_name="max_search", bound=max_search, actual=space)
    # spanning order: BFS by right multiplication with generators
    fill_order = []  # (target, source, generator)
    known = {gamma.identity}
    frontier = [gamma.identity]
    while frontier:
        nxt = []
        for y in frontier:
            for s in gens:
                t = gamma.op(y, s)
                if t not in known:
                    known.add(t)
                    fill_order.append((t, y, s))
                    nxt.append(t)
        frontier = nxt
    out = []
    for images in itertools.product(range(G.order), repeat=len(gens)):
        rho = np.full(r, -1, dtype=np.int64)
        rho[gamma.identity] = rho1
        for s, image in zip(gens, images):
            rho[s] = image
        for t, y, s in fill_order:
            if rho[t] >= 0:
                continue
            val = G.op(int(ctx.c_in_g[y, s]), G.op(int(rho[y]), int(ctx.theta.act[y, rho[s]])))
            rho[t] = val
        if np.any(rho < 0):
            continue
        # verify the relation on all pairs
        ok = True
        for y1 in range(r):
            t1 = ctx.theta.act[y1]
            for y2 in range(r):
                lhs = int(rho[gamma.mul[y1, y2]])
                rhs = G.op(int(ctx.c_in_g[y1, y2]), G.op(int(rho[y1]), int(t1[rho[y2]])))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(int(v) for v in rho))
    out = sorted(set(out))
    return [TwistedCocycle1(ctx, v) for v in out]


def z1_twisted_bruteforce(ctx: TwistedContext, max_search: int = 10 ** 5) -> list[TwistedCocycle1]:
    """Independent oracle: test every map Gamma_x -> G against the relation."""
    gamma, G = ctx.gamma, ctx.g_group
    r = gamma.order
    space = G.order ** r
    if space > max_search:
        raise CapacityError(f"{space} maps exceed brute-force bound {max_search}",
                            bound_name="max_search", bound=max_search, actual=space)
    out = []
    for values in itertools.product(range(G.order), repeat=r):
        ok = True
        for y1 in range(r):
            for y2 in range(r):
                lhs = values[gamma.mul[y1, y2]]
                rhs = G.op(int(ctx.c_in_g[y1, y2]),
                           G.op(values[y1], int(ctx.theta.act[y1, values[y2]])))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(values))
    return [TwistedCocycle1(ctx, v) for v in sorted(out)]


def h1_twisted(ctx: TwistedContext, max_search: int = MAX_COCYCLE_SEARCH,
               keep_members: bool = False) -> list[LocalTypeClass]:
    """Local types: twisted 1-cocycles modulo rho ~ (y -> g^-1 rho(y) theta_y(g)).

    Classes are ordered by their lexicographically least member, which is the
    stored representative; orbit sizes always divide |G|.
    """
    cocycles = z1_twisted(ctx, max_search=max_search)
    gamma, G = ctx.gamma, ctx.g_group
    r = gamma.order
    theta_cols = np.stack([ctx.theta.act[:, g] for g in range(G.order)], axis=1)
    pool = {c.values for c in cocycles}
    classes = []
    while pool:
        seed = min(pool)
        orbit = set()
        for g in range(G.order):
            ginv = G.inv[g]
            moved = tuple(
                int(G.mul[G.mul[ginv, seed[y]], theta_cols[y, g]]) for y in range(r))
            orbit.add(moved)
        if not orbit <= pool:
            raise AssertionError("conjugation left the cocycle set; context is inconsistent")
        pool -= orbit
        classes.append((seed, len(orbit), sorted(orbit)))
    classes.sort(key=lambda t: t[0])
    return [LocalTypeClass(class_id=i, mode="finite", representative=rep,
                           orbit_size=size, members=members if keep_members else None)
            for i, (rep, size, members) in enumerate(classes)]


# -- SL(n, C) local types, symbolically ---------------------------------------


def sl_local_types(n: int, m: int, central_charge: int) -> list[LocalTypeClass]:
    """Local types for SL(n, C) at cyclic isotropy of order m, inner case.

    `central_charge` is t with z = zeta_n^t; solutions of A^m = z^-1 I are
    semisimple with eigenvalues among the m-th roots of zeta_n^-t, so classes
    are exactly the size-n multisets of such roots with product 1.  Roots of
    unity are encoded by their exponent base zeta_{n*m}.
    """
    if n < 1 or m < 1:
        raise InvalidParameterError("rank and isotropy order must be positive")
    t = int(central_charge) % n
    nm = n * m
    allowed = [((n - t) % n + j * n) % nm for j in range(m)]
    out = []
    for combo in itertools.combinations_with_replacement(sorted(allowed), n):
        if sum(combo) % nm == 0:
            out.append(combo)
    out.sort()
    return [LocalTypeClass(class_id=i, mode="sl", representative=combo, orbit_size=None)
            for i, combo in enumerate(out)]


def cocycle_charge(c_in_g_or_cocycle, gamma: Optional[FiniteGroup] = None,
                   generator: int = 1):
    """The central charge of a cocycle along a cyclic group: the product
    c(1,1) * prod_{k=1}^{m-1} c(t, t^k), i.e. rho(t)^m = charge^-1."""
    if isinstance(c_in_g_or_cocycle, Cocycle2):
        c = c_in_g_or_cocycle
        gamma = c.base.actor
        mod = c.base.module
        e = gamma.identity
        acc = mod.tuples[int(c.table[e, e])].copy()
        y = generator if gamma.order > 1 else e
        yk = y
        for _ in range(gamma.order - 1):
            acc += mod.tuples[int(c.table[y, yk])]
            yk = gamma.op(yk, y)
        return int(mod.index_of(acc))
    raise InvalidParameterError("cocycle_charge expects a Cocycle2")
