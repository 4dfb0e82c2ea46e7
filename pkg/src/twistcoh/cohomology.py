"""Twisted group cohomology H^1 and H^2 with finite abelian coefficients.

The module action twists every formula: a 2-cocycle satisfies

    c(g1, g2) + c(g1*g2, g3) = g1.c(g2, g3) + c(g1, g2*g3)

(written additively; g1.x is the action) and the coboundary of f is

    (df)(g1, g2) = f(g1) + g1.f(g2) - f(g1*g2).

H^2 is computed by assembling these as integer congruence systems and
reducing with the mod-m machinery of :mod:`twistcoh.modlinalg`; the module is
first split into its prime-primary parts, which every action preserves.  For
cyclic actors :func:`h2_cyclic_norm` offers the independent fixed-points-
modulo-norms route, used as a cross-check oracle throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapacityError, InvalidParameterError
from .groups import (FiniteAbelianGroup, FiniteGroup, GroupAction, Subgroup,
                     validate_action)
from . import modlinalg as ml

# default capacity bounds for the linear-algebra pipeline
MAX_ACTOR_ORDER = 24
MAX_MODULE_ORDER = 64
MAX_EXHAUSTIVE_COBOUNDARY = 10 ** 6
MAX_NORM_MODULE_ORDER = 4096


# -- cochain values -----------------------------------------------------------


@dataclass(frozen=True)
class Cochain1:
    """A map actor -> module, stored as module element indices."""

    base: GroupAction
    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.base.actor.order:
            raise InvalidParameterError("cochain length must equal actor order")
        if any(not 0 <= v < self.base.module.order for v in vals):
            raise InvalidParameterError("cochain values out of range")

    def __call__(self, g: int) -> int:
        return self.values[g]


class Cocycle2:
    """A table c: actor x actor -> module (not necessarily normalized)."""

    def __init__(self, base: GroupAction, table):
        self.base = base
        arr = np.asarray(table, dtype=np.int64)
        r = base.actor.order
        if arr.shape != (r, r):
            raise InvalidParameterError(f"cocycle table must be {r}x{r}")
        if arr.size and (arr.min() < 0 or arr.max() >= base.module.order):
            raise InvalidParameterError("cocycle entries must be module element indices")
        arr = arr.copy()
        arr.setflags(write=False)
        self.table = arr

    def __call__(self, g1: int, g2: int) -> int:
        return int(self.table[g1, g2])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cocycle2) and self.base == other.base
                and np.array_equal(self.table, other.table))

    def __repr__(self) -> str:
        return f"Cocycle2({self.base.actor.name}, {self.table.tolist()})"

    def tuples_table(self) -> np.ndarray:
        """Table of residue tuples instead of element indices."""
        mod = self.base.module
        return mod.tuples[self.table]


def trivial_cocycle2(action: GroupAction) -> Cocycle2:
    r = action.actor.order
    zero = action.module.zero
    return Cocycle2(action, np.full((r, r), zero, dtype=np.int64))


def cocycle_add(c1: Cocycle2, c2: Cocycle2) -> Cocycle2:
    if c1.base != c2.base:
        raise InvalidParameterError("cocycles live over different actions")
    mod = c1.base.module
    table = mod.index_of_many(
        (mod.tuples[c1.table] + mod.tuples[c2.table]).reshape(-1, mod.k)
    ).reshape(c1.table.shape)
    return Cocycle2(c1.base, table)


def cocycle_neg(c: Cocycle2) -> Cocycle2:
    mod = c.base.module
    table = mod.index_of_many((-mod.tuples[c.table]).reshape(-1, mod.k)).reshape(c.table.shape)
    return Cocycle2(c.base, table)


def is_cocycle2(c: Cocycle2) -> tuple[bool, Optional[tuple]]:
    """Check the twisted 2-cocycle identity on every triple.

    Returns (True, None) or (False, first violating triple (g1, g2, g3)).
    """
    gamma, mod, act = c.base.actor, c.base.module, c.base.act
    r = gamma.order
    t = c.table
    a = np.arange(r)
    g1 = a[:, None, None]
    g2 = a[None, :, None]
    g3 = a[None, None, :]
    p12 = gamma.mul[g1, g2]
    p23 = gamma.mul[g2, g3]
    # lhs: c(g1,g2) + c(g1*g2, g3); rhs: g1.c(g2,g3) + c(g1, g2*g3)
    lhs = mod.tuples[t[g1, g2]] + mod.tuples[t[p12, g3]]
    rhs = mod.tuples[act[g1, t[g2, g3]]] + mod.tuples[t[g1, p23]]
    diff = lhs - rhs
    if mod.k:
        diff = diff % np.array(mod.invariant_factors, dtype=np.int64)
    bad = np.nonzero(np.any(diff, axis=-1)) if mod.k else (np.array([]),)
    if len(bad[0]):
        triple = (int(bad[0][0]), int(bad[1][0]), int(bad[2][0]))
        return False, triple
    return True, None


def coboundary_of(f: Cochain1) -> Cocycle2:
    """df with (df)(g1,g2) = f(g1) + g1.f(g2) - f(g1*g2)."""
    action = f.base
    gamma, mod, act = action.actor, action.module, action.act
    r = gamma.order
    vals = np.array(f.values, dtype=np.int64)
    g1 = np.arange(r)[:, None]
    g2 = np.arange(r)[None, :]
    tup = (mod.tuples[vals[g1]] + mod.tuples[act[g1, vals[g2]]]
           - mod.tuples[vals[gamma.mul[g1, g2]]])
    table = mod.index_of_many(tup.reshape(-1, mod.k)).reshape(r, r)
    return Cocycle2(action, table)


def normalize_cocycle(c: Cocycle2) -> tuple[Cocycle2, Cochain1]:
    """Cohomologous representative with c(1,g) = c(g,1) = 0, plus the witness.

    The returned f is constant equal to -c(1,1); normalized = c + df.
    """
    action = c.base
    mod = action.module
    e = action.actor.identity
    shift = mod.neg(int(c.table[e, e]))
    f = Cochain1(action, tuple(shift for _ in range(action.actor.order)))
    return cocycle_add(c, coboundary_of(f)), f


def restrict_cocycle(c: Cocycle2, sub: Subgroup) -> Cocycle2:
    """Restriction of a cocycle to a subgroup of the actor."""
    sub_action = c.base.restrict(sub)
    idx = sub.to_parent
    return Cocycle2(sub_action, c.table[np.ix_(idx, idx)])


# -- linear-algebra pipeline --------------------------------------------------


def _action_matrices(action: GroupAction) -> np.ndarray:
    """T[g] is the k x k integer matrix of act(g) on the standard generators."""
    mod = action.module
    gens = mod.generator_indices()
    T = np.zeros((action.actor.order, mod.k, mod.k), dtype=np.int64)
    for g in range(action.actor.order):
        for j, gen in enumerate(gens):
            T[g, :, j] = mod.tuples[action.act[g, gen]]
    return T


def _degree2_system(action: GroupAction) -> tuple[np.ndarray, np.ndarray]:
    """Scaled congruence matrix of the cocycle identity and the coboundary
    column matrix, in the flat layout x[(g1*r+g2)*k + j]."""
    gamma, mod = action.actor, action.module
    r, k, m = gamma.order, mod.k, mod.exponent
    d = np.array(mod.invariant_factors, dtype=np.int64)
    scale = m // d  # row scaling per coordinate
    T = _action_matrices(action)
    N2, N3 = r * r * k, r * r * r * k
    A = np.zeros((N3, N2), dtype=np.int64)
    pair = np.arange(r * r)
    bc = pair  # column block for (g2,g3) when rows are (g1,g2,g3)
    for a in range(r):
        row0 = a * r * r * k
        # +g1.c(g2,g3)
        for i in range(k):
            for j in range(k):
                coef = int(T[a, i, j]) * int(scale[i])
                if coef % m:
                    A[row0 + bc * k + i, bc * k + j] += coef
        ab = gamma.mul[a]
        g2 = pair // r
        g3 = pair % r
        p12_3 = ab[g2] * r + g3            # (g1*g2, g3)
        p1_23 = a * r + gamma.mul[g2, g3]  # (g1, g2*g3)
        p12 = a * r + g2                   # (g1, g2)
        for i in range(k):
            s = int(scale[i])
            A[row0 + pair * k + i, p12_3 * k + i] += -s
            A[row0 + pair * k + i, p1_23 * k + i] += s
            A[row0 + pair * k + i, p12 * k + i] += -s
    A %= m
    # coboundary columns: df(g1,g2) = f(g1) + g1.f(g2) - f(g1*g2)
    N1 = r * k
    D1 = np.zeros((N2, N1), dtype=np.int64)
    for a in range(r):
        b = np.arange(r)
        rows = (a * r + b) * k
        for j in range(k):
            D1[rows + j, a * k + j] += 1                      # f(g1)
            D1[rows + j, gamma.mul[a, b] * k + j] += -1        # -f(g1*g2)
        for i in range(k):
            for j in range(k):
                coef = int(T[a, i, j])
                if coef:
                    D1[rows + i, b * k + j] += coef            # g1.f(g2)
    D1 %= m
    return A, D1


def _degree1_system(action: GroupAction) -> tuple[np.ndarray, np.ndarray]:
    """Crossed-homomorphism congruences and principal columns, layout x[g*k+j]."""
    gamma, mod = action.actor, action.module
    r, k, m = gamma.order, mod.k, mod.exponent
    d = np.array(mod.invariant_factors, dtype=np.int64)
    scale = m // d
    T = _action_matrices(action)
    N1 = r * k
    A = np.zeros((r * r * k, N1), dtype=np.int64)
    for a in range(r):
        b = np.arange(r)
        rows = (a * r + b) * k
        for j in range(k):
            s = int(scale[j])
            A[rows + j, np.full(r, a * k + j)] += s            # f(g1)
            A[rows + j, gamma.mul[a, b] * k + j] += -s         # -f(g1*g2)
        for i in range(k):
            s = int(scale[i])
            for j in range(k):
                coef = int(T[a, i, j]) * s
                if coef % m:
                    A[rows + i, b * k + j] += coef             # g1.f(g2)
    A %= m
    D0 = np.zeros((N1, k), dtype=np.int64)
    for g in range(r):
        for j in range(k):
            col = T[g, :, j].copy()
            col[j] -= 1
            D0[g * k: g * k + k, j] = col                      # g.b - b
    D0 %= m
    return A, D0


def _primary_parts(module: FiniteAbelianGroup) -> list[tuple[int, "_PrimaryEmbedding"]]:
    """CRT decomposition of the module into p-primary summands."""
    primes = set()
    for dd in module.invariant_factors:
        x = dd
        p = 2
        while p * p <= x:
            if x % p == 0:
                primes.add(p)
                while x % p == 0:
                    x //= p
            p += 1
        if x > 1:
            primes.add(x)
    out = []
    for p in sorted(primes):
        out.append((p, _PrimaryEmbedding(module, p)))
    return out


class _PrimaryEmbedding:
    """The p-primary summand of a module, with embedding and projection."""

    def __init__(self, module: FiniteAbelianGroup, p: int):
        self.module = module
        self.p = p
        qs, keep = [], []
        for j, dd in enumerate(module.invariant_factors):
            q = 1
            while dd % p == 0:
                q *= p
                dd //= p
            if q > 1:
                qs.append(q)
                keep.append(j)
        self.part = FiniteAbelianGroup(qs)
        self.keep = keep
        d = np.array(module.invariant_factors, dtype=np.int64)
        q = np.ones(module.k, dtype=np.int64)
        for j, qq in zip(keep, qs):
            q[j] = qq
        self.cof = d // q  # embedding multiplier per coordinate
        self.lam = np.array([ml.modinv(int(c % qq), int(qq)) if qq > 1 else 0
                             for c, qq in zip(self.cof, q)], dtype=np.int64)
        self.q = q

    def embed_indices(self, part_indices: np.ndarray) -> np.ndarray:
        """Element indices of the part mapped into the ambient module."""
        tup = np.zeros((len(np.atleast_1d(part_indices)), self.module.k), dtype=np.int64)
        part_tuples = self.part.tuples[np.atleast_1d(part_indices)]
        for out_j, j in enumerate(self.keep):
            tup[:, j] = (part_tuples[:, out_j] * self.cof[j])
        return self.module.index_of_many(tup)

    def project_indices(self, ambient_indices: np.ndarray) -> np.ndarray:
        amb = self.module.tuples[np.atleast_1d(ambient_indices)]
        tup = np.zeros((amb.shape[0], self.part.k), dtype=np.int64)
        for out_j, j in enumerate(self.keep):
            tup[:, out_j] = (amb[:, j] * self.lam[j]) % self.q[j]
        return self.part.index_of_many(tup)

    def sub_action(self, action: GroupAction) -> GroupAction:
        r = action.actor.order
        n = self.part.order
        all_idx = np.arange(n)
        emb = self.embed_indices(all_idx)
        act = np.zeros((r, n), dtype=np.int64)
        for g in range(r):
            act[g] = self.project_indices(action.act[g, emb])
        return GroupAction(action.actor, self.part, act)


class _PrimaryCohomology:
    """Pipeline result for one primary part: factors, reps, classifier."""

    def __init__(self, action: GroupAction, degree: int):
        self.action = action
        mod = action.module
        self.m = mod.exponent
        self.k = mod.k
        r = action.actor.order
        if degree == 2:
            A, D = _degree2_system(action)
            self.positions = r * r
        else:
            A, D = _degree1_system(action)
            self.positions = r
        m = self.m
        N = self.positions * self.k
        d_per_pos = np.tile(np.array(mod.invariant_factors, dtype=np.int64), self.positions)
        lift_cols = np.zeros((N, N), dtype=np.int64)
        np.fill_diagonal(lift_cols, d_per_pos % m)
        keep = np.nonzero(d_per_pos % m)[0]
        lift_cols = lift_cols[:, keep]
        red1 = ml.column_reduce(A, m)
        G = red1.kernel
        self._ker_size = red1.kernel_size()
        M = np.concatenate([D, lift_cols], axis=1) if lift_cols.size else D
        self.M = M
        red2 = ml.column_reduce(G, m, rhs=M, keep_pivots=True)
        if red2.solvable is not None and not bool(np.all(red2.solvable)):
            raise AssertionError("coboundaries failed to lie in the cocycle kernel")
        rel = np.concatenate([red2.kernel, red2.solutions], axis=1)
        diag, U, Uinv = ml.snf_left_mod(rel, m) if G.shape[1] else ([], np.zeros((0, 0)), np.zeros((0, 0)))
        self.G = G
        self._solver = red2
        self.diag = diag
        self.U = U
        self.Uinv = Uinv
        self.keep_rows = [i for i, dd in enumerate(diag) if dd > 1]
        self.factors = [diag[i] for i in self.keep_rows]
        self._d_per_pos = d_per_pos
        self._howell = None

    def rep_vector(self, i: int) -> np.ndarray:
        """Canonical representative vector of the i-th kept generator."""
        row = self.keep_rows[i]
        vec = (self.G @ self.Uinv[:, row]) % self.m
        H, piv = self._coboundary_howell()
        return ml.coset_reduce(H, piv, vec, self.m)

    def _coboundary_howell(self):
        if self._howell is None:
            self._howell = ml.howell_form(self.M.T, self.m)
        return self._howell

    def classify_vector(self, vec: np.ndarray) -> Optional[tuple]:
        w = self._solver.solve(np.asarray(vec, dtype=np.int64) % self.m)
        if w is None:
            return None
        coords = (self.U @ w) % self.m
        return tuple(int(coords[row] % self.diag[row]) for row in self.keep_rows)

    def z_order(self) -> int:
        lift = 1
        for dd in self._d_per_pos:
            lift *= self.m // int(dd)
        return self._ker_size // lift

    def b_order(self) -> int:
        red = ml.column_reduce(self.M, self.m)
        lift = 1
        for dd in self._d_per_pos:
            lift *= self.m // int(dd)
        return red.image_size() // lift


class CohomologyGroup:
    """H^i as an abstract group with representatives and a classifier.

    invariant_factors is the canonical divisor chain (each > 1, ascending
    divisibility); representatives[i] generates the i-th summand; classify
    maps any cocycle to its coordinate tuple, constant exactly on cohomology
    classes.
    """

    def __init__(self, action: GroupAction, degree: int,
                 invariant_factors: Sequence[int],
                 representatives_fn: Callable[[], list],
                 classify_fn: Callable, meta: Optional[dict] = None):
        self.action = action
        self.degree = degree
        self.invariant_factors = [int(d) for d in invariant_factors]
        self._reps_fn = representatives_fn
        self._classify_fn = classify_fn
        self._reps = None
        self.meta = meta or {}

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def representatives(self) -> list:
        if self._reps is None:
            self._reps = self._reps_fn()
        return self._reps

    def classify(self, cocycle) -> tuple:
        return self._classify_fn(cocycle)

    def class_cocycle(self, coords: Sequence[int]) -> Cocycle2:
        """A representative cocycle of the class with the given coordinates."""
        if self.degree != 2:
            raise InvalidParameterError("class_cocycle only supported in degree 2")
        coords = [int(t) for t in coords]
        if len(coords) != len(self.invariant_factors):
            raise InvalidParameterError("coordinate tuple has wrong length")
        acc = trivial_cocycle2(self.action)
        for t, d, rep in zip(coords, self.invariant_factors, self.representatives):
            for _ in range(t % d):
                acc = cocycle_add(acc, rep)
        return acc

    def __repr__(self) -> str:
        if not self.invariant_factors:
            return "CohomologyGroup(trivial)"
        inside = " x ".join(f"Z/{d}" for d in self.invariant_factors)
        return f"CohomologyGroup({inside})"


def _merge_primary(parts: list[tuple[int, "_PrimaryEmbedding", _PrimaryCohomology]]):
    """Merge per-prime invariant factors into one canonical divisor chain.

    Returns (chain, slots) where slots[t] lists (prime_index, local_index,
    prime_power) contributing to chain factor t.
    """
    per_prime = []
    for pi, (p, _, coh) in enumerate(parts):
        facs = sorted(coh.factors, reverse=True)  # largest power first
        per_prime.append((pi, facs))
    depth = max((len(f) for _, f in per_prime), default=0)
    chain = []
    slots = []
    for t in range(depth):
        factor = 1
        contrib = []
        for pi, facs in per_prime:
            if t < len(facs):
                factor *= facs[t]
                # local index: factors list of _PrimaryCohomology is ascending
                local = len(facs) - 1 - t
                contrib.append((pi, local, facs[t]))
        chain.append(factor)
        slots.append(contrib)
    # ascending divisibility chain
    chain.reverse()
    slots.reverse()
    return chain, slots


def _cohomology_via_pipeline(action: GroupAction, degree: int,
                             max_actor: int, max_module: int) -> CohomologyGroup:
    gamma, mod = action.actor, action.module
    if not isinstance(mod, FiniteAbelianGroup):
        raise InvalidParameterError("cohomology needs a finite abelian module")
    if gamma.order > max_actor:
        raise CapacityError(
            f"actor order {gamma.order} exceeds bound {max_actor}",
            bound_name="max_actor", bound=max_actor, actual=gamma.order)
    if mod.order > max_module:
        raise CapacityError(
            f"module order {mod.order} exceeds bound {max_module}",
            bound_name="max_module", bound=max_module, actual=mod.order)
    report = validate_action(action)
    if not report:
        raise InvalidParameterError(f"invalid action: {report.first_violation}")

    if mod.order == 1:
        def reps_trivial():
            return []

        def classify_trivial(c):
            return ()
        return CohomologyGroup(action, degree, [], reps_trivial, classify_trivial)

    parts = []
    for p, emb in _primary_parts(mod):
        sub = emb.sub_action(action)
        parts.append((p, emb, _PrimaryCohomology(sub, degree)))
    chain, slots = _merge_primary(parts)

    def vec_to_value(emb: _PrimaryEmbedding, vec: np.ndarray, positions: int):
        """Part-layout vector -> ambient module element indices per position."""
        part = emb.part
        tuples = vec.reshape(positions, part.k)
        part_idx = part.index_of_many(tuples)
        return emb.embed_indices(part_idx)

    def build_reps():
        reps = []
        r = gamma.order
        for contrib in slots:
            if degree == 2:
                acc = trivial_cocycle2(action)
                for pi, local, _ in contrib:
                    p, emb, coh = parts[pi]
                    vec = coh.rep_vector(local)
                    vals = vec_to_value(emb, vec, r * r).reshape(r, r)
                    acc = cocycle_add(acc, Cocycle2(action, vals))
                reps.append(acc)
            else:
                total = np.zeros(r, dtype=np.int64)
                acc_tuples = np.zeros((r, mod.k), dtype=np.int64)
                for pi, local, _ in contrib:
                    p, emb, coh = parts[pi]
                    vec = coh.rep_vector(local)
                    vals = vec_to_value(emb, vec, r)
                    acc_tuples += mod.tuples[vals]
                total = mod.index_of_many(acc_tuples)
                reps.append(Cochain1(action, tuple(int(v) for v in total)))
        return reps

    def classify(cocycle):
        if degree == 2:
            if not isinstance(cocycle, Cocycle2) or cocycle.base != action:
                raise InvalidParameterError("classify expects a cocycle over the same action")
            ok, triple = is_cocycle2(cocycle)
            if not ok:
                raise InvalidParameterError(f"not a cocycle; fails at triple {triple}")
            values = cocycle.table.reshape(-1)
            positions = gamma.order * gamma.order
        else:
            if not isinstance(cocycle, Cochain1) or cocycle.base != action:
                raise InvalidParameterError("classify expects a cochain over the same action")
            values = np.array(cocycle.values, dtype=np.int64)
            positions = gamma.order
        local_coords = []
        for p, emb, coh in parts:
            part_idx = emb.project_indices(values)
            vec = coh.action.module.tuples[part_idx].reshape(-1)
            got = coh.classify_vector(vec)
            if got is None:
                raise InvalidParameterError("value table is not a cocycle for this action")
            local_coords.append(got)
        out = []
        for factor, contrib in zip(chain, slots):
            residues = [(int(local_coords[pi][local]), power)
                        for pi, local, power in contrib]
            x, mcur = 0, 1
            for val, power in residues:
                g, s, t = ml.exgcd(mcur, power)
                x = (x * t * power + val * s * mcur) % (mcur * power)
                mcur *= power
            out.append(int(x % factor))
        return tuple(out)

    meta = {
        "z_order": math.prod(c.z_order() for _, _, c in parts) if parts else 1,
    }
    return CohomologyGroup(action, degree, chain, build_reps, classify, meta)


def h2(action: GroupAction, max_actor: int = MAX_ACTOR_ORDER,
       max_module: int = MAX_MODULE_ORDER) -> CohomologyGroup:
    """Second twisted cohomology of the actor with module coefficients."""
    return _cohomology_via_pipeline(action, 2, max_actor, max_module)


def h1(action: GroupAction, max_actor: int = MAX_ACTOR_ORDER,
       max_module: int = MAX_MODULE_ORDER) -> CohomologyGroup:
    """First twisted cohomology: crossed homomorphisms modulo principal ones."""
    return _cohomology_via_pipeline(action, 1, max_actor, max_module)


# -- cohomologous witnesses ---------------------------------------------------


def are_cohomologous(c1: Cocycle2, c2: Cocycle2,
                     max_exhaustive: int = MAX_EXHAUSTIVE_COBOUNDARY,
                     max_actor: int = MAX_ACTOR_ORDER,
                     max_module: int = MAX_MODULE_ORDER) -> Optional[Cochain1]:
    """A cochain f with c2 = c1 + df, or None if the classes differ.

    Small search spaces are enumerated exhaustively (the first witness in
    lexicographic table order is returned); larger ones fall back to the
    integer linear system.
    """
    if c1.base != c2.base:
        raise InvalidParameterError("cocycles live over different actions")
    action = c1.base
    gamma, mod = action.actor, action.module
    diff = cocycle_add(c2, cocycle_neg(c1))
    r, n = gamma.order, mod.order
    space = n ** r
    if space <= max_exhaustive:
        f = _exhaustive_coboundary_witness(diff)
        return f
    if gamma.order > max_actor or mod.order > max_module:
        raise CapacityError(
            f"witness search space {space} exceeds the exhaustive bound and "
            f"the linear solver bounds (actor {max_actor}, module {max_module})",
            bound_name="max_exhaustive", bound=max_exhaustive, actual=space)
    return _linear_coboundary_witness(diff)


def _exhaustive_coboundary_witness(diff: Cocycle2) -> Optional[Cochain1]:
    action = diff.base
    gamma, mod, act = action.actor, action.module, action.act
    r, n = gamma.order, mod.order
    add = mod.add_table()
    neg = mod.index_of_many(-mod.tuples)
    count = n ** r
    cands = np.arange(count)
    digits = np.zeros((count, r), dtype=np.int64)
    tmp = cands.copy()
    for g in range(r - 1, -1, -1):
        digits[:, g] = tmp % n
        tmp //= n
    good = np.ones(count, dtype=bool)
    for g1 in range(r):
        for g2 in range(r):
            target = int(diff.table[g1, g2])
            vals = add[digits[:, g1], act[g1, digits[:, g2]]]
            vals = add[vals, neg[digits[:, gamma.mul[g1, g2]]]]
            good &= vals == target
        if not good.any():
            return None
    hits = np.nonzero(good)[0]
    if not len(hits):
        return None
    return Cochain1(action, tuple(int(x) for x in digits[hits[0]]))


def _linear_coboundary_witness(diff: Cocycle2) -> Optional[Cochain1]:
    action = diff.base
    gamma, mod = action.actor, action.module
    m = mod.exponent
    parts = _primary_parts(mod)
    r = gamma.order
    f_tuples = np.zeros((r, mod.k), dtype=np.int64)
    for p, emb in parts:
        sub = emb.sub_action(action)
        A2, D1 = _degree2_system(sub)
        part = emb.part
        mp = part.exponent
        N = r * r * part.k
        d_per_pos = np.tile(np.array(part.invariant_factors, dtype=np.int64), r * r)
        lift = np.zeros((N, N), dtype=np.int64)
        np.fill_diagonal(lift, d_per_pos % mp)
        keep = np.nonzero(d_per_pos % mp)[0]
        lift = lift[:, keep]
        part_idx = emb.project_indices(diff.table.reshape(-1))
        target = part.tuples[part_idx].reshape(-1)
        sol = ml.solve_mod(np.concatenate([D1, lift], axis=1), target, mp)
        if sol is None:
            return None
        fvec = sol[:D1.shape[1]].reshape(r, part.k) % np.array(part.invariant_factors)
        part_elem = part.index_of_many(fvec)
        amb = emb.embed_indices(part_elem)
        f_tuples += mod.tuples[amb]
    f_idx = mod.index_of_many(f_tuples)
    f = Cochain1(action, tuple(int(x) for x in f_idx))
    if coboundary_of(f) != diff:
        raise AssertionError("per-part witnesses failed to assemble; solver bug")
    return f


# -- cyclic norm route --------------------------------------------------------


def _find_generator(gamma: FiniteGroup) -> Optional[int]:
    if gamma.order == 1:
        return gamma.identity
    for g in range(gamma.order):
        if gamma.element_order(g) == gamma.order:
            return g
    return None


def h2_cyclic_norm(action: GroupAction,
                   max_module: int = MAX_NORM_MODULE_ORDER) -> CohomologyGroup:
    """H^2 for a cyclic actor via fixed points modulo norms.

    Computes A^Gamma / N.A by direct element enumeration; the group structure
    is recovered from element orders alone, so this route shares nothing with
    the Smith-normal-form pipeline and serves as its oracle.
    """
    gamma, mod = action.actor, action.module
    if not isinstance(mod, FiniteAbelianGroup):
        raise InvalidParameterError("norm route needs a finite abelian module")
    if mod.order > max_module:
        raise CapacityError(f"module order {mod.order} exceeds bound {max_module}",
                            bound_name="max_module", bound=max_module, actual=mod.order)
    gen = _find_generator(gamma)
    if gen is None:
        raise InvalidParameterError("actor is not cyclic")
    report = validate_action(action)
    if not report:
        raise InvalidParameterError(f"invalid action: {report.first_violation}")
    r = gamma.order
    n = mod.order
    # powers of the generator automorphism
    perm = action.act[gen]
    power_perms = [np.arange(n)]
    for _ in range(r - 1):
        power_perms.append(perm[power_perms[-1]])
    fixed = [x for x in range(n) if int(perm[x]) == x] if r > 1 else list(range(n))
    norm_tuples = np.zeros((n, mod.k), dtype=np.int64)
    for pp in power_perms:
        norm_tuples += mod.tuples[pp]
    norm_img = sorted(set(int(i) for i in mod.index_of_many(norm_tuples)))
    fixed_set = set(fixed)
    if not set(norm_img) <= fixed_set:
        raise AssertionError("norm image must consist of fixed points")
    # cosets of N.A inside A^Gamma, labeled by least member
    coset_of = {}
    reps = []
    for x in sorted(fixed_set):
        if x in coset_of:
            continue
        members = sorted(mod.add(x, y) for y in norm_img)
        for mbr in members:
            coset_of[mbr] = len(reps)
        reps.append(members[0])
    q = len(reps)

    def coset_add(i, j):
        return coset_of[mod.add(reps[i], reps[j])]

    # greedy decomposition by maximal element order
    def coset_order(i):
        k, acc = 1, i
        zero = coset_of[mod.zero]
        while acc != zero:
            acc = coset_add(acc, i)
            k += 1
        return k

    zero = coset_of[mod.zero]
    remaining = set(range(q))
    chosen = []  # (coset index, order)
    span = {zero}
    while len(span) < q:
        best, best_ord = None, 0
        for i in sorted(remaining):
            # order of i in the quotient by current span: smallest k with k*i in span
            acc, k = i, 1
            while acc not in span:
                acc = coset_add(acc, i)
                k += 1
            if k > best_ord:
                best, best_ord = i, k
        chosen.append((best, best_ord))
        new_span = set()
        for s in span:
            acc = s
            for _ in range(coset_order(best)):
                new_span.add(acc)
                acc = coset_add(acc, best)
        span = new_span
        remaining -= span
    chosen.sort(key=lambda t: t[1])  # ascending orders for the chain
    factors = [o for _, o in chosen]
    gen_elems = [reps[i] for i, _ in chosen]

    def carry_cocycle(a_elem: int) -> Cocycle2:
        """c(t^i, t^j) = a when i + j >= r, else 0 (over generator exponents)."""
        exps = {}
        g, e = gamma.identity, 0
        for _ in range(r):
            exps[g] = e
            g, e = gamma.op(g, gen), e + 1
        table = np.full((r, r), mod.zero, dtype=np.int64)
        for g1 in range(r):
            for g2 in range(r):
                if exps[g1] + exps[g2] >= r:
                    table[g1, g2] = a_elem
        c = Cocycle2(action, table)
        ok, triple = is_cocycle2(c)
        if not ok:
            raise AssertionError(f"norm-route representative fails the cocycle law at {triple}")
        return c

    def build_reps():
        return [carry_cocycle(a) for a in gen_elems]

    def classify(cocycle):
        if not isinstance(cocycle, Cocycle2) or cocycle.base != action:
            raise InvalidParameterError("classify expects a cocycle over the same action")
        ok, triple = is_cocycle2(cocycle)
        if not ok:
            raise InvalidParameterError(f"not a cocycle; fails at triple {triple}")
        # transgression to A: sum of c(t^i, t) over i
        acc = np.zeros(mod.k, dtype=np.int64)
        g = gamma.identity
        for _ in range(r):
            acc += mod.tuples[int(cocycle.table[g, gen])]
            g = gamma.op(g, gen)
        lam = mod.index_of(acc)
        if lam not in coset_of:
            raise AssertionError("transgression landed outside the fixed subgroup")
        target = coset_of[lam]
        # brute-force coordinates in the small quotient
        import itertools as _it
        for combo in _it.product(*[range(o) for o in factors]):
            acc_c = zero
            for t, (i, o) in zip(combo, chosen):
                for _ in range(t):
                    acc_c = coset_add(acc_c, i)
            if acc_c == target:
                return tuple(combo)
        raise AssertionError("quotient coordinates not found")

    meta = {
        "fixed_subgroup": fixed,
        "norm_image": norm_img,
        "coset_representatives": reps,
        "generator": gen,
    }
    return CohomologyGroup(action, 2, factors, build_reps, classify, meta)
