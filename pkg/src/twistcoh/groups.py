"""Finite groups by multiplication table, finite abelian groups, homomorphisms
and actions.

Every group element is an index 0..order-1; all structure is carried by
explicit integer tables, so every downstream computation is exact.  Tables are
numpy int64 arrays throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import InvalidParameterError

# Exhaustive associativity checking up to this order; sampled above.
EXHAUSTIVE_ASSOC_LIMIT = 256


def _as_table(mul, order: int) -> np.ndarray:
    table = np.asarray(mul, dtype=np.int64)
    if table.shape != (order, order):
        raise InvalidParameterError(
            f"multiplication table has shape {table.shape}, expected {(order, order)}"
        )
    if table.size and (table.min() < 0 or table.max() >= order):
        raise InvalidParameterError("table entries must be element indices")
    return table


class FiniteGroup:
    """A finite group presented by its full multiplication table.

    Invariants checked on construction: the table is a Latin square, the
    claimed identity is two-sided, every element has a two-sided inverse, and
    the product is associative (exhaustively up to order 256, on 10*order**2
    seeded random triples above that).
    """

    def __init__(self, mul, identity: int = 0, labels: Optional[Sequence[str]] = None,
                 name: Optional[str] = None, _skip_assoc: bool = False):
        mul = np.asarray(mul, dtype=np.int64)
        self.order = int(mul.shape[0]) if mul.ndim == 2 else 0
        if self.order < 1:
            raise InvalidParameterError("a group has at least one element")
        self.mul = _as_table(mul, self.order)
        self.identity = int(identity)
        if not (0 <= self.identity < self.order):
            raise InvalidParameterError("identity index out of range")
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.order:
            raise InvalidParameterError("labels length must equal order")
        self.name = name or f"group{self.order}"
        self._validate(skip_assoc=_skip_assoc)
        self.inv = self._compute_inverses()
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        self._orders: Optional[np.ndarray] = None

    # -- validation ---------------------------------------------------------

    def _validate(self, skip_assoc: bool = False) -> None:
        n, mul, e = self.order, self.mul, self.identity
        ref = np.arange(n)
        if not (np.array_equal(np.sort(mul, axis=1), np.tile(ref, (n, 1)))
                and np.array_equal(np.sort(mul, axis=0), np.tile(ref[:, None], (1, n)))):
            raise InvalidParameterError("table is not a Latin square")
        if not (np.array_equal(mul[e], ref) and np.array_equal(mul[:, e], ref)):
            raise InvalidParameterError(f"element {e} is not a two-sided identity")
        if skip_assoc:
            return
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            # (a*b)*c == a*(b*c) for all triples, chunked over a.
            chunk = max(1, (1 << 22) // (n * n))
            for a0 in range(0, n, chunk):
                a = np.arange(a0, min(a0 + chunk, n))
                left = mul[mul[a][:, :, None], np.arange(n)[None, None, :]]
                right = mul[a[:, None, None], mul[None, :, :]]
                if not np.array_equal(left, right):
                    bad = np.argwhere(left != right)[0]
                    t = (int(a[bad[0]]), int(bad[1]), int(bad[2]))
                    raise InvalidParameterError(f"associativity fails at triple {t}")
        else:
            rng = np.random.default_rng(0)
            t = rng.integers(0, n, size=(10 * n * n, 3))
            left = mul[mul[t[:, 0], t[:, 1]], t[:, 2]]
            right = mul[t[:, 0], mul[t[:, 1], t[:, 2]]]
            if not np.array_equal(left, right):
                bad = int(np.argmax(left != right))
                raise InvalidParameterError(
                    f"associativity fails at sampled triple {tuple(int(x) for x in t[bad])}"
                )

    def _compute_inverses(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == self.identity)
        inv[rows] = cols
        for a in range(self.order):
            b = inv[a]
            if b < 0 or self.mul[b, a] != self.identity:
                raise InvalidParameterError(f"element {a} has no two-sided inverse")
        return inv

    # -- basic queries ------------------------------------------------------

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse(a), -k)
        acc = self.identity
        for _ in range(k):
            acc = int(self.mul[acc, a])
        return acc

    def element_order(self, a: int) -> int:
        k, acc = 1, a
        while acc != self.identity:
            acc = int(self.mul[acc, a])
            k += 1
        return k

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = np.array([self.element_order(a) for a in range(self.order)])
            self._orders.setflags(write=False)
        return self._orders

    def exponent(self) -> int:
        return int(math.lcm(*[int(o) for o in self.element_orders()])) if self.order else 1

    def is_abelian(self) -> bool:
        return np.array_equal(self.mul, self.mul.T)

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def conjugate(self, g: int, a: int) -> int:
        """g * a * g^-1."""
        return int(self.mul[self.mul[g, a], self.inv[g]])

    def word(self, letters: Iterable[tuple[int, int]]) -> int:
        """Evaluate a word given as (element, exponent) pairs."""
        acc = self.identity
        for g, e in letters:
            acc = self.op(acc, self.power(g, e))
        return acc

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteGroup) and self.order == other.order
                and self.identity == other.identity and np.array_equal(self.mul, other.mul))

    def __hash__(self):
        return hash((self.order, self.identity, self.mul.tobytes()))


class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form d1 | d2 | ... | dk.

    Elements are k-tuples of residues, addressed by their mixed-radix index
    (last coordinate varies fastest).  The empty factor list is the trivial
    group with one element.
    """

    def __init__(self, invariant_factors: Sequence[int]):
        factors = [int(d) for d in invariant_factors]
        if any(d < 2 for d in factors):
            raise InvalidParameterError("invariant factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise InvalidParameterError(
                    f"invariant factors must form a divisibility chain, got {factors}")
        self.invariant_factors = tuple(factors)
        self.k = len(factors)
        self.order = math.prod(factors) if factors else 1
        self.exponent = factors[-1] if factors else 1
        # tuples[i] is the residue tuple of element i
        if self.k:
            grids = np.meshgrid(*[np.arange(d) for d in factors], indexing="ij")
            self.tuples = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        else:
            self.tuples = np.zeros((1, 0), dtype=np.int64)
        self.tuples.setflags(write=False)
        self._radix = np.array(
            [math.prod(factors[i + 1:]) for i in range(self.k)], dtype=np.int64)
        self.zero = 0

    def index_of(self, tup: Sequence[int]) -> int:
        t = np.asarray(tup, dtype=np.int64) % np.array(self.invariant_factors, dtype=np.int64) \
            if self.k else np.zeros(0, dtype=np.int64)
        return int(t @ self._radix) if self.k else 0

    def index_of_many(self, tups: np.ndarray) -> np.ndarray:
        if not self.k:
            return np.zeros(len(tups), dtype=np.int64)
        t = np.asarray(tups, dtype=np.int64) % np.array(self.invariant_factors)
        return t @ self._radix

    def add(self, i: int, j: int) -> int:
        return self.index_of(self.tuples[i] + self.tuples[j])

    def neg(self, i: int) -> int:
        return self.index_of(-self.tuples[i])

    def add_table(self) -> np.ndarray:
        s = self.tuples[:, None, :] + self.tuples[None, :, :]
        return self.index_of_many(s.reshape(-1, self.k)).reshape(self.order, self.order)

    def element_order(self, i: int) -> int:
        t = self.tuples[i]
        return int(math.lcm(*[d // math.gcd(d, int(x))
                              for d, x in zip(self.invariant_factors, t)])) if self.k else 1

    def generator_indices(self) -> list[int]:
        """Indices of the standard generators e_1..e_k."""
        eye = np.eye(self.k, dtype=np.int64)
        return [self.index_of(eye[j]) for j in range(self.k)]

    def as_finite_group(self) -> FiniteGroup:
        labels = ["(" + ",".join(str(int(x)) for x in t) + ")" for t in self.tuples]
        return FiniteGroup(self.add_table(), identity=0, labels=labels,
                           name="x".join(f"Z{d}" for d in self.invariant_factors) or "Z1",
                           _skip_assoc=True)

    def __repr__(self) -> str:
        inside = " x ".join(f"Z/{d}" for d in self.invariant_factors) or "0"
        return f"FiniteAbelianGroup({inside})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteAbelianGroup)
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self):
        return hash(self.invariant_factors)


GroupLike = Union[FiniteGroup, FiniteAbelianGroup]


def _module_op(module: GroupLike):
    if isinstance(module, FiniteAbelianGroup):
        return module.add
    return module.op


def _module_identity(module: GroupLike) -> int:
    return module.zero if isinstance(module, FiniteAbelianGroup) else module.identity


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its value table on source element indices."""

    source: GroupLike
    target: GroupLike
    map: tuple

    def __post_init__(self):
        table = tuple(int(x) for x in self.map)
        object.__setattr__(self, "map", table)
        if len(table) != self.source.order:
            raise InvalidParameterError("hom table length must equal source order")
        if any(not (0 <= x < self.target.order) for x in table):
            raise InvalidParameterError("hom table values out of range")
        sop = _module_op(self.source)
        top = _module_op(self.target)
        if table[_module_identity(self.source)] != _module_identity(self.target):
            raise InvalidParameterError("hom does not preserve the identity")
        for a in range(self.source.order):
            for b in range(self.source.order):
                if table[sop(a, b)] != top(table[a], table[b]):
                    raise InvalidParameterError(
                        f"not a homomorphism: fails at pair ({a}, {b})")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self o other (apply other first)."""
        if other.target is not self.source and other.target != self.source:
            raise InvalidParameterError("homs are not composable")
        return GroupHom(other.source, self.target,
                        tuple(self.map[x] for x in other.map))


def trivial_hom(source: GroupLike, target: GroupLike) -> GroupHom:
    return GroupHom(source, target,
                    tuple(_module_identity(target) for _ in range(source.order)))


@dataclass(frozen=True)
class GroupAction:
    """An action of `actor` on `module` through automorphisms.

    `act[g, m]` is the image of module element m under actor element g.
    Use :func:`validate_action` to check the axioms; the constructor only
    verifies shapes so that deliberately broken tables can be inspected.
    """

    actor: FiniteGroup
    module: GroupLike
    act: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.act, dtype=np.int64)
        if table.shape != (self.actor.order, self.module.order):
            raise InvalidParameterError(
                f"action table has shape {table.shape}, expected "
                f"{(self.actor.order, self.module.order)}")
        if table.size and (table.min() < 0 or table.max() >= self.module.order):
            raise InvalidParameterError("action table values out of range")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "act", table)

    def __call__(self, g: int, m: int) -> int:
        return int(self.act[g, m])

    def apply_many(self, g: int, ms: np.ndarray) -> np.ndarray:
        return self.act[g, ms]

    def is_trivial(self) -> bool:
        return all(np.array_equal(self.act[g], np.arange(self.module.order))
                   for g in range(self.actor.order))

    def restrict(self, sub: "Subgroup") -> "GroupAction":
        """Restriction along a subgroup embedding of the actor."""
        return GroupAction(sub.group, self.module, self.act[sub.to_parent])


@dataclass
class ActionReport:
    valid: bool
    violations: list = field(default_factory=list)

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.valid


def validate_action(action: GroupAction, max_violations: int = 16) -> ActionReport:
    """Check that an action table really is an action by automorphisms.

    Violations are reported, not raised: each is a (kind, data, message)
    tuple naming the offending actor element or triple.
    """
    violations = []

    def record(kind, data, message):
        if len(violations) < max_violations:
            violations.append((kind, data, message))

    gamma, module, act = action.actor, action.module, action.act
    n = module.order
    ref = np.arange(n)
    op = _module_op(module)
    if not np.array_equal(act[gamma.identity], ref):
        record("identity", gamma.identity, "identity of the actor does not act trivially")
    for g in range(gamma.order):
        row = act[g]
        if not np.array_equal(np.sort(row), ref):
            record("bijectivity", g, f"actor element {g} does not act bijectively")
            continue
        ok = True
        for a in range(n):
            if not ok:
                break
            for b in range(n):
                if int(row[op(a, b)]) != op(int(row[a]), int(row[b])):
                    record("automorphism", (g, a, b),
                           f"actor element {g} is not an automorphism at pair ({a}, {b})")
                    ok = False
                    break
    # act(g1*g2) == act(g1) o act(g2)
    for g1 in range(gamma.order):
        for g2 in range(gamma.order):
            composed = act[g1][act[g2]]
            if not np.array_equal(act[gamma.op(g1, g2)], composed):
                m = int(np.argmax(act[gamma.op(g1, g2)] != composed))
                record("composition", (g1, g2, m),
                       f"act({g1}*{g2}) differs from act({g1})oact({g2}) at module element {m}")
    return ActionReport(valid=not violations, violations=violations)


# -- constructors -----------------------------------------------------------


def build_cyclic(n: int) -> FiniteGroup:
    """Z/nZ with generator at index 1 (for n > 1); addition mod n."""
    if n < 1:
        raise InvalidParameterError("cyclic group order must be >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, identity=0,
                       labels=[str(i) for i in range(n)], name=f"Z{n}",
                       _skip_assoc=True)


def build_symmetric(n: int) -> FiniteGroup:
    """Symmetric group on n letters, 1 <= n <= 6.

    Elements are the permutations of 0..n-1 in lexicographic one-line order;
    the product p*q acts by q first, then p: (p*q)(i) = p(q(i)).
    """
    if not 1 <= n <= 6:
        raise InvalidParameterError("build_symmetric supports 1 <= n <= 6")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    mul = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[t]] for t in range(n))]
    labels = ["".join(str(t) for t in p) for p in perms]
    return FiniteGroup(mul, identity=0, labels=labels, name=f"S{n}",
                       _skip_assoc=(order > 24))


def trivial_action(actor: FiniteGroup, module: GroupLike) -> GroupAction:
    act = np.tile(np.arange(module.order), (actor.order, 1))
    return GroupAction(actor, module, act)


def cyclic_action(actor: FiniteGroup, module: GroupLike, gen_image: np.ndarray,
                  generator: int = 1) -> GroupAction:
    """Action of a cyclic actor determined by the permutation of the module
    induced by the designated generator."""
    phi = np.asarray(gen_image, dtype=np.int64)
    n = actor.order
    act = np.zeros((n, module.order), dtype=np.int64)
    act[actor.identity] = np.arange(module.order)
    g, cur = generator if n > 1 else actor.identity, phi
    if n > 1:
        while g != actor.identity:
            act[g] = cur
            g = actor.op(g, generator)
            cur = phi[cur]
    action = GroupAction(actor, module, act)
    report = validate_action(action)
    if not report:
        raise InvalidParameterError(
            f"generator image does not define an action: {report.first_violation}")
    return action


def inversion_action(actor: FiniteGroup, module: FiniteAbelianGroup,
                     parity: Optional[Sequence[int]] = None) -> GroupAction:
    """Action where designated actor elements send x to -x.

    With `parity` omitted and a cyclic actor of even order, the generator
    inverts; otherwise pass parity (0/1 per actor element) explicitly.
    """
    negs = module.index_of_many(-module.tuples)
    if parity is None:
        if actor.order % 2:
            raise InvalidParameterError("default inversion parity needs an even-order actor")
        # generator at index 1 inverts; its powers alternate
        parity = [(k % 2) for k in _cyclic_exponents(actor)]
    act = np.stack([negs if p else np.arange(module.order) for p in parity])
    action = GroupAction(actor, module, act)
    report = validate_action(action)
    if not report:
        raise InvalidParameterError(f"inversion parity is inconsistent: {report.first_violation}")
    return action


def _cyclic_exponents(group: FiniteGroup) -> list[int]:
    """Express each element of a cyclic group as a power of the generator at index 1."""
    exps = [-1] * group.order
    g, k = group.identity, 0
    for _ in range(group.order):
        exps[g] = k
        g, k = group.op(g, 1 if group.order > 1 else 0), k + 1
    if any(e < 0 for e in exps):
        raise InvalidParameterError("element 1 does not generate the group")
    return exps


def action_through_hom(hom: GroupHom, base: GroupAction) -> GroupAction:
    """Pull an action back along a homomorphism into its actor."""
    if base.actor != hom.target:
        raise InvalidParameterError("hom target must be the actor of the base action")
    if not isinstance(hom.source, FiniteGroup):
        raise InvalidParameterError("actor of the composed action must be a FiniteGroup")
    act = base.act[np.asarray(hom.map, dtype=np.int64)]
    return GroupAction(hom.source, base.module, act)


def action_from_matrix(actor: FiniteGroup, module: FiniteAbelianGroup,
                       matrix: np.ndarray, generator: int = 1) -> GroupAction:
    """Cyclic action whose generator acts by an integer matrix on residue tuples."""
    mat = np.asarray(matrix, dtype=np.int64)
    images = module.index_of_many(module.tuples @ mat.T)
    return cyclic_action(actor, module, images, generator=generator)


# -- structure queries ------------------------------------------------------


def conjugacy_classes(group: FiniteGroup) -> list[list[int]]:
    """Partition of the element set into conjugation orbits.

    Classes are sorted by their least element, each class sorted ascending.
    """
    seen = np.zeros(group.order, dtype=bool)
    classes = []
    for a in range(group.order):
        if seen[a]:
            continue
        orbit = group.mul[np.arange(group.order), a]
        orbit = group.mul[orbit, group.inv[np.arange(group.order)]]
        members = sorted(set(int(x) for x in orbit))
        for m in members:
            seen[m] = True
        classes.append(members)
    return classes


@dataclass(frozen=True)
class Subgroup:
    """A subgroup realized as its own FiniteGroup plus the embedding."""

    group: FiniteGroup
    parent: FiniteGroup
    to_parent: np.ndarray

    def from_parent(self, a: int) -> int:
        hits = np.nonzero(self.to_parent == a)[0]
        if not len(hits):
            raise InvalidParameterError(f"element {a} is not in the subgroup")
        return int(hits[0])


def generated_subgroup(group: FiniteGroup, generators: Sequence[int]) -> Subgroup:
    """Closure of a generating set, as a Subgroup with sorted carrier."""
    elems = {group.identity}
    frontier = list(elems)
    gens = [int(g) for g in generators]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = group.op(a, g)
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    carrier = sorted(elems)
    pos = {a: i for i, a in enumerate(carrier)}
    k = len(carrier)
    mul = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(carrier):
        for j, b in enumerate(carrier):
            mul[i, j] = pos[group.op(a, b)]
    sub = FiniteGroup(mul, identity=pos[group.identity],
                      labels=[group.label(a) for a in carrier],
                      name=f"{group.name}<{','.join(map(str, gens))}>",
                      _skip_assoc=True)
    return Subgroup(sub, group, np.array(carrier, dtype=np.int64))


def cyclic_subgroup(group: FiniteGroup, g: int) -> Subgroup:
    """The cyclic subgroup <g>, carrier ordered as identity, g, g^2, ..."""
    powers = [group.identity]
    cur = int(g)
    while cur != group.identity:
        powers.append(cur)
        cur = group.op(cur, g)
    pos = {a: i for i, a in enumerate(powers)}
    k = len(powers)
    mul = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(powers):
        for j, b in enumerate(powers):
            mul[i, j] = pos[group.op(a, b)]
    sub = FiniteGroup(mul, identity=0, labels=[group.label(a) for a in powers],
                      name=f"<{g}>", _skip_assoc=True)
    return Subgroup(sub, group, np.array(powers, dtype=np.int64))


def central_quotient(group: FiniteGroup, center_elements: Sequence[int]) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient of a group by a central subgroup given by its element list.

    Returns the quotient group and the projection table (element -> coset
    index).  Cosets are labeled by their least member.
    """
    zset = sorted(set(int(z) for z in center_elements))
    for z in zset:
        if any(group.op(z, a) != group.op(a, z) for a in range(group.order)):
            raise InvalidParameterError(f"element {z} is not central")
    closure = generated_subgroup(group, zset)
    zall = [int(a) for a in closure.to_parent]
    coset_of = np.full(group.order, -1, dtype=np.int64)
    reps = []
    for a in range(group.order):
        if coset_of[a] >= 0:
            continue
        members = sorted(group.op(a, z) for z in zall)
        idx = len(reps)
        reps.append(members[0])
        for m in members:
            coset_of[m] = idx
    k = len(reps)
    mul = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            mul[i, j] = coset_of[group.op(a, b)]
    quot = FiniteGroup(mul, identity=int(coset_of[group.identity]),
                       labels=[group.label(r) for r in reps],
                       name=f"{group.name}/Z", _skip_assoc=True)
    return quot, coset_of


def abelian_automorphisms(module: FiniteAbelianGroup,
                          max_candidates: int = 2_000_000) -> list[np.ndarray]:
    """All automorphisms of a finite abelian group, as module permutations.

    Enumerates the k x k integer matrices compatible with the invariant
    factors (entry (i,j) runs over multiples of d_i/gcd(d_i,d_j) mod d_i)
    and keeps the bijective ones.  Raises CapacityError past the candidate
    bound.
    """
    from .errors import CapacityError

    d = module.invariant_factors
    k = module.k
    if k == 0:
        return [np.arange(1, dtype=np.int64)]
    cand_lists = []
    total = 1
    for i in range(k):
        for j in range(k):
            step = d[i] // math.gcd(d[i], d[j])
            vals = list(range(0, d[i], step))
            cand_lists.append(vals)
            total *= len(vals)
    if total > max_candidates:
        raise CapacityError(
            f"automorphism enumeration needs {total} candidate matrices "
            f"(bound {max_candidates})",
            bound_name="max_candidates", bound=max_candidates, actual=total)
    out = []
    ref = np.arange(module.order)
    for flat in itertools.product(*cand_lists):
        mat = np.array(flat, dtype=np.int64).reshape(k, k)
        perm = module.index_of_many(module.tuples @ mat.T)
        if np.array_equal(np.sort(perm), ref):
            out.append(perm)
    return out
