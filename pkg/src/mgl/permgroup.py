"""Permutation groups: orders, membership, normal closures, central series.

Two engines share one interface. Groups built from a regular representation
(every point stabilizer trivial, as produced by coset enumeration over the
trivial subgroup) use the free-action fast path: the orbit of point 0 is in
bijection with the group, so orders are orbit sizes and membership of an
ambient element is a single point lookup. Everything else runs through a
deterministic Schreier-Sims base and strong generating set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import DomainError, InternalError

__all__ = [
    "Permutation",
    "PermGroup",
    "CentralSeriesReport",
    "from_regular",
    "schreier_sims",
    "order",
    "element_order",
    "membership",
    "normal_closure",
    "lower_central_series",
    "derived_subgroup",
]


@dataclass(frozen=True)
class Permutation:
    """Permutation of {0, ..., degree-1}; images[i] is the image of i."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if not self.images:
            raise DomainError("permutation degree must be at least 1")
        seen = bytearray(len(self.images))
        for x in self.images:
            if not isinstance(x, int) or x < 0 or x >= len(self.images) or seen[x]:
                raise DomainError("images do not form a permutation")
            seen[x] = 1

    @classmethod
    def identity(cls, degree):
        return cls(tuple(range(degree)))

    @property
    def degree(self):
        return len(self.images)

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def __mul__(self, other):
        # right action: point^({self}*{other}) = (point^self)^other
        o = other.images
        return Permutation(tuple(o[x] for x in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def smallest_moved_point(self):
        for i, x in enumerate(self.images):
            if x != i:
                return i
        return None


def element_order(perm):
    """Order of a permutation: lcm of its cycle lengths."""
    images = perm.images
    seen = bytearray(len(images))
    result = 1
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = 1
            p = images[p]
            length += 1
        result = result * length // gcd(result, length)
    return result


def commutator(x, y):
    return x.inverse() * y.inverse() * x * y


# --------------------------------------------------------------------------
# deterministic Schreier-Sims (generic engine)


class _Level:
    __slots__ = ("point", "gens", "transversal", "orbit_order")

    def __init__(self, point, degree):
        self.point = point
        self.gens = []
        self.transversal = {point: Permutation.identity(degree)}
        self.orbit_order = [point]


def _recompute_orbit(level):
    degree = len(next(iter(level.transversal.values())).images)
    level.transversal = {level.point: Permutation.identity(degree)}
    level.orbit_order = [level.point]
    qi = 0
    while qi < len(level.orbit_order):
        p = level.orbit_order[qi]
        qi += 1
        rep = level.transversal[p]
        for g in level.gens:
            q = g.images[p]
            if q not in level.transversal:
                level.transversal[q] = rep * g
                level.orbit_order.append(q)


class _Bsgs:
    def __init__(self, generators, degree):
        self.degree = degree
        self.levels = []
        gens = []
        for g in generators:
            if not g.is_identity() and g not in gens:
                gens.append(g)
        for g in gens:
            residue, depth = self.sift(g, 0)
            if residue is not None:
                self._add_generator(residue, 0, depth)
        self._complete()

    def sift(self, perm, start):
        """Strip perm through levels[start:]; return (residue, depth reached)
        with residue None when the strip ends at the identity."""
        depth = start
        for level in self.levels[start:]:
            q = perm.images[level.point]
            rep = level.transversal.get(q)
            if rep is None:
                return perm, depth
            perm = perm * rep.inverse()
            depth += 1
        if perm.is_identity():
            return None, depth
        return perm, depth

    def _add_generator(self, perm, low, high):
        """Insert perm into levels low..high (it fixes the first `low` base
        points); extend the base when it fixes every existing base point."""
        if high == len(self.levels):
            point = perm.smallest_moved_point()
            self.levels.append(_Level(point, self.degree))
        for i in range(low, high + 1):
            level = self.levels[i]
            level.gens.append(perm)
            _recompute_orbit(level)

    def _complete(self):
        i = len(self.levels) - 1
        while i >= 0:
            violation = self._check_level(i)
            if violation is None:
                i -= 1
            else:
                residue, depth = violation
                self._add_generator(residue, i + 1, depth)
                i = min(depth, len(self.levels) - 1)

    def _check_level(self, i):
        level = self.levels[i]
        for p in level.orbit_order:
            rep = level.transversal[p]
            for s in level.gens:
                q = s.images[p]
                schreier = rep * s * self.levels[i].transversal[q].inverse()
                if schreier.is_identity():
                    continue
                residue, depth = self.sift(schreier, i + 1)
                if residue is not None:
                    return residue, depth
        return None

    def order(self):
        total = 1
        for level in self.levels:
            total *= len(level.transversal)
        return total

    def contains(self, perm):
        residue, _ = self.sift(perm, 0)
        return residue is None


# --------------------------------------------------------------------------
# the group object


@dataclass
class PermGroup:
    """Group generated by permutations of a common degree.

    `ambient_free=True` certifies that the generators act freely and
    transitively (a regular representation); subgroups constructed inside
    such a group inherit the certificate and use orbit-based bookkeeping.
    """

    degree: int
    generators: tuple
    ambient_free: bool = False
    _orbit_member: bytearray | None = field(default=None, repr=False)
    _orbit_size: int = field(default=0, repr=False)
    _tree: list | None = field(default=None, repr=False)
    _bsgs: _Bsgs | None = field(default=None, repr=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        for g in self.generators:
            if g.degree != self.degree:
                raise DomainError("generator degree mismatch")
        if self.ambient_free and self._orbit_member is None:
            self._rebuild_orbit()

    # -- free-action bookkeeping -------------------------------------------

    def _rebuild_orbit(self):
        member = bytearray(self.degree)
        member[0] = 1
        tree = [None] * self.degree
        queue = [0]
        qi = 0
        gen_images = [g.images for g in self.generators]
        inv_images = [g.inverse().images for g in self.generators]
        while qi < len(queue):
            p = queue[qi]
            qi += 1
            for gi in range(len(gen_images)):
                for images, sign in ((gen_images[gi], 1), (inv_images[gi], -1)):
                    q = images[p]
                    if not member[q]:
                        member[q] = 1
                        tree[q] = (p, gi, sign)
                        queue.append(q)
        self._orbit_member = member
        self._orbit_size = len(queue)
        self._tree = tree

    def _free_order(self):
        return self._orbit_size

    def _contains_ambient(self, perm):
        """Membership for elements known to lie in the ambient free group:
        exact by freeness, a single point lookup."""
        return bool(self._orbit_member[perm.images[0]])

    def _tree_element(self, point):
        """The unique group element sending 0 to `point` (ambient-free mode),
        reconstructed by composing the orbit tree edges."""
        path = []
        p = point
        while p != 0:
            prev, gi, sign = self._tree[p]
            path.append((gi, sign))
            p = prev
        images = list(range(self.degree))
        for gi, sign in reversed(path):
            gen = self.generators[gi]
            gen_images = gen.images if sign > 0 else gen.inverse().images
            images = [gen_images[x] for x in images]
        return Permutation(tuple(images))

    # -- generic bookkeeping -------------------------------------------------

    def _ensure_bsgs(self):
        if self._bsgs is None:
            self._bsgs = _Bsgs(self.generators, self.degree)
        return self._bsgs


def from_regular(generators):
    """Group from a regular (free and transitive) permutation representation,
    e.g. the image of a coset table over the trivial subgroup."""
    if not generators:
        raise DomainError("at least one generator required")
    group = PermGroup(generators[0].degree, tuple(generators), ambient_free=True)
    if group._orbit_size != group.degree:
        raise InternalError("representation is not transitive; not regular")
    return group


def schreier_sims(gens, degree):
    """Deterministic base and strong generating set for <gens>."""
    gens = tuple(gens)
    for g in gens:
        if g.degree != degree:
            raise DomainError("generator degree mismatch")
    group = PermGroup(degree, gens)
    group._ensure_bsgs()
    return group


def order(group):
    """Exact order of the group as a big integer."""
    if group.ambient_free:
        return group._free_order()
    return group._ensure_bsgs().order()


def membership(group, perm):
    """Exact membership test."""
    if perm.degree != group.degree:
        raise DomainError("degree mismatch")
    if group.ambient_free:
        if not group._contains_ambient(perm):
            return False
        # confirm against the unique tree element reaching the same point,
        # so arbitrary permutations cannot alias into the group
        return group._tree_element(perm.images[0]).images == perm.images
    return group._ensure_bsgs().contains(perm)


def _closure(group, seeds, conjugators):
    """Smallest subgroup containing seeds and closed under the conjugators,
    inside the group's ambient context (free or generic)."""
    if group.ambient_free:
        return _closure_free(group, seeds, conjugators)
    return _closure_generic(group, seeds, conjugators)


def _closure_free(group, seeds, conjugators):
    sub = PermGroup(group.degree, (), ambient_free=True)
    work = [s for s in seeds if not s.is_identity()]
    gens = []
    qi = 0
    while qi < len(work):
        candidate = work[qi]
        qi += 1
        if sub._contains_ambient(candidate):
            continue
        gens.append(candidate)
        sub = PermGroup(group.degree, tuple(gens), ambient_free=True)
        for t in conjugators:
            ti = t.inverse()
            work.append(ti * candidate * t)
            work.append(t * candidate * ti)
    return sub


def _closure_generic(group, seeds, conjugators):
    gens = []
    sub = _Bsgs((), group.degree)
    work = [s for s in seeds if not s.is_identity()]
    qi = 0
    while qi < len(work):
        candidate = work[qi]
        qi += 1
        if sub.contains(candidate):
            continue
        gens.append(candidate)
        sub = _Bsgs(tuple(gens), group.degree)
        for t in conjugators:
            ti = t.inverse()
            work.append(ti * candidate * t)
            work.append(t * candidate * ti)
    result = PermGroup(group.degree, tuple(gens))
    result._bsgs = sub
    return result


def normal_closure(group, seeds):
    """Smallest normal subgroup of `group` containing the seeds."""
    for s in seeds:
        if s.degree != group.degree:
            raise DomainError("seed degree mismatch")
    return _closure(group, seeds, group.generators)


def derived_subgroup(group):
    """Commutator subgroup: normal closure of generator commutators."""
    gens = group.generators
    seeds = [
        commutator(gens[i], gens[j])
        for i in range(len(gens))
        for j in range(i + 1, len(gens))
    ]
    return normal_closure(group, seeds)


@dataclass(frozen=True)
class CentralSeriesReport:
    """Lower central series: terms[0] is the whole group; class is the last
    nontrivial index (0 for the trivial group), or None when the series
    stabilizes at a nontrivial term (not nilpotent)."""

    terms: tuple
    orders: tuple
    nilpotency_class: int | None
    nilpotent: bool


def lower_central_series(group):
    """Lower central series via iterated normal closures of commutators."""
    terms = [group]
    orders = [order(group)]
    if orders[0] == 1:
        return CentralSeriesReport((group,), (1,), 0, True)
    while True:
        current = terms[-1]
        seeds = [
            commutator(s, t)
            for s in current.generators
            for t in group.generators
        ]
        nxt = normal_closure(group, seeds)
        nxt_order = order(nxt)
        if nxt_order == orders[-1]:
            return CentralSeriesReport(
                tuple(terms), tuple(orders), None, False
            )
        terms.append(nxt)
        orders.append(nxt_order)
        if nxt_order == 1:
            return CentralSeriesReport(
                tuple(terms), tuple(orders), len(terms) - 1, True
            )
