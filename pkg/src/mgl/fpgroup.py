"""Finite presentations and Todd-Coxeter coset enumeration.

Provides the two-generator presentations of G(alpha, beta) and of its Sylow
p-subgroups, plus a coset enumerator (HLT with lookahead, or Felsch) that
produces complete, standardized coset tables; over the trivial subgroup the
table is the regular permutation representation of the group.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, InternalError, ResourceError
from .padic import split

__all__ = [
    "Word",
    "Presentation",
    "CosetTable",
    "EnumerationLimits",
    "Strategy",
    "macdonald_presentation",
    "sylow_presentation",
    "todd_coxeter",
    "to_permutations",
    "trace_word",
]

UNDEF = -1

# Pure-power relators with exponents above this gain a digit-rewritten
# companion relator through the conjugation structure (see todd_coxeter).
_DIGIT_MIN = 64
# fill=True scans leave gaps longer than this to row filling and lookahead
# instead of materializing the whole run with fresh cosets at once.
_FILL_CAP = 4096
# Table size at which the HLT strategy runs its first lookahead-and-compact
# pass; later passes repeat each time the table doubles.
_HLT_CHECKPOINT = 1 << 16


def _reduce_syllables(syllables):
    stack = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word, run-length encoded as (generator, exponent) syllables."""

    syllables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "syllables", _reduce_syllables(self.syllables))

    @classmethod
    def generator(cls, gen, exp=1):
        return cls(((gen, exp),))

    @classmethod
    def from_letters(cls, letters):
        return cls(tuple((g, s) for g, s in letters))

    def letters(self):
        """Yield (generator, sign) pairs; expands run-length syllables."""
        for gen, exp in self.syllables:
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield (gen, sign)

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __mul__(self, other):
        return Word(self.syllables + other.syllables)

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n):
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        return Word(base.syllables * abs(n))

    def max_generator(self):
        return max((g for g, _ in self.syllables), default=-1)


def commutator(x, y):
    return x.inverse() * y.inverse() * x * y


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple
    names: tuple

    def __post_init__(self):
        if self.generator_count < 1:
            raise DomainError("presentation needs at least one generator")
        if len(self.names) != self.generator_count:
            raise DomainError("one name per generator required")
        for rel in self.relators:
            if rel.max_generator() >= self.generator_count:
                raise DomainError("relator uses an unknown generator")
            for gen, _ in rel.syllables:
                if gen < 0:
                    raise DomainError("negative generator index")


def macdonald_presentation(alpha, beta):
    """Two-generator presentation of G(alpha, beta).

    Relators: [a,b]^-1 a [a,b] a^-alpha and [b,a]^-1 b [b,a] b^-beta,
    with [x,y] = x^-1 y^-1 x y, freely reduced.
    """
    if alpha == 1 or beta == 1:
        raise DomainError("alpha and beta must differ from 1")
    a, b = Word.generator(0), Word.generator(1)
    cab, cba = commutator(a, b), commutator(b, a)
    rel1 = cab.inverse() * a * cab * a ** (-alpha)
    rel2 = cba.inverse() * b * cba * b ** (-beta)
    return Presentation(2, (rel1, rel2), ("a", "b"))


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _power_exponent(p, value, valuation):
    if p == 2:
        return 2 ** (4 * valuation - 1)
    if p == 3:
        if value % 9 == 7:
            return 3**5
        return 3 ** (4 * valuation)
    return p ** (4 * valuation)


def sylow_presentation(alpha, beta, p):
    """Presentation of the Sylow p-subgroup of G(alpha, beta).

    The Macdonald presentation plus power relators a^(p^r) and b^(p^s),
    where the exponents come from the closed-form finiteness bounds:
    p^(4m) and p^(4n) for p > 3, 2^(4m-1) and 2^(4n-1) for p = 2, and for
    p = 3 either 3^5 = 243 (parameter congruent to 7 mod 9) or 3^(4m).
    Requires v_p(alpha-1) > 0 and v_p(beta-1) > 0; the remaining support
    primes give cyclic Sylow subgroups handled analytically.
    """
    if not _is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    base = macdonald_presentation(alpha, beta)
    m = split(alpha - 1, p).valuation
    n = split(beta - 1, p).valuation
    if m == 0 or n == 0:
        raise DomainError(
            "v_p(alpha-1) and v_p(beta-1) must both be positive; "
            "the cyclic case belongs to the predictor, not the enumerator"
        )
    rel_a = Word.generator(0, _power_exponent(p, alpha, m))
    rel_b = Word.generator(1, _power_exponent(p, beta, n))
    return Presentation(2, base.relators + (rel_a, rel_b), ("a", "b"))


class Strategy(Enum):
    HLT_WITH_LOOKAHEAD = "hlt-lookahead"
    FELSCH = "felsch"


@dataclass(frozen=True)
class EnumerationLimits:
    max_cosets: int = 5_000_000
    strategy: Strategy = Strategy.HLT_WITH_LOOKAHEAD
    time_budget: float | None = None

    def __post_init__(self):
        if self.max_cosets < 1:
            raise DomainError("max_cosets must be at least 1")
        if not isinstance(self.strategy, Strategy):
            try:
                coerced = Strategy(self.strategy)
            except ValueError:
                names = ", ".join(s.value for s in Strategy)
                raise DomainError(
                    f"unknown strategy {self.strategy!r}; expected one of {names}"
                ) from None
            object.__setattr__(self, "strategy", coerced)
        if self.time_budget is not None and self.time_budget <= 0:
            raise DomainError("time_budget must be positive when given")


@dataclass(frozen=True)
class CosetTable:
    """Complete standardized coset table: columns[2g] is the action of
    generator g, columns[2g+1] of its inverse; cosets are 0-based with the
    subgroup coset at 0."""

    generator_count: int
    coset_count: int
    complete: bool
    columns: tuple
    names: tuple

    def action(self, coset, gen, sign=1):
        column = 2 * gen + (0 if sign > 0 else 1)
        return self.columns[column][coset]

    def row(self, coset):
        return tuple(col[coset] for col in self.columns)

    def dump(self, stream):
        header = ["coset"]
        for name in self.names:
            header += [name, name + "^-1"]
        stream.write("\t".join(header) + "\n")
        for c in range(self.coset_count):
            stream.write(
                "\t".join(str(x) for x in (c, *self.row(c))) + "\n"
            )


def _word_to_columns(word):
    cols = []
    for gen, sign in word.letters():
        cols.append(2 * gen + (0 if sign > 0 else 1))
    return cols


def _cyclically_reduced(cols):
    cols = list(cols)
    while len(cols) >= 2 and cols[0] == cols[-1] ^ 1:
        cols = cols[1:-1]
    return cols


def _merge_columns(pairs):
    """Merge adjacent (column, count) pairs with equal columns; drop zeros."""
    out = []
    for col, count in pairs:
        if count == 0:
            continue
        if out and out[-1][0] == col:
            out[-1] = (col, out[-1][1] + count)
        else:
            out.append((col, count))
    return tuple(out)


def _columns_to_syllables(cols):
    return _merge_columns((col, 1) for col in cols)


def _make_rel(syllables):
    """Precompute a relator record: (syllables, flat start offsets, length)."""
    starts = []
    total = 0
    for _, count in syllables:
        starts.append(total)
        total += count
    return (tuple(syllables), tuple(starts), total)


class _Enumerator:
    """One coset enumeration: mutable table state plus the processing queue."""

    def __init__(self, relator_syllables, n_columns, limits, definable_columns=None):
        self.ncols = n_columns
        relators = [_make_rel(syl) for syl in relator_syllables]
        # Bare power relators longer than _DIGIT_MIN act as constraints only:
        # they are never used to spawn cosets (filling a huge power with
        # fresh cosets copies whole cycles of junk) and are checked per orbit
        # of their column during sweeps, where any closed cycle whose length
        # violates them collapses. The final settling pass re-checks them at
        # every coset of the finished table.
        self.constraint_relators = [
            rel
            for rel in relators
            if len(rel[0]) == 1 and rel[0][0][1] > _DIGIT_MIN
        ]
        self.fill_relators = [
            rel for rel in relators if rel not in self.constraint_relators
        ]
        self.limits = limits
        self.table = [[UNDEF] for _ in range(n_columns)]
        self.parent = [0]
        self.alive = 1
        self.allocated = 1
        self.total_defined = 1
        self.max_alive = 1
        self.pending = []
        self.deductions = None  # set by Felsch
        self.preferred = deque(maxlen=4096)
        # Columns where fresh cosets may be introduced by definition; entries
        # in the remaining columns arise only through deductions. Auxiliary
        # power-chain generators are excluded so they cannot inflate the
        # definition space.
        self.definable = (
            list(range(n_columns))
            if definable_columns is None
            else list(definable_columns)
        )
        self.definable_set = frozenset(self.definable)
        self.deadline = (
            time.monotonic() + limits.time_budget if limits.time_budget else None
        )

    # -- core table helpers -------------------------------------------------

    def rep(self, c):
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, column, coset):
        if self.allocated >= self.limits.max_cosets:
            raise ResourceError(
                f"coset limit {self.limits.max_cosets} reached",
                high_water=self.allocated,
            )
        new = len(self.parent)
        self.parent.append(new)
        for col in self.table:
            col.append(UNDEF)
        self.table[column][coset] = new
        self.table[column ^ 1][new] = coset
        self.alive += 1
        self.allocated += 1
        self.total_defined += 1
        if self.alive > self.max_alive:
            self.max_alive = self.alive
        if self.deductions is not None:
            self.deductions.append((coset, column))
        if self.deadline is not None and self.allocated % 1024 == 0:
            self.check_time()
        return new

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceError(
                f"time budget {self.limits.time_budget}s exceeded",
                high_water=self.allocated,
            )

    def set_entry(self, column, source, target):
        self.table[column][source] = target
        self.table[column ^ 1][target] = source
        if self.deductions is not None:
            self.deductions.append((source, column))

    def coincide(self, a, b):
        self.pending.append((a, b))
        self.process_coincidences()

    def process_coincidences(self):
        table, parent = self.table, self.parent
        while self.pending:
            a, b = self.pending.pop()
            a, b = self.rep(a), self.rep(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            parent[b] = a
            self.alive -= 1
            for column in range(self.ncols):
                t = table[column][b]
                if t == UNDEF:
                    continue
                table[column][b] = UNDEF
                if table[column ^ 1][t] == b:
                    table[column ^ 1][t] = UNDEF
                av = self.rep(a)
                tv = self.rep(t)
                existing = table[column][av]
                if existing != UNDEF:
                    self.pending.append((existing, tv))
                else:
                    back = table[column ^ 1][tv]
                    if back != UNDEF:
                        self.pending.append((back, av))
                    else:
                        self.set_entry(column, av, tv)

    # -- scanning ------------------------------------------------------------

    def scan(self, coset, rel, fill, record_gap=False):
        """Scan a relator from a coset; fill gaps with new cosets when asked.

        Applies the resulting deduction or coincidence. Returns False if the
        scan was left incomplete (possible with fill=False, or when a fill
        would need more than _FILL_CAP fresh cosets at once). With record_gap,
        a stall exactly one edge pair short of closing the cycle is remembered
        as a preferred definition site.

        Runs walk one column map at a time. Columns are partial injections,
        so a walk can only revisit its own starting coset; on such a cycle
        the remaining steps reduce modulo the cycle length, which keeps huge
        power relators cheap to scan.
        """
        syl, starts, total = rel
        table = self.table
        f, forward = 0, coset
        b, backward = total, coset
        fi = 0
        bi = len(syl) - 1
        while True:
            while f < b:
                col, count = syl[fi]
                limit = starts[fi] + count
                want = (limit if limit < b else b) - f
                colmap = table[col]
                node = forward
                steps = 0
                while steps < want:
                    t = colmap[node]
                    if t == UNDEF:
                        break
                    node = t
                    steps += 1
                    if node == forward:
                        rem = want % steps
                        while rem:
                            node = colmap[node]
                            rem -= 1
                        steps = want
                        break
                forward = node
                f += steps
                if steps < want:
                    break
                if f == limit:
                    fi += 1
            if f == b:
                if forward != backward:
                    self.coincide(forward, backward)
                return True
            while b > f:
                col, count = syl[bi]
                base = starts[bi]
                want = b - (base if base > f else f)
                colmap = table[col ^ 1]
                node = backward
                steps = 0
                while steps < want:
                    t = colmap[node]
                    if t == UNDEF:
                        break
                    node = t
                    steps += 1
                    if node == backward:
                        rem = want % steps
                        while rem:
                            node = colmap[node]
                            rem -= 1
                        steps = want
                        break
                backward = node
                b -= steps
                if steps < want:
                    break
                if b == base:
                    bi -= 1
            if b == f:
                if forward != backward:
                    self.coincide(forward, backward)
                return True
            if b == f + 1:
                self.set_entry(syl[fi][0], forward, backward)
                return True
            if not fill:
                if record_gap and b == f + 2 and syl[fi][0] in self.definable_set:
                    self.preferred.append((forward, syl[fi][0]))
                return False
            if b - f > _FILL_CAP:
                return False
            forward = self.define(syl[fi][0], forward)
            f += 1
            if f == starts[fi] + syl[fi][1]:
                fi += 1

    def _constraint_sweep(self, rel):
        """Check a constraint relator once per orbit of its leading column.

        For a pure power x^n all instances through the same x-orbit carry the
        same information: on a cycle they force the length to divide n, on a
        chain of length n-1 they close it, so one scan per orbit is exhaustive
        and the sweep costs O(live cosets). For a mixed constraint the sweep
        is a heuristic sample of one instance per orbit; the settling pass
        performs the exhaustive per-coset check on the finished table.
        """
        col = rel[0][0][0]
        colmap = self.table[col]
        parent = self.parent
        n = len(parent)
        seen = bytearray(n)
        for c in range(n):
            if parent[c] != c or seen[c]:
                continue
            node = c
            while True:
                seen[node] = 1
                t = colmap[node]
                if t == UNDEF or seen[t]:
                    break
                node = t
            self.scan(c, rel, fill=False)

    def lookahead(self, exhaustive=False):
        for rel in self.constraint_relators:
            self._constraint_sweep(rel)
        relators = (
            self.fill_relators + self.constraint_relators
            if exhaustive
            else self.fill_relators
        )
        for c in range(len(self.parent)):
            if self.parent[c] != c:
                continue
            for rel in relators:
                self.scan(c, rel, fill=False)
                if self.parent[c] != c:
                    break

    def settle(self):
        """Sweep deduction-only scans until a full pass merges nothing.

        Capped fills and constraints checked only at checkpoints can leave
        violated relator instances in an otherwise complete table; on a
        complete table every scan either passes or yields a coincidence, so
        iterating to a fixpoint of the live count enforces every relator.
        """
        while True:
            self.check_time()
            alive_before = self.alive
            self.lookahead(exhaustive=True)
            self.process_coincidences()
            if self.alive == alive_before:
                return

    def compact(self):
        self.process_coincidences()
        mapping = {}
        for c in range(len(self.parent)):
            if self.parent[c] == c:
                mapping[c] = len(mapping)
        new_table = []
        for col in self.table:
            new_col = [UNDEF] * len(mapping)
            for old, new in mapping.items():
                t = col[old]
                new_col[new] = mapping[t] if t != UNDEF else UNDEF
            new_table.append(new_col)
        self.table = new_table
        self.parent = list(range(len(mapping)))
        self.allocated = len(mapping)
        self.alive = len(mapping)
        return mapping

    # -- strategies ----------------------------------------------------------

    def run_hlt(self, subgroup_relators):
        for rel in subgroup_relators:
            self.scan(0, rel, fill=True)
        current = 0
        checkpoint = _HLT_CHECKPOINT
        while current < len(self.parent):
            self.check_time()
            if self.parent[current] != current:
                current += 1
                continue
            for rel in self.fill_relators:
                self.scan(current, rel, fill=True)
                if self.parent[current] != current:
                    break
            if self.parent[current] == current:
                for column in range(self.ncols):
                    if self.table[column][current] == UNDEF:
                        self.define(column, current)
            current += 1
            if len(self.parent) >= checkpoint:
                self.lookahead()
                mapping = self.compact()
                current = self._remap_current(mapping, current)
                checkpoint = max(2 * self.alive, len(self.parent) + _HLT_CHECKPOINT)

    @staticmethod
    def _remap_current(mapping, current):
        # next live coset index in the compacted numbering
        candidates = [new for old, new in mapping.items() if old >= current]
        return min(candidates) if candidates else len(mapping)

    def run_felsch(self, subgroup_relators):
        self.deductions = []
        edp = {}
        seen = set()

        def add_rotation(syl):
            syl = _merge_columns(syl)
            if syl and syl not in seen:
                seen.add(syl)
                edp.setdefault(syl[0][0], []).append(_make_rel(syl))

        for syl, starts, total in self.fill_relators:
            for i, (col, count) in enumerate(syl):
                rest = syl[i + 1 :] + syl[:i]
                # Cap the rotations generated inside one run: past the cap
                # they add bookkeeping without new deduction power, and the
                # settling pass re-checks every instance at the end anyway.
                for k in range(min(count, _DIGIT_MIN)):
                    if k:
                        add_rotation(((col, count - k),) + rest + ((col, k),))
                    else:
                        add_rotation(((col, count),) + rest)
        for rel in subgroup_relators:
            self.scan(0, rel, fill=True)
            self.drain(edp)
        columns = list(self.definable)
        cursor = 0
        sweep_mark = 1 << 14
        while True:
            self.check_time()
            if self.allocated >= sweep_mark:
                for rel in self.constraint_relators:
                    self._constraint_sweep(rel)
                self.drain(edp)
                sweep_mark = self.allocated + max(1 << 14, self.alive >> 1)
            target = None
            while self.preferred:
                c, col = self.preferred.pop()
                c = self.rep(c)
                if self.table[col][c] == UNDEF:
                    target = (c, col)
                    break
            if target is None:
                c = cursor
                while c < len(self.parent):
                    if self.parent[c] == c:
                        for column in columns:
                            if self.table[column][c] == UNDEF:
                                target = (c, column)
                                break
                        if target is not None:
                            break
                        cursor = c + 1
                    c += 1
            if target is None:
                if len(columns) == self.ncols:
                    return
                # Definable rows are complete; sweep the auxiliary columns.
                # Deductions fill nearly all of them, so this pass is cheap.
                columns = list(range(self.ncols))
                cursor = 0
                continue
            self.define(target[1], target[0])
            self.drain(edp)

    def drain(self, edp):
        while self.deductions:
            source, column = self.deductions.pop()
            for start, col in (
                (source, column),
                (self.table[column][source], column ^ 1),
            ):
                if start == UNDEF:
                    continue
                for rotation in edp.get(col, ()):
                    s = self.rep(start)
                    self.scan(s, rotation, fill=False, record_gap=True)


def _balanced_digits(value, base):
    """Digits d_0..d_k with value = sum(d_i * base**i) and |d_i| <= |base|/2.

    Works for positive and negative bases of magnitude at least 2.
    """
    if abs(base) < 2:
        raise InternalError("digit expansion needs |base| >= 2")
    digits = []
    while value:
        r = value % abs(base)
        if 2 * r > abs(base):
            r -= abs(base)
        digits.append(r)
        value = (value - r) // base
    return digits or [0]


def _match_conjugation_relator(syllables):
    """Detect the reduced form of [x,y]^-1 x [x,y] x^-e for generators x != y.

    The free reduction of that word is y^-1 x^-1 y x y^-1 x y x^-e. Returns
    (x, y, e) on a match, else None. Rewriting such relators through an
    auxiliary generator for [x,y] gives the enumerator short relators to
    work with, which is decisive for this presentation family.
    """
    if len(syllables) != 8:
        return None
    if tuple(s[1] for s in syllables[:7]) != (-1, -1, 1, 1, -1, 1, 1):
        return None
    gens = tuple(s[0] for s in syllables[:7])
    y, x = gens[0], gens[1]
    if x == y or gens != (y, x, y, x, y, x, y):
        return None
    tail_gen, tail_exp = syllables[7]
    if tail_gen != x:
        return None
    return (x, y, -tail_exp)


def _standardize(columns, count, scan_cols):
    """Renumber cosets in breadth-first order along the given columns."""
    order = [UNDEF] * count
    order[0] = 0
    queue = [0]
    assigned = 1
    qi = 0
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        for col in scan_cols:
            t = columns[col][c]
            if order[t] == UNDEF:
                order[t] = assigned
                assigned += 1
                queue.append(t)
    if assigned != count:
        raise InternalError("coset table is not transitive over the generators")
    return [
        [order[col[old]] for old in sorted(range(count), key=order.__getitem__)]
        for col in columns
    ]


def _perm_multiply(p, q):
    return tuple(q[x] for x in p)


def _perm_power(p, e):
    n = len(p)
    if e < 0:
        inverse = [0] * n
        for i, x in enumerate(p):
            inverse[x] = i
        p = tuple(inverse)
        e = -e
    result = tuple(range(n))
    while e:
        if e & 1:
            result = _perm_multiply(result, p)
        p = _perm_multiply(p, p)
        e >>= 1
    return result


def _word_permutation(word, gen_perms):
    degree = len(gen_perms[0])
    result = tuple(range(degree))
    for gen, exp in word.syllables:
        result = _perm_multiply(result, _perm_power(gen_perms[gen], exp))
    return result


def _verify_table(columns, count, presentation, subgroup):
    identity = tuple(range(count))
    gen_perms = [tuple(columns[2 * g]) for g in range(presentation.generator_count)]
    for perm in gen_perms:
        if sorted(perm) != list(identity):
            raise InternalError("generator action is not a permutation")
    for relator in presentation.relators:
        if _word_permutation(relator, gen_perms) != identity:
            raise InternalError("relator does not act trivially on the cosets")
    for word in subgroup:
        if _word_permutation(word, gen_perms)[0] != 0:
            raise InternalError("subgroup generator does not fix the subgroup coset")


def todd_coxeter(presentation, subgroup=(), limits=None):
    """Enumerate cosets of <subgroup> in the presented group.

    Returns a complete, standardized CosetTable (the regular representation
    when the subgroup is trivial). Relators are kept run-length encoded as
    (generator, exponent) syllables, so scanning a power relator costs one
    pass around the coset's cycle rather than one step per letter.
    Conjugation-by-commutator relators are expressed through an auxiliary
    generator for the commutator itself, and each huge power relator then
    gains a short companion relator obtained by rewriting its exponent in
    balanced digits to the base given by the conjugation relation. Both
    rewritings are consequences of the presented relators for every choice
    of exponents. The auxiliary columns are projected away and the table is
    verified against the original relators before being returned.
    """
    limits = limits or EnumerationLimits()
    n_gens = presentation.generator_count
    next_gen = n_gens
    relator_syllables = []
    commutator_aux = {}
    conjugation_info = {}
    power_relators = []

    for relator in presentation.relators:
        syllables = relator.syllables
        conjugation = _match_conjugation_relator(syllables)
        if conjugation is not None:
            x, y, exp = conjugation
            key = (min(x, y), max(x, y))
            if key not in commutator_aux:
                aux = next_gen
                next_gen += 1
                commutator_aux[key] = aux
                u, v = key
                # definition aux = [u, v], i.e. relator aux^-1 u^-1 v^-1 u v
                relator_syllables.append(
                    (
                        (2 * aux + 1, 1),
                        (2 * u + 1, 1),
                        (2 * v + 1, 1),
                        (2 * u, 1),
                        (2 * v, 1),
                    )
                )
            aux = commutator_aux[key]
            c_pos, c_neg = (
                (2 * aux, 2 * aux + 1) if (x, y) == key else (2 * aux + 1, 2 * aux)
            )
            tail_col = 2 * x + (1 if exp > 0 else 0)
            relator_syllables.append(
                ((c_neg, 1), (2 * x, 1), (c_pos, 1), (tail_col, abs(exp)))
            )
            if x not in conjugation_info and abs(exp) >= 2:
                conjugation_info[x] = (c_neg, c_pos, exp)
            continue
        if len(syllables) == 1:
            gen, exp = syllables[0]
            power_relators.append((gen, exp))
            col = 2 * gen if exp > 0 else 2 * gen + 1
            relator_syllables.append(((col, abs(exp)),))
            continue
        cols = _cyclically_reduced(_word_to_columns(relator))
        if cols:
            relator_syllables.append(_columns_to_syllables(cols))
    for gen, exp in power_relators:
        info = conjugation_info.get(gen)
        if info is None or abs(exp) <= _DIGIT_MIN:
            continue
        # Companion relator: with x^c = x^e on the books, x^(e^i) equals
        # c^-i x c^i, so writing the huge exponent in balanced base e as
        # sum(d_i * e^i) turns the power relator into a short mixed word
        # x^d_0 c^-1 x^d_1 c^-1 ... c^-1 x^d_k c^k that gives deductions
        # a local foothold the bare power cannot provide.
        c_neg, c_pos, base = info
        digits = _balanced_digits(abs(exp), base)
        pairs = []
        for i, digit in enumerate(digits):
            if i:
                pairs.append((c_neg, 1))
            if digit:
                col = 2 * gen if digit > 0 else 2 * gen + 1
                pairs.append((col, abs(digit)))
        if len(digits) > 1:
            pairs.append((c_pos, len(digits) - 1))
        merged = _merge_columns(pairs)
        if merged:
            relator_syllables.append(merged)
    extended_gens = next_gen
    subgroup_relators = [
        _make_rel(_columns_to_syllables(_word_to_columns(w))) for w in subgroup
    ]
    definable = list(range(2 * n_gens))
    # Felsch definition policy: auxiliary commutator generators are definable
    # on presentations whose bare power relators are modest, but on instances
    # dominated by huge power exponents the auxiliary columns are restricted
    # to deduced entries only. Speculative definitions in the auxiliary
    # direction feed uncollapsible chains there; on small instances the same
    # definitions close the commutator squares sooner. The cutoff compares
    # the product of the bare power magnitudes against 10^5 and uses nothing
    # but the presentation text, so behaviour is uniform in the parameters.
    power_scale = 1
    for _, exp in power_relators:
        if abs(exp) > _DIGIT_MIN:
            power_scale *= abs(exp)
    if limits.strategy is not Strategy.FELSCH or power_scale <= 100_000:
        for aux in commutator_aux.values():
            definable.extend((2 * aux, 2 * aux + 1))
    engine = _Enumerator(
        relator_syllables, 2 * extended_gens, limits, definable_columns=definable
    )
    if limits.strategy is Strategy.FELSCH:
        engine.run_felsch(subgroup_relators)
    else:
        engine.run_hlt(subgroup_relators)
    engine.settle()
    engine.process_coincidences()
    engine.compact()
    count = engine.alive
    projected = [engine.table[c] for c in range(2 * n_gens)]
    for col in projected:
        if any(x == UNDEF for x in col):
            raise InternalError("enumeration finished with undefined entries")
    scan_order = [2 * g for g in range(n_gens)]
    standardized = _standardize(projected, count, scan_order)
    _verify_table(standardized, count, presentation, subgroup)
    result = CosetTable(
        generator_count=n_gens,
        coset_count=count,
        complete=True,
        columns=tuple(tuple(col) for col in standardized),
        names=presentation.names,
    )
    # Enumeration statistics ride along as a private attribute so the public
    # dataclass keeps its documented fields; object.__setattr__ is needed
    # because the dataclass is frozen.
    object.__setattr__(
        result,
        "_stats",
        {"defined": engine.total_defined, "max_alive": engine.max_alive},
    )
    return result


def to_permutations(table):
    """Generator actions of a complete table as permutations of the cosets."""
    if not table.complete:
        raise DomainError("coset table is incomplete")
    from .permgroup import Permutation

    return [
        Permutation(table.columns[2 * g]) for g in range(table.generator_count)
    ]


def trace_word(table, word, start):
    """Image of a coset under a word; power syllables step along generator
    cycles modulo the cycle length, so huge exponents stay cheap."""
    current = start
    for gen, exp in word.syllables:
        column = table.columns[2 * gen] if exp > 0 else table.columns[2 * gen + 1]
        cycle = [current]
        nxt = column[current]
        while nxt != current:
            cycle.append(nxt)
            nxt = column[nxt]
        current = cycle[abs(exp) % len(cycle)]
    return current
