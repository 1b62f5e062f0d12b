"""Independent verification of predicted Sylow subgroup structure.

The pipeline rebuilds each Sylow p-subgroup of G(alpha, beta) from its
finite presentation by coset enumeration over the trivial subgroup, reads
order, nilpotency class, and generator orders off the resulting regular
permutation representation, and compares them with the closed-form
prediction. A relation catalog (R1 to R6, plus a Q16 fingerprint on groups
of order 16) is evaluated inside the concrete group; the catalog identities
are theorems, so any failure indicates an engine or arithmetic defect, not
a property of the input.

Reports are plain data. A corpus of (alpha, beta, prime) triples can be
verified in parallel worker processes; per-entry failures are captured in
the affected report and never abort the run.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .errors import DomainError, InternalError, ResourceError
from .fpgroup import (
    EnumerationLimits,
    Strategy,
    sylow_presentation,
    to_permutations,
    todd_coxeter,
)
from .padic import delta_mod, epsilon, mu_mod, split
from .permgroup import (
    Permutation,
    commutator,
    element_order,
    from_regular,
    lower_central_series,
    order as group_order,
)
from .predictor import CaseId, GroupParams, predict, prime_support
from .snf import IntMatrix, abelian_order

MATCH = "MATCH"
MISMATCH = "MISMATCH"
SKIPPED_RESOURCE = "SKIPPED_RESOURCE"
ERROR = "ERROR"

# Relation identifiers in report order.
_RELATION_IDS = ("R1", "R2", "R3", "R4", "R5", "R6")


@dataclass(frozen=True)
class MeasuredStructure:
    """Structure constants read off an enumerated group.

    The two invariants below are theorems about the groups this package
    builds, so a violation is reported as an internal defect rather than a
    measurement.
    """

    order: int
    nilpotency_class: int
    ord_a: int
    ord_b: int
    ord_c: int
    abelianization_order: int

    def __post_init__(self):
        if self.ord_c and gcd(self.ord_a, self.ord_b) % self.ord_c:
            raise InternalError(
                "measured o(c) does not divide gcd(o(a), o(b)): "
                f"{self.ord_c} vs gcd({self.ord_a}, {self.ord_b})"
            )
        if self.order and (self.ord_a * self.ord_b * self.ord_c) % self.order:
            raise InternalError(
                "measured order does not divide o(a)*o(b)*o(c): "
                f"{self.order} vs {self.ord_a}*{self.ord_b}*{self.ord_c}"
            )

    def as_dict(self):
        return {
            "order": self.order,
            "class": self.nilpotency_class,
            "ordA": self.ord_a,
            "ordB": self.ord_b,
            "ordC": self.ord_c,
            "abelianization": self.abelianization_order,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one (alpha, beta, prime) verification.

    status is MATCH when a structure was measured and every compared
    quantity equals its prediction and every evaluated relation holds, or
    when the Sylow subgroup is cyclic and the analytic answer needs no
    enumeration (measured is omitted then: the prediction is the
    verification). MISMATCH carries the full measured data. Resource limits
    give SKIPPED_RESOURCE; ERROR reports carry a diagnostic and appear in
    corpus runs, which never abort on a bad entry.
    """

    alpha: int | None
    beta: int | None
    prime: int | None
    predicted: object | None
    measured: MeasuredStructure | None
    relation_results: tuple
    status: str
    cosets: int | None
    millis: int
    error: str | None = None

    def as_dict(self):
        predicted = None
        if self.predicted is not None:
            predicted = {
                "e": self.predicted.e,
                "f": self.predicted.f,
                "vA": self.predicted.vA,
                "vB": self.predicted.vB,
                "vC": self.predicted.vC,
                "case": self.predicted.case.value,
            }
        out = {
            "alpha": self.alpha,
            "beta": self.beta,
            "prime": self.prime,
            "predicted": predicted,
            "measured": self.measured.as_dict() if self.measured else None,
            "relations": [
                {"id": rid, "holds": holds}
                for rid, holds in self.relation_results
            ],
            "status": self.status,
            "cosets": self.cosets,
            "millis": self.millis,
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self):
        return json_line(self.as_dict())


def json_line(obj):
    """Canonical one-line JSON serialization used for all reports."""
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def _default_limits(p, max_cosets=None, time_budget=None):
    """Enumeration defaults by prime: HLT closes the p = 2 family fastest,
    while the odd-prime instances need the deduction-driven strategy to
    fold their larger commutator structure. Callers can override with an
    explicit EnumerationLimits."""
    strategy = Strategy.HLT_WITH_LOOKAHEAD if p == 2 else Strategy.FELSCH
    kwargs = {"strategy": strategy}
    if max_cosets is not None:
        kwargs["max_cosets"] = max_cosets
    if time_budget is not None:
        kwargs["time_budget"] = time_budget
    return EnumerationLimits(**kwargs)


def _abelianization_order(presentation):
    """Order of the presentation's abelianization via Smith normal form.

    Rows index generators, columns are relator exponent-sum vectors.
    """
    n = presentation.generator_count
    rows = [[0] * len(presentation.relators) for _ in range(n)]
    for j, relator in enumerate(presentation.relators):
        for gen, exp in relator.syllables:
            rows[gen][j] += exp
    return abelian_order(IntMatrix.from_rows(rows))


def q16_fingerprint(g):
    """True iff the order-16 group g is generalized quaternion.

    Among the fourteen groups of order 16, Q16 is characterized by having a
    unique involution together with being non-abelian and containing an
    element of order 8.
    """
    if group_order(g) != 16:
        raise DomainError("Q16 fingerprint requires a group of order 16")
    elements = _enumerate_elements(g, bound=16)
    involutions = 0
    has_order8 = False
    for perm in elements:
        o = element_order(perm)
        if o == 2:
            involutions += 1
        elif o == 8:
            has_order8 = True
    gens = g.generators
    abelian = all(
        x * y == y * x for i, x in enumerate(gens) for y in gens[i + 1 :]
    )
    return involutions == 1 and has_order8 and not abelian


def _enumerate_elements(g, bound):
    """All elements of a small group by closure over its generators."""
    identity = Permutation.identity(g.degree)
    elements = {identity.images: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for gen in g.generators:
                y = x * gen
                if y.images not in elements:
                    if len(elements) >= bound:
                        raise InternalError("group larger than claimed bound")
                    elements[y.images] = y
                    nxt.append(y)
        frontier = nxt
    return list(elements.values())


def relation_checks(alpha, beta, p, a, b, c, measured):
    """Evaluate the relation catalog in the enumerated group.

    R1 to R5 restate identities that hold in every Macdonald group with
    alpha, beta > 1; outside that range they are reported as not evaluated
    (holds = None). R6 restates the product decomposition and is evaluated
    always. Astronomic exponents are reduced modulo the measured element
    orders before any permutation power is taken, so no check ever walks a
    huge power.
    """
    oa, ob, oc = measured.ord_a, measured.ord_b, measured.ord_c
    identity = Permutation.identity(a.degree)
    results = []
    evaluable = alpha > 1 and beta > 1

    if evaluable:
        # R1: A^(delta_alpha (alpha-1)) = B^(delta_beta (beta-1)), central.
        ea = delta_mod(alpha, oa) * (alpha - 1) % oa
        eb = delta_mod(beta, ob) * (beta - 1) % ob
        za, zb = a**ea, b**eb
        central = za * a == a * za and za * b == b * za
        results.append(("R1", za == zb and central))

        # R2: A^(eps (alpha-1) mu_alpha) = 1 = B^(eps (beta-1) mu_beta).
        eps = epsilon(alpha, beta)
        ea = eps * (alpha - 1) * mu_mod(alpha, oa) % oa
        eb = eps * (beta - 1) * mu_mod(beta, ob) % ob
        results.append(("R2", a**ea == identity and b**eb == identity))

        # R3: A^((alpha-1) mu_alpha) = B^((beta-1) mu_beta).
        ea = (alpha - 1) * mu_mod(alpha, oa) % oa
        eb = (beta - 1) * mu_mod(beta, ob) % ob
        results.append(("R3", a**ea == b**eb))

        # R4: A^(alpha^((alpha-beta)(beta-1)) - 1) = 1 and the B-mirror.
        # The tower exponent may be negative; alpha is a unit modulo the
        # p-power order of a, so three-argument pow applies directly.
        ea = (pow(alpha, (alpha - beta) * (beta - 1), oa) - 1) % oa
        eb = (pow(beta, (beta - alpha) * (alpha - 1), ob) - 1) % ob
        results.append(("R4", a**ea == identity and b**eb == identity))

        # R5: b^(beta0^(beta+1) delta_beta) a^(delta_alpha) = c^(alpha-beta)
        # with beta0 the inverse of beta modulo o(b).
        beta0 = pow(beta, -1, ob)
        eb = pow(beta0, beta + 1, ob) * delta_mod(beta, ob) % ob
        ea = delta_mod(alpha, oa) % oa
        lhs = (b**eb) * (a**ea)
        rhs = c ** ((alpha - beta) % oc)
        results.append(("R5", lhs == rhs))
    else:
        results.extend((rid, None) for rid in _RELATION_IDS[:5])

    # R6: the group is the product of the three cyclic subgroups, checked
    # as an order bound, together with o(c) dividing both generator orders.
    results.append(
        (
            "R6",
            oa * ob * oc >= measured.order
            and gcd(oa, ob) % oc == 0,
        )
    )
    return results


def verify(alpha, beta, p, limits=None, *, max_cosets=None, time_budget=None):
    """Predict and independently measure the Sylow p-subgroup of
    G(alpha, beta); return a VerificationReport.

    With limits omitted, the enumeration strategy is picked by prime (see
    _default_limits) and max_cosets / time_budget apply when given. An
    explicit EnumerationLimits is used exactly as passed. Cyclic cases are
    answered analytically without enumeration. Resource exhaustion yields
    status SKIPPED_RESOURCE rather than an exception; domain errors (alpha
    or beta equal to 1, p outside the prime support) raise DomainError.
    """
    t0 = time.monotonic()
    params = GroupParams(alpha, beta)
    support = prime_support(params)
    if p not in support:
        raise DomainError(
            f"prime {p} does not divide the order of G({alpha}, {beta}); "
            f"support is {support}"
        )
    predicted = predict(params, p)

    def _ms():
        return int(round((time.monotonic() - t0) * 1000))

    if predicted.case is CaseId.CYCLIC:
        return VerificationReport(
            alpha=alpha,
            beta=beta,
            prime=p,
            predicted=predicted,
            measured=None,
            relation_results=(),
            status=MATCH,
            cosets=None,
            millis=_ms(),
        )

    presentation = sylow_presentation(alpha, beta, p)
    effective = limits if limits is not None else _default_limits(
        p, max_cosets=max_cosets, time_budget=time_budget
    )
    try:
        table = todd_coxeter(presentation, limits=effective)
    except ResourceError as exc:
        return VerificationReport(
            alpha=alpha,
            beta=beta,
            prime=p,
            predicted=predicted,
            measured=None,
            relation_results=(),
            status=SKIPPED_RESOURCE,
            cosets=exc.high_water,
            millis=_ms(),
            error=str(exc),
        )

    a, b = to_permutations(table)
    c = commutator(a, b)
    group = from_regular([a, b])
    series = lower_central_series(group)
    measured = MeasuredStructure(
        order=group_order(group),
        nilpotency_class=series.nilpotency_class,
        ord_a=element_order(a),
        ord_b=element_order(b),
        ord_c=element_order(c),
        abelianization_order=_abelianization_order(presentation),
    )
    relations = list(relation_checks(alpha, beta, p, a, b, c, measured))
    if measured.order == 16:
        relations.append(("Q16", q16_fingerprint(group)))

    structural = (
        measured.order == p**predicted.e
        and measured.nilpotency_class == predicted.f
        and measured.ord_a == p**predicted.vA
        and measured.ord_b == p**predicted.vB
        and measured.ord_c == p**predicted.vC
    )
    relations_hold = all(holds is not False for _, holds in relations)
    stats = getattr(table, "_stats", None)
    return VerificationReport(
        alpha=alpha,
        beta=beta,
        prime=p,
        predicted=predicted,
        measured=measured,
        relation_results=tuple(relations),
        status=MATCH if structural and relations_hold else MISMATCH,
        cosets=stats["defined"] if stats else None,
        millis=_ms(),
    )


def _normalize_entry(entry):
    """Accept corpus entries as objects with alpha/beta/prime/max_cosets
    attributes or as plain tuples; return that 4-tuple."""
    if hasattr(entry, "alpha"):
        return (
            entry.alpha,
            entry.beta,
            getattr(entry, "prime", None),
            getattr(entry, "max_cosets", None),
        )
    alpha, beta, *rest = entry
    prime = rest[0] if len(rest) > 0 else None
    max_cosets = rest[1] if len(rest) > 1 else None
    return (alpha, beta, prime, max_cosets)


def _error_report(alpha, beta, prime, message):
    return VerificationReport(
        alpha=alpha,
        beta=beta,
        prime=prime,
        predicted=None,
        measured=None,
        relation_results=(),
        status=ERROR,
        cosets=None,
        millis=0,
        error=message,
    )


def _expand_entry(entry):
    """One (alpha, beta, prime, max_cosets) task per applicable prime.

    An absent prime means every prime in the support of G(alpha, beta).
    Entries that cannot even name their primes produce a single error task.
    """
    alpha, beta, prime, max_cosets = entry
    if prime is not None:
        return [(alpha, beta, prime, max_cosets)]
    try:
        support = prime_support(GroupParams(alpha, beta))
    except Exception as exc:
        return [(alpha, beta, None, max_cosets, str(exc))]
    return [(alpha, beta, p, max_cosets) for p in support]


def _corpus_worker(task):
    if len(task) == 5:
        alpha, beta, prime, _, message = task
        return _error_report(alpha, beta, prime, message)
    alpha, beta, prime, max_cosets = task
    try:
        return verify(alpha, beta, prime, max_cosets=max_cosets)
    except Exception as exc:
        return _error_report(
            alpha, beta, prime, f"{type(exc).__name__}: {exc}"
        )


def run_corpus(entries, parallelism=1):
    """Verify a corpus; one report per entry-prime pair, in input order.

    Independent tasks run in up to `parallelism` worker processes; each
    task's pipeline is sequential. Any per-entry failure is captured in
    that entry's report with status ERROR.
    """
    tasks = []
    for entry in entries:
        tasks.extend(_expand_entry(_normalize_entry(entry)))
    if parallelism <= 1 or len(tasks) <= 1:
        return [_corpus_worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_corpus_worker, tasks))


def summarize(reports):
    """Aggregate counts keyed by status, for corpus summaries."""
    counts = {MATCH: 0, MISMATCH: 0, SKIPPED_RESOURCE: 0, ERROR: 0}
    for report in reports:
        counts[report.status] = counts.get(report.status, 0) + 1
    return counts
