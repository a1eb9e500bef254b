"""Descent bookkeeping for a p-isogeny over Q.

Classifies the bad primes into S1/S2/S3 with two independent tests (the
reduction of the kernel point versus the discriminant-valuation ratio
under the isogeny), builds the power-residue character matrix whose rank
is m(S1, S2), and computes the two-sided Selmer sandwich dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import fplinalg
from .arith import (
    Factorization,
    character_eval,
    factor,
    require_complete,
    residue_character,
)
from .elliptic import (
    ADDITIVE,
    GOOD,
    NONSPLIT,
    SPLIT,
    Curve,
    Point,
    has_order,
    minimal_model,
    minimal_disc_factorization,
    reduce_point,
    singular_point,
    transform_point,
    valuation,
)
from .errors import ClassifierDisagreement, InputError
from .isogeny import IsogenyData, velu_quotient

S1 = "S1"
S2 = "S2"


@dataclass(frozen=True)
class DescentSets:
    p: int
    s1: tuple[int, ...]  # sorted; kernel point hits the singular locus
    s2: tuple[int, ...]  # sorted; kernel point stays on the smooth locus
    s3: tuple[int, ...]  # primes above p: always (p,) over Q
    excluded: tuple[tuple[int, str], ...]  # (prime, reason)
    evidence: tuple[tuple[int, str, str], ...]  # (prime, singular_point_test, valuation_ratio_test)


def dual_sets(sets: DescentSets) -> DescentSets:
    """The descent sets of the dual isogeny: S1 and S2 swap, S3 is unchanged."""
    flipped = tuple(
        (q, {S1: S2, S2: S1}[a], {S1: S2, S2: S1}[b]) for q, a, b in sets.evidence
    )
    return replace(sets, s1=sets.s2, s2=sets.s1, evidence=flipped)


@dataclass(frozen=True)
class ClassifiedCurve:
    """Everything classify_primes learns along the way."""

    sets: DescentSets
    curve: Curve  # minimal model actually classified
    point: Point
    isogeny: IsogenyData
    disc_factorization: Factorization
    codomain_disc_factorization: Factorization


def factor_with_hints(n: int, hints: tuple[int, ...], budget: int | None = None):
    """Factor n, stripping the hinted primes first (they usually cover everything)."""
    if n == 0:
        raise InputError("cannot factor 0")
    sign = 1 if n > 0 else -1
    m = abs(n)
    found = {}
    for q in sorted(set(hints)):
        while m % q == 0:
            found[q] = found.get(q, 0) + 1
            m //= q
    if m == 1:
        return Factorization(n, sign, tuple(sorted(found.items())))
    rest = factor(m * sign, budget)
    merged = dict(found)
    for q, e in rest.factors:
        merged[q] = merged.get(q, 0) + e
    factors = tuple(sorted(merged.items()))
    if rest.complete:
        return Factorization(n, sign, factors)
    from .arith import Incomplete

    return Incomplete(n, sign, factors, rest.cofactor)


def classify_primes(
    e: Curve,
    pt: Point,
    p: int,
    disc_factorization: Factorization | None = None,
) -> ClassifiedCurve:
    """Sort the split multiplicative primes of E into S1 and S2.

    Runs both classifiers on every candidate prime and aborts on any
    disagreement.  The input model is minimalized first (the point is
    carried along).
    """
    if not has_order(e, pt, p):
        raise InputError(f"kernel point must have exact order {p}")
    if disc_factorization is None:
        disc_factorization = require_complete(factor(e.disc))
    emin, tr = minimal_model(e, disc_factorization)
    fac_min = minimal_disc_factorization(disc_factorization, tr)
    pmin = transform_point(pt, tr)
    iso = velu_quotient(emin, pmin, p)
    fac_cod = require_complete(
        factor_with_hints(iso.codomain.disc, fac_min.primes + (p,))
    )
    s1, s2, excluded, evidence = [], [], [], []
    for q, _ in fac_min.factors:
        if q == p:
            excluded.append((q, "above_p_overlap"))
            continue
        from .elliptic import ReductionData, reduction_at

        red = reduction_at(emin, q, fac_min)
        if red.kind == ADDITIVE:
            excluded.append((q, "additive"))
            continue
        if red.kind == NONSPLIT:
            excluded.append((q, "nonsplit"))
            continue
        assert red.kind == SPLIT
        # test 1: does the kernel point reduce to the singular point?
        red_pt = reduce_point(emin, pmin, q)
        sing = singular_point(emin, q)
        verdict_pt = S1 if red_pt is not None and red_pt == sing else S2
        # test 2: discriminant valuation ratio under the isogeny
        v, vp = fac_min.valuation(q), fac_cod.valuation(q)
        if vp == p * v:
            verdict_val = S2
        elif p * vp == v:
            verdict_val = S1
        else:
            raise ClassifierDisagreement(
                f"valuation ratio at {q} is neither p nor 1/p: {v} -> {vp}"
            )
        if verdict_pt != verdict_val:
            raise ClassifierDisagreement(
                f"classifiers disagree at {q}: point test {verdict_pt}, valuation test {verdict_val}"
            )
        (s1 if verdict_pt == S1 else s2).append(q)
        evidence.append((q, verdict_pt, verdict_val))
    for ell in s2:
        assert ell % p == 1, f"S2 prime {ell} is not 1 mod p; classification is broken"
    sets = DescentSets(
        p, tuple(sorted(s1)), tuple(sorted(s2)), (p,), tuple(excluded), tuple(evidence)
    )
    return ClassifiedCurve(sets, emin, pmin, iso, fac_min, fac_cod)


# --------------------------------------------------------- character matrix

@dataclass(frozen=True)
class CharacterMatrixSpec:
    p: int
    col_basis: tuple[int, ...]  # generators of Q(S1, p): the primes of S1
    row_conditions: tuple[int, ...]  # the primes of S2
    matrix: fplinalg.FpMatrix


def character_matrix(p: int, s1, s2, drop_trivial_rows: bool = False) -> CharacterMatrixSpec:
    """Matrix of the inclusion map Q(S1,p) -> sum of local units mod p-th powers.

    Entry (row ell, col q) is the residue character of q at ell.  With
    drop_trivial_rows, primes of S2 not congruent to 1 mod p contribute a
    trivial local group and are silently omitted (needed for the dual
    direction over Q); otherwise they are rejected.
    """
    s1 = tuple(s1)
    s2 = tuple(s2)
    if set(s1) & set(s2):
        raise InputError(f"S1 and S2 overlap: {sorted(set(s1) & set(s2))}")
    if p in s1 or p in s2:
        raise InputError(f"p = {p} may not appear in S1 or S2")
    rows = []
    for ell in s2:
        if ell % p != 1:
            if drop_trivial_rows:
                continue
            raise InputError(f"S2 prime {ell} is not congruent to 1 mod {p}")
        rows.append(ell)
    data = []
    for ell in rows:
        chi = residue_character(ell, p)
        data.append([character_eval(chi, q) for q in s1])
    mat = fplinalg.fp_matrix(
        p,
        data if rows else [],
        row_labels=[str(ell) for ell in rows],
        col_labels=[str(q) for q in s1],
    )
    if not rows:
        mat = fplinalg.FpMatrix(p, 0, len(s1), (), (), tuple(str(q) for q in s1))
    return CharacterMatrixSpec(p, s1, tuple(rows), mat)


def m_rank(p: int, s1, s2, drop_trivial_rows: bool = False) -> int:
    """m(S1, S2): the F_p-rank of the character matrix."""
    return fplinalg.rank(character_matrix(p, s1, s2, drop_trivial_rows).matrix)


# ------------------------------------------------------------ the sandwich

@dataclass(frozen=True)
class SandwichResult:
    p: int
    lower_dim: int
    upper_dim: int
    lower_support: tuple[int, ...]
    upper_support: tuple[int, ...]
    lower_basis: tuple[tuple[int, ...], ...]  # exponent vectors over lower_support
    upper_basis: tuple[tuple[int, ...], ...]


def _p_adic_unit_condition_row(support, p: int) -> list[int]:
    """Linear condition for a product of the support primes to be a p-adic p-th power.

    For a prime q != p the class of q in (1-units mod p-th powers) is
    measured by (q^(p-1) - 1)/p mod p.
    """
    row = []
    for q in support:
        u = pow(q, p - 1, p * p)
        row.append(((u - 1) // p) % p)
    return row


def sandwich_from_sets(p: int, s1, s2) -> SandwichResult:
    """Upper and lower sandwich groups from the descent sets, over Q.

    Q(S,p) is free on the primes of S for odd p (the sign is a p-th
    power), so both groups are kernels of explicit F_p matrices.
    """
    s1 = tuple(sorted(s1))
    chars = []
    for ell in sorted(s2):
        if ell % p == 1:
            chars.append(residue_character(ell, p))
    upper_support = tuple(sorted(set(s1) | {p}))
    upper_rows = [[character_eval(chi, q) for q in upper_support] for chi in chars]
    upper_mat = fplinalg.fp_matrix(p, upper_rows or [[0] * len(upper_support)])
    if not upper_rows:
        upper_mat = fplinalg.FpMatrix(p, 0, len(upper_support), ())
    upper_basis = fplinalg.kernel_basis(upper_mat)
    lower_support = s1
    lower_rows = [[character_eval(chi, q) for q in lower_support] for chi in chars]
    lower_rows.append(_p_adic_unit_condition_row(lower_support, p))
    lower_mat = fplinalg.fp_matrix(p, lower_rows) if lower_support else fplinalg.FpMatrix(
        p, len(lower_rows), 0, ()
    )
    lower_basis = fplinalg.kernel_basis(lower_mat)
    res = SandwichResult(
        p,
        len(lower_basis),
        len(upper_basis),
        lower_support,
        upper_support,
        tuple(lower_basis),
        tuple(upper_basis),
    )
    assert res.lower_dim <= res.upper_dim
    return res


def selmer_sandwich(e: Curve, pt: Point, p: int) -> SandwichResult:
    """Sandwich for the isogeny direction defined by the rational kernel point."""
    cls = classify_primes(e, pt, p)
    return sandwich_from_sets(p, cls.sets.s1, cls.sets.s2)
