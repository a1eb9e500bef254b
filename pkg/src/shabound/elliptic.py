"""Long-Weierstrass elliptic curve models over Q.

Exact invariants, the group law on rational points, globally minimal
models (Laska-Kraus-Connell), reduction-type classification at every
prime and singular points of reduced models.  No floating point anywhere:
coordinates are Fractions, coefficients are ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import polys
from .arith import Factorization, factor, is_prime, require_complete, valuation
from .errors import InputError, ShaboundError, SingularModel

Q = Fraction

# a point is None (infinity) or an exact affine pair
Point = tuple[Fraction, Fraction] | None
INFINITY: Point = None


@dataclass(frozen=True)
class Curve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def b2(self) -> int:
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self) -> int:
        return (
            self.a1**2 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3**2
            - self.a4**2
        )

    @property
    def c4(self) -> int:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> int:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return Q(self.c4**3, self.disc)

    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)


def invariants(a1: int, a2: int, a3: int, a4: int, a6: int) -> Curve:
    """Build a curve from long Weierstrass coefficients; rejects singular models."""
    e = Curve(a1, a2, a3, a4, a6)
    if e.disc == 0:
        raise SingularModel(f"discriminant 0 for {e.ainvs()}")
    assert e.c4**3 - e.c6**2 == 1728 * e.disc
    assert 4 * e.b8 == e.b2 * e.b6 - e.b4**2
    return e


def on_curve(e: Curve, pt: Point) -> bool:
    if pt is None:
        return True
    x, y = Q(pt[0]), Q(pt[1])
    return y * y + e.a1 * x * y + e.a3 * y == x**3 + e.a2 * x * x + e.a4 * x + e.a6


def _require_on_curve(e: Curve, pt: Point) -> None:
    if not on_curve(e, pt):
        raise InputError(f"point {pt} is not on the curve {e.ainvs()}")


def negate(e: Curve, pt: Point) -> Point:
    if pt is None:
        return None
    x, y = pt
    return (x, -y - e.a1 * x - e.a3)


def add_points(e: Curve, p: Point, q: Point) -> Point:
    """Group law. Inputs are checked against the curve equation."""
    _require_on_curve(e, p)
    _require_on_curve(e, q)
    if p is None:
        return q
    if q is None:
        return p
    x1, y1 = Q(p[0]), Q(p[1])
    x2, y2 = Q(q[0]), Q(q[1])
    a1, a2, a3, a4, a6 = e.ainvs()
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def multiply_point(e: Curve, n: int, pt: Point) -> Point:
    """n*P by double-and-add."""
    if n < 0:
        return multiply_point(e, -n, negate(e, pt))
    result: Point = None
    addend = pt
    while n:
        if n & 1:
            result = add_points(e, result, addend)
        addend = add_points(e, addend, addend)
        n >>= 1
    return result


def has_order(e: Curve, pt: Point, p: int) -> bool:
    """True iff pt has exact order p (p an odd prime)."""
    _require_on_curve(e, pt)
    if pt is None:
        return False
    return multiply_point(e, p, pt) is None


def point_order(e: Curve, pt: Point, bound: int = 30) -> int | None:
    """Order of pt if at most `bound`, else None."""
    acc: Point = None
    for n in range(1, bound + 1):
        acc = add_points(e, acc, pt)
        if acc is None:
            return n
    return None


# ------------------------------------------------------------- transforms

@dataclass(frozen=True)
class Transformation:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    @staticmethod
    def identity() -> "Transformation":
        return Transformation(Q(1), Q(0), Q(0), Q(0))

    def is_identity(self) -> bool:
        return self.u == 1 and self.r == 0 and self.s == 0 and self.t == 0


def apply_transform(e: Curve, tr: Transformation) -> Curve:
    """The model E' obtained from E by the coordinate change (must stay integral)."""
    u, r, s, t = tr.u, tr.r, tr.s, tr.t
    a1, a2, a3, a4, a6 = (Q(a) for a in e.ainvs())
    na1 = (a1 + 2 * s) / u
    na2 = (a2 - s * a1 + 3 * r - s * s) / u**2
    na3 = (a3 + r * a1 + 2 * t) / u**3
    na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
    na6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
    coeffs = (na1, na2, na3, na4, na6)
    if any(c.denominator != 1 for c in coeffs):
        raise ShaboundError(f"transform {tr} does not yield an integral model")
    return invariants(*(int(c) for c in coeffs))


def transform_point(pt: Point, tr: Transformation) -> Point:
    """Image of a point of E on the transformed model E'."""
    if pt is None:
        return None
    x, y = Q(pt[0]), Q(pt[1])
    u, r, s, t = tr.u, tr.r, tr.s, tr.t
    nx = (x - r) / u**2
    ny = (y - s * (x - r) - t) / u**3
    return (nx, ny)


# ---------------------------------------------------------- minimal model

def _kraus_ok_2(c4: int, c6: int) -> bool:
    """Kraus's condition at 2 for (c4, c6) to come from an integral model."""
    if c6 % 4 == 3:  # c6 = -1 mod 4
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _kraus_ok_3(c6: int) -> bool:
    """Kraus's condition at 3: v_3(c6) != 2."""
    return c6 % 27 not in (9, 18)


def _curve_from_c4c6(c4: int, c6: int) -> Curve:
    """Connell's reconstruction of an integral model from admissible (c4, c6)."""
    b2 = (-c6) % 12
    if b2 % 4 not in (0, 1):
        raise ShaboundError(f"(c4, c6) = ({c4}, {c6}) fails the mod-12 normalization")
    num_b4 = b2 * b2 - c4
    if num_b4 % 24:
        raise ShaboundError("b4 not integral: (c4, c6) not admissible")
    b4 = num_b4 // 24
    num_b6 = -(b2**3) + 36 * b2 * b4 - c6
    if num_b6 % 216:
        raise ShaboundError("b6 not integral: (c4, c6) not admissible")
    b6 = num_b6 // 216
    a1 = b2 % 2
    a2 = (b2 - a1) // 4
    a3 = b6 % 2
    a6 = (b6 - a3) // 4
    if (b4 - a1 * a3) % 2:
        raise ShaboundError("b4 parity obstruction: (c4, c6) not admissible")
    a4 = (b4 - a1 * a3) // 2
    e = invariants(a1, a2, a3, a4, a6)
    assert e.c4 == c4 and e.c6 == c6
    return e


def _reduce_model(e: Curve) -> Curve:
    """Normalize by (r, s, t) to a1, a3 in {0,1} and a2 in {-1,0,1}."""
    s = -(e.a1 // 2)
    a = e.a2 - s * e.a1 - s * s
    r = -((a + 1) // 3)
    t = -((e.a3 + r * e.a1) // 2)
    return apply_transform(e, Transformation(Q(1), Q(r), Q(s), Q(t)))


def _transform_between(e: Curve, emin: Curve, u: int) -> Transformation:
    """The (u, r, s, t) carrying e to emin; solved from the a-invariant relations."""
    s = (u * emin.a1 - e.a1) / Q(2)
    r = (u**2 * emin.a2 - e.a2 + s * e.a1 + s * s) / Q(3)
    t = (u**3 * emin.a3 - e.a3 - r * e.a1) / Q(2)
    tr = Transformation(Q(u), r, s, t)
    assert apply_transform(e, tr).ainvs() == emin.ainvs()
    return tr


def minimal_model(
    e: Curve, disc_factorization: Factorization | None = None
) -> tuple[Curve, Transformation]:
    """Globally minimal model over Q plus the transformation reaching it.

    Needs the full factorization of the discriminant (computed here when
    not supplied); an exhausted factor budget propagates as
    IncompleteFactorization.
    """
    c4, c6, disc = e.c4, e.c6, e.disc
    if disc_factorization is None:
        disc_factorization = require_complete(factor(disc))
    assert disc_factorization.value == disc
    u = 1
    for q, eq in disc_factorization.factors:
        if eq < 12:
            continue
        dq = min(
            valuation(c4, q) // 4 if c4 else eq,
            valuation(c6, q) // 6 if c6 else eq,
            eq // 12,
        )
        if q == 2:
            while dq > 0 and not _kraus_ok_2(c4 // 2 ** (4 * dq), c6 // 2 ** (6 * dq)):
                dq -= 1
        elif q == 3:
            while dq > 0 and not _kraus_ok_3(c6 // 3 ** (6 * dq)):
                dq -= 1
        u *= q**dq
    if u == 1:
        return e, Transformation.identity()
    emin = _reduce_model(_curve_from_c4c6(c4 // u**4, c6 // u**6))
    tr = _transform_between(e, emin, u)
    # per-prime certificate away from 2 and 3 (Kraus handles those corners)
    for q, eq in disc_factorization.factors:
        eq_min = eq - 12 * valuation(u, q) if u % q == 0 else eq
        if q >= 5 and eq_min >= 12 and emin.c4 != 0:
            assert valuation(emin.c4, q) < 4, f"model not minimal at {q}"
    return emin, tr


def minimal_disc_factorization(
    fac: Factorization, tr: Transformation
) -> Factorization:
    """Factorization of the minimal discriminant, given the input one and the transform."""
    u = tr.u
    assert u.denominator == 1
    u = int(u)
    if u == 1:
        return fac
    factors = []
    value = fac.sign
    for q, eq in fac.factors:
        eq -= 12 * valuation(u, q) if u % q == 0 else 0
        if eq:
            factors.append((q, eq))
            value *= q**eq
    return Factorization(value, fac.sign, tuple(factors))


# ------------------------------------------------------------- reduction

GOOD = "good"
SPLIT = "split_multiplicative"
NONSPLIT = "nonsplit_multiplicative"
ADDITIVE = "additive"


@dataclass(frozen=True)
class ReductionData:
    q: int
    kind: str
    v_disc: int
    v_c4: int
    minimal_model: Curve


def _split_by_tangent_slopes(e: Curve, q: int) -> bool:
    """Split iff the tangent slopes at the node are rational over F_q.

    After translating the singular point to the origin the quadratic part
    is y^2 + a1 x y - (3 x0 + a2) x^2, so the slopes satisfy
    z^2 + a1 z - (3 x0 + a2) = 0.
    """
    x0, _ = singular_point(e, q)
    f = [-(3 * x0 + e.a2) % q, e.a1 % q, 1]
    return polys.has_root_modq(f, q)


def reduction_at(e: Curve, q: int, disc_factorization: Factorization | None = None) -> ReductionData:
    """Reduction type of the global minimal model at the prime q."""
    if not is_prime(q):
        raise InputError(f"{q} is not prime")
    emin, _ = minimal_model(e, disc_factorization)
    v_disc = valuation(emin.disc, q)
    if v_disc == 0:
        return ReductionData(q, GOOD, 0, 0, emin)
    v_c4 = valuation(emin.c4, q) if emin.c4 else v_disc  # c4 = 0: treat as +inf
    if v_c4 > 0:
        return ReductionData(q, ADDITIVE, v_disc, v_c4, emin)
    if q >= 5:
        split = pow(-emin.c6 % q, (q - 1) // 2, q) == 1
        assert split == _split_by_tangent_slopes(emin, q), "split-test oracles disagree"
    else:
        split = _split_by_tangent_slopes(emin, q)
    kind = SPLIT if split else NONSPLIT
    return ReductionData(q, kind, v_disc, 0, emin)


def singular_point(e: Curve, q: int) -> tuple[int, int]:
    """The unique singular point of the reduced minimal model mod q.

    The caller is expected to pass a q-minimal model with bad reduction;
    good reduction is rejected.
    """
    if e.disc % q != 0:
        raise InputError(f"good reduction at {q}: no singular point")
    if q <= 3:
        a1, a2, a3, a4, a6 = e.ainvs()
        for x in range(q):
            for y in range(q):
                eqn = (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % q
                fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
                fy = (2 * y + a1 * x + a3) % q
                if eqn == 0 and fx == 0 and fy == 0:
                    return (x, y)
        raise ShaboundError(f"no singular point found mod {q}")
    # q >= 5: x0 is the multiple root of 4x^3 + b2 x^2 + 2 b4 x + b6 mod q
    g = [e.b6 % q, 2 * e.b4 % q, e.b2 % q, 4 % q]
    d = polys.fgcd(g, polys.fderiv(g, q), q)
    if len(d) == 3:  # cusp: (x - x0)^2; take the double root
        d = polys.fgcd(d, polys.fderiv(d, q), q)
    if len(d) != 2:
        raise ShaboundError(f"multiple-root extraction failed mod {q}")
    x0 = (-d[0]) % q
    y0 = -(e.a1 * x0 + e.a3) * pow(2, -1, q) % q
    return (x0, y0)


def reduce_point(e: Curve, pt: Point, q: int) -> tuple[int, int] | None:
    """Reduce a rational point mod q; None is the point at infinity."""
    if pt is None:
        return None
    x, y = Q(pt[0]), Q(pt[1])
    if x.denominator % q == 0 or y.denominator % q == 0:
        return None
    return (
        x.numerator * pow(x.denominator, -1, q) % q,
        y.numerator * pow(y.denominator, -1, q) % q,
    )
