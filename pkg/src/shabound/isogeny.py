"""p-isogenies with rational kernel via Velu's formulas.

Two entry points: a kernel generated by a rational point of order p, or a
rational kernel x-polynomial of degree (p-1)/2 (for subgroups whose
points are irrational but Galois-stable).  Codomains come back globally
minimal so discriminant valuations feed the descent classifier directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import sympy

from . import polys
from .elliptic import (
    Curve,
    Point,
    Transformation,
    has_order,
    invariants,
    minimal_model,
    multiply_point,
    on_curve,
    transform_point,
)
from .errors import InputError

Q = Fraction


# ----------------------------------------------------- division polynomials

@lru_cache(maxsize=None)
def _div_poly_f(ainvs: tuple[int, int, int, int, int], n: int) -> tuple[Fraction, ...]:
    """x-part f_n of the n-division polynomial: psi_n = f_n * (psi_2 if n even)."""
    e = Curve(*ainvs)
    b2, b4, b6, b8 = e.b2, e.b4, e.b6, e.b8

    def f(m):
        return list(_div_poly_f(ainvs, m))

    if n == 0:
        return ()
    if n in (1, 2):
        return (Q(1),)
    if n == 3:
        return tuple(Q(c) for c in [b8, 3 * b6, 3 * b4, b2, 3])
    if n == 4:
        return tuple(
            Q(c)
            for c in [
                b4 * b8 - b6**2,
                b2 * b8 - b4 * b6,
                10 * b8,
                10 * b6,
                5 * b4,
                b2,
                2,
            ]
        )
    t_poly = [Q(b6), Q(2 * b4), Q(b2), Q(4)]  # psi_2^2 as a polynomial in x
    m, rem = divmod(n, 2)
    if rem:
        a = polys.qmul(f(m + 2), polys.qmul(f(m), polys.qmul(f(m), f(m))))
        b = polys.qmul(f(m - 1), polys.qmul(f(m + 1), polys.qmul(f(m + 1), f(m + 1))))
        t2 = polys.qmul(t_poly, t_poly)
        if m % 2 == 0:
            res = polys.qadd(polys.qmul(a, t2), polys.qscale(b, -1))
        else:
            res = polys.qadd(a, polys.qscale(polys.qmul(b, t2), -1))
    else:
        inner = polys.qadd(
            polys.qmul(f(m + 2), polys.qmul(f(m - 1), f(m - 1))),
            polys.qscale(polys.qmul(f(m - 2), polys.qmul(f(m + 1), f(m + 1))), -1),
        )
        res = polys.qmul(f(m), inner)
    return tuple(res)


def division_poly_x(e: Curve, n: int) -> list[Fraction]:
    """For odd n: the full n-division polynomial as a polynomial in x."""
    if n % 2 == 0:
        raise InputError("division_poly_x is for odd n")
    return list(_div_poly_f(e.ainvs(), n))


# ------------------------------------------------------------- isogeny data

@dataclass(frozen=True)
class IsogenyData:
    p: int
    domain: Curve
    kernel_gen: Point  # None when built from a kernel polynomial
    codomain: Curve  # globally minimal
    codomain_raw: Curve  # direct Velu output (integralized)
    to_minimal: Transformation  # codomain_raw -> codomain
    kernel_x_poly: tuple[Fraction, ...]  # monic, degree (p-1)/2
    kernel_points: tuple[tuple[Fraction, Fraction], ...] | None


def _velu_sums(e: Curve, xs: list[Fraction]) -> tuple[Fraction, Fraction]:
    """(t, w) from the kernel x-coordinates; y-free since p is odd."""
    b2, b4, b6 = e.b2, e.b4, e.b6
    t = w = Q(0)
    for x in xs:
        tq = 6 * x * x + b2 * x + b4
        uq = 4 * x**3 + b2 * x * x + 2 * b4 * x + b6
        t += tq
        w += uq + x * tq
    return t, w


def _integralize(a1: Fraction, a2: Fraction, a3: Fraction, a4: Fraction, a6: Fraction):
    """Scale a rational model to an integral one; returns (curve, scale d).

    The scaling is the u = 1/d change of coordinates, so points move by
    (x, y) -> (d^2 x, d^3 y).
    """
    d = 1
    coeffs = (a1, a2, a3, a4, a6)
    weights = (1, 2, 3, 4, 6)
    while True:
        bad = [c for c, wt in zip(coeffs, weights) if (c * d**wt).denominator != 1]
        if not bad:
            break
        d *= lcm(*(int((c * d**wt).denominator) for c, wt in zip(coeffs, weights)))
    model = invariants(*(int(c * d**wt) for c, wt in zip(coeffs, weights)))
    return model, d


def _finish(e: Curve, p: int, xs: list[Fraction], kernel_gen, kernel_points) -> IsogenyData:
    t, w = _velu_sums(e, xs)
    a1, a2, a3 = Q(e.a1), Q(e.a2), Q(e.a3)
    a4 = e.a4 - 5 * t
    a6 = e.a6 - e.b2 * t - 7 * w
    raw, d = _integralize(a1, a2, a3, a4, a6)
    emin, tr = minimal_model(raw)
    if d != 1:
        # fold the integralizing scaling into the transformation bookkeeping:
        # raw coordinates are already (d^2 x, d^3 y) images of the Velu output
        tr = Transformation(tr.u / d, tr.r / d**2, tr.s / d, tr.t / d**3)
        raw_for_points = raw
    else:
        raw_for_points = raw
    kpoly = tuple(polys.qpow_x_shift(xs))
    # the kernel polynomial always divides the p-division polynomial
    assert polys.qdivides(list(kpoly), division_poly_x(e, p))
    return IsogenyData(
        p, e, kernel_gen, emin, raw_for_points, tr, kpoly,
        tuple(kernel_points) if kernel_points is not None else None,
    )


def velu_quotient(e: Curve, pt: Point, p: int) -> IsogenyData:
    """The quotient isogeny E -> E/<P> for a rational point P of odd prime order p."""
    if p < 3 or p % 2 == 0:
        raise InputError("p must be an odd prime")
    if not has_order(e, pt, p):
        raise InputError(f"point {pt} does not have order {p}")
    # multiples i*P for i = 1..(p-1)/2 give one representative per +-pair
    reps = []
    acc: Point = None
    for _ in range((p - 1) // 2):
        acc = _add(e, acc, pt)
        reps.append(acc)
    xs = [r[0] for r in reps]
    return _finish(e, p, xs, pt, reps)


def _add(e, a, b):
    from .elliptic import add_points

    return add_points(e, a, b)


def velu_quotient_from_kernel_poly(e: Curve, h: list[Fraction], p: int) -> IsogenyData:
    """Quotient by a rational subgroup given by its kernel x-polynomial.

    h must be monic of degree (p-1)/2, divide the p-division polynomial,
    and its root set must be stable under the doubling map (subgroup
    rationality check).
    """
    h = [Q(c) for c in h]
    if len(h) != (p - 1) // 2 + 1 or h[-1] != 1:
        raise InputError(f"kernel polynomial must be monic of degree {(p - 1) // 2}")
    if not polys.qdivides(h, division_poly_x(e, p)):
        raise InputError("kernel polynomial does not divide the p-division polynomial")
    if not _stable_under_doubling(e, h):
        raise InputError("kernel polynomial roots are not closed under doubling")
    d = (p - 1) // 2
    ps = polys.power_sums(h, 3)
    b2, b4, b6 = e.b2, e.b4, e.b6
    p1, p2, p3 = ps[0], ps[1], ps[2]
    t = 6 * p2 + b2 * p1 + d * b4
    w = 10 * p3 + 2 * b2 * p2 + 3 * b4 * p1 + d * b6
    a4 = e.a4 - 5 * t
    a6 = e.a6 - e.b2 * t - 7 * w
    raw, dd = _integralize(Q(e.a1), Q(e.a2), Q(e.a3), a4, a6)
    emin, tr = minimal_model(raw)
    if dd != 1:
        tr = Transformation(tr.u / dd, tr.r / dd**2, tr.s / dd, tr.t / dd**3)
    return IsogenyData(p, e, None, emin, raw, tr, tuple(h), None)


def _x_double_resultant(e: Curve, h: list[Fraction], target) -> list[Fraction]:
    """Resultant_z(h(z), target(X, z)); helper for subgroup stability."""
    x, z = sympy.symbols("x z")
    hz = sum(sympy.Rational(c) * z**i for i, c in enumerate(h))
    res = sympy.resultant(sympy.Poly(hz, z), sympy.Poly(target(x, z), z), z)
    poly = sympy.Poly(res, x)
    return [Q(str(c)) for c in reversed(poly.all_coeffs())]


def _stable_under_doubling(e: Curve, h: list[Fraction]) -> bool:
    """True iff the root set of h is closed under the x-coordinate doubling map."""
    import sympy

    x, z = sympy.symbols("x z")
    a1, a2, a3, a4, a6 = e.ainvs()
    b2, b4, b6, b8 = e.b2, e.b4, e.b6, e.b8
    # x(2Q) = (z^4 - b4 z^2 - 2 b6 z - b8) / (4 z^3 + b2 z^2 + 2 b4 z + b6)
    num = z**4 - b4 * z**2 - 2 * b6 * z - b8
    den = 4 * z**3 + b2 * z**2 + 2 * b4 * z + b6
    g = _x_double_resultant(e, h, lambda xx, zz: xx * den.subs(z, zz) - num.subs(z, zz))
    g = polys.qmonic(g)
    hh = polys.qmonic([Q(c) for c in h])
    # g's roots are the doubled x-coordinates; closure means radical(g) == h
    rad = polys.qexact_div(g, polys.qgcd(g, polys.qderiv(g))) if polys.qgcd(g, polys.qderiv(g)) != [Q(1)] else g
    rad = polys.qmonic(rad)
    return rad == hh or g == hh


def push_point(iso: IsogenyData, pt: Point) -> Point:
    """Image of a rational point of the domain on the (minimal) codomain."""
    if not on_curve(iso.domain, pt):
        raise InputError(f"point {pt} is not on the isogeny domain")
    if pt is None:
        return None
    if polys.qeval(list(iso.kernel_x_poly), Q(pt[0])) == 0:
        return None
    if iso.kernel_points is None:
        raise InputError("push_point needs a kernel given by rational points")
    e = iso.domain
    a1, a3 = e.a1, e.a3
    a2, a4 = e.a2, e.a4
    x, y = Q(pt[0]), Q(pt[1])
    xx, yy = x, y
    for xq, yq in iso.kernel_points:
        gx = 3 * xq * xq + 2 * a2 * xq + a4 - a1 * yq
        gy = -2 * yq - a1 * xq - a3
        tq = 2 * gx - a1 * gy
        uq = gy * gy
        dxi = x - xq
        xx += tq / dxi + uq / dxi**2
        yy -= (
            uq * (2 * y + a1 * x + a3) / dxi**3
            + tq * (a1 * dxi + y - yq) / dxi**2
            + (a1 * uq - gx * gy) / dxi**2
        )
    image_raw = (xx, yy)
    return transform_point(image_raw, iso.to_minimal)


def dual_kernel_poly(iso: IsogenyData) -> list[Fraction]:
    """Kernel x-polynomial of the dual isogeny, on the minimal codomain model.

    The dual kernel is the image of the full p-torsion of the domain; its
    x-coordinates are extracted by a resultant against the Velu x-map and
    taking the radical.
    """
    e, p = iso.domain, iso.p
    h = [Q(c) for c in iso.kernel_x_poly]
    psi = division_poly_x(e, p)
    a_poly = polys.qexact_div(polys.qmonic(psi), h)  # x-coords of E[p] outside the kernel
    # x-map numerator over denominator h^2
    hq_list = [polys.qexact_div(h, [-xq, Q(1)]) for xq in _roots_of(h)]
    if hq_list is None:
        raise InputError("dual kernel extraction needs a split kernel polynomial")
    b2, b4, b6 = e.b2, e.b4, e.b6
    n_poly = polys.qmul([Q(0), Q(1)], polys.qmul(h, h))
    for xq, hq in zip(_roots_of(h), hq_list):
        tq = 6 * xq * xq + b2 * xq + b4
        uq = 4 * xq**3 + b2 * xq * xq + 2 * b4 * xq + b6
        n_poly = polys.qadd(n_poly, polys.qscale(polys.qmul(hq, h), tq))
        n_poly = polys.qadd(n_poly, polys.qscale(polys.qmul(hq, hq), uq))
    d_poly = polys.qmul(h, h)
    # g(X) = Res_z(A(z), X * D(z) - N(z)): roots are the image x-coordinates
    x, z = sympy.symbols("x z")
    az = sympy.Poly([sympy.Rational(c) for c in reversed(a_poly)], z)
    dz = sum(sympy.Rational(c) * z**i for i, c in enumerate(d_poly))
    nz = sum(sympy.Rational(c) * z**i for i, c in enumerate(n_poly))
    res = sympy.resultant(az, sympy.Poly(x * dz - nz, z), z)
    g = [Q(str(c)) for c in reversed(sympy.Poly(res, x).all_coeffs())]
    g = polys.qmonic(g)
    gg = polys.qgcd(g, polys.qderiv(g))
    rad = polys.qmonic(polys.qexact_div(g, gg)) if len(gg) > 1 else g
    # move onto the minimal codomain model: x_min = (x_raw - r) / u^2
    tr = iso.to_minimal
    shifted = _compose_affine(rad, tr)
    return shifted


def _roots_of(h: list[Fraction]) -> list[Fraction]:
    """Rational roots of a monic polynomial that splits over Q."""
    import sympy

    x = sympy.symbols("x")
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(h)], x)
    roots = sympy.roots(poly)
    out = []
    for r, mult in roots.items():
        if not r.is_rational:
            raise InputError("kernel polynomial does not split over Q")
        out.extend([Q(str(r))] * mult)
    return sorted(out)


def _compose_affine(h: list[Fraction], tr: Transformation) -> list[Fraction]:
    """Monic polynomial whose roots are (roots(h) - r) / u^2."""
    u2, r = tr.u**2, tr.r
    # h(u^2 X + r), renormalized monic
    out = [Q(0)]
    xpow = [Q(1)]
    shift = [r, u2]
    for c in h:
        out = polys.qadd(out, polys.qscale(xpow, c))
        xpow = polys.qmul(xpow, shift)
    return polys.qmonic(out)
