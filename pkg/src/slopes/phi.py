"""Twisted polynomials over Q((x)) with a q-dilation twist, their Newton
polygons, and the unique factorization into single-slope factors.

The twist phi sends x to qx (q rational, |q| != 1), an isometry for the
x-adic valuation, and acts on polynomials by the rule phi * a = phi(a) * phi.
The Newton polygon of a monic P = sum a_i phi^i is the concave hull of the
points (i, -v(a_{n-i})); it equals the module polygon of K<phi>/K<phi>P.

Factorization peels the lowest-slope factor from the left by a graded
Newton lift: pick a slope s strictly between the lowest break and the rest,
then the s-Gauss valuation makes the left factor leading-dominated and the
cofactor constant-dominated, so each graded level of the residual splits
uniquely into corrections of the two factors.  The outer loop is a genuine
Newton step (the residual's s-valuation gain doubles); a residual that ever
fails to improve raises PrecisionError rather than returning a wrong factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .degrees import DegreeValue, SlopeError, SlopeKey
from .polygon import NewtonPolygon, polygon_from_points
from .series import PrecisionError, Series

DEFAULT_PRECISION = 40
NEWTON_CAP = 64


class TwistError(ValueError):
    pass


@dataclass(frozen=True)
class TwistSpec:
    """q-dilation twist x -> qx."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.q == 0 or self.q in (1, -1):
            raise TwistError("q must be nonzero and not a root of unity")

    def apply(self, s: Series, power: int = 1) -> Series:
        return s.dilate(self.q**power)

    def to_json(self):
        return {"q": str(self.q)}


@dataclass(frozen=True)
class TwistedPolynomial:
    """Monic polynomial sum a_i phi^i, coefficients low degree first."""

    coeffs: tuple[Series, ...]
    twist: TwistSpec

    def __post_init__(self):
        if not self.coeffs:
            raise TwistError("empty twisted polynomial")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        lead = self.coeffs[-1]
        return lead.eq_to_precision(Series.one())

    def coeff(self, i: int) -> Series:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Series.zero()

    def truncate(self, prec: int) -> "TwistedPolynomial":
        return TwistedPolynomial(
            tuple(c.truncate(prec) for c in self.coeffs), self.twist
        )

    def precision(self) -> Optional[int]:
        precs = [c.prec for c in self.coeffs if c.prec is not None]
        return min(precs) if precs else None

    def to_json(self):
        return {
            "twist": self.twist.to_json(),
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def __repr__(self):
        return " + ".join(
            f"({c!r})phi^{i}" for i, c in enumerate(self.coeffs)
        )


def make_poly(coeffs: Sequence[Series], twist: TwistSpec) -> TwistedPolynomial:
    return TwistedPolynomial(tuple(coeffs), twist)


def twisted_mul(p: TwistedPolynomial, q: TwistedPolynomial) -> TwistedPolynomial:
    """Product in K<phi>: (a phi^i)(b phi^j) = a phi^i(b) phi^(i+j)."""
    if p.twist != q.twist:
        raise TwistError("twist mismatch")
    out = [Series.zero() for _ in range(p.degree + q.degree + 1)]
    for i, a in enumerate(p.coeffs):
        if a.is_zero() and a.prec is None:
            continue
        for j, b in enumerate(q.coeffs):
            term = a * p.twist.apply(b, i)
            out[i + j] = out[i + j] + term
    return TwistedPolynomial(tuple(out), p.twist)


def np_twisted(valuations: Sequence[Optional[int]]) -> NewtonPolygon:
    """Newton polygon from the valuations of a_0..a_n (monic: v(a_n) = 0).

    The polygon is the concave hull of the points (i, -v(a_{n-i})); None
    marks a coefficient that is zero (to precision), which is rejected in
    position 0 because the module polygon is then indeterminate.
    """
    vals = list(valuations)
    n = len(vals) - 1
    if n < 1:
        raise SlopeError("twisted polygon needs degree >= 1")
    if vals[n] != 0:
        raise SlopeError("polynomial must be monic (v(a_n) = 0)")
    if all(v is None for v in vals[:-1]) or vals[0] is None:
        raise SlopeError(
            "indeterminate polygon: constant coefficient zero to precision"
        )
    points = []
    for i in range(n + 1):
        v = vals[n - i]
        if v is None:
            continue
        points.append((i, DegreeValue.rational(-v)))
    poly = polygon_from_points(points)
    if poly.total_rank() != n:
        raise SlopeError("polygon lost its right endpoint")
    return poly


def np_of_poly(p: TwistedPolynomial) -> NewtonPolygon:
    return np_twisted([c.valuation_or(None) for c in p.coeffs])


# -- slope factorization -------------------------------------------------------


def _gauss_val(p: TwistedPolynomial, s: Fraction) -> Optional[Fraction]:
    """min over j of v(a_j) - s*j; None when zero to precision."""
    best = None
    for j, c in enumerate(p.coeffs):
        v = c.valuation_or(None)
        if v is None:
            continue
        w = Fraction(v) - s * j
        if best is None or w < best:
            best = w
    return best


def _poly_sub(p: TwistedPolynomial, q: TwistedPolynomial) -> TwistedPolynomial:
    d = max(p.degree, q.degree)
    return TwistedPolynomial(
        tuple(p.coeff(i) - q.coeff(i) for i in range(d + 1)), p.twist
    )


def _representative(s: Series, prec: int) -> Series:
    """Zero-extend a truncated series to a specific representative known to
    ``prec``; exact series pass through unchanged."""
    if s.prec is None or s.prec >= prec:
        return s
    return Series(s.vmin, s.coeffs, prec)


def _split_once(
    p: TwistedPolynomial, prec: int
) -> tuple[TwistedPolynomial, TwistedPolynomial]:
    """Split monic p = L * C with L the single lowest-slope factor.

    The lift runs against a zero-extended representative of p at the
    internal precision; the returned factors multiply back to p wherever
    p's own coefficients are certified.
    """
    p = TwistedPolynomial(
        tuple(_representative(c, prec) for c in p.coeffs), p.twist
    )
    poly = np_of_poly(p)
    segs = poly.segments
    lowest = segs[-1].reduced()
    second = segs[-2].reduced()
    m = segs[-1].rk
    n = p.degree
    s = (lowest.deg.value + second.deg.value) / 2
    twist = p.twist
    q = twist.q

    # initial approximations: L = phi^m, C = phi^(n-m) + phi^{-m}(a_m)
    zero = Series.zero(prec)
    lser = [zero] * m + [Series.one()]
    cser = [zero] * (n - m + 1)
    cser[-1] = Series.one()
    cser[0] = twist.apply(p.coeff(m).truncate(prec), -m)
    lfac = TwistedPolynomial(tuple(lser), twist)
    cfac = TwistedPolynomial(tuple(cser), twist)

    uc = cfac.coeffs[0].valuation()  # v of the cofactor's constant term
    alpha = cfac.coeffs[0].coeff(uc)

    def graded_solve(res: TwistedPolynomial):
        """Kill the lowest s-graded level of res: returns (dL, dC)."""
        w = _gauss_val(res, s)
        dl = [Series.zero(prec) for _ in range(m)]
        dc = [Series.zero(prec) for _ in range(n - m)]
        for j, cj in enumerate(res.coeffs):
            v = cj.valuation_or(None)
            if v is None or Fraction(v) - s * j != w:
                continue
            lead = cj.coeff(v)
            if j >= m:
                # phi^m * (dc_{j-m} x^v-ish): coefficient picks up q^(m*v)
                dc[j - m] = dc[j - m] + Series.monomial(
                    lead / q ** (m * v), v, prec
                )
            else:
                # dl_j * phi^j(c0): leading coeff alpha q^(j*uc) at x^uc
                dl[j] = dl[j] + Series.monomial(
                    lead / (alpha * q ** (j * uc)), v - uc, prec
                )
        return (
            TwistedPolynomial(tuple(dl + [Series.zero(prec)]), twist),
            TwistedPolynomial(tuple(dc + [Series.zero(prec)]), twist),
        )

    def add(a: TwistedPolynomial, b: TwistedPolynomial) -> TwistedPolynomial:
        d = max(a.degree, b.degree)
        return TwistedPolynomial(
            tuple(a.coeff(i) + b.coeff(i) for i in range(d + 1)), twist
        )

    def residual_done(res: TwistedPolynomial) -> bool:
        return all(c.is_zero() for c in res.coeffs)

    inner_cap = 4 * (prec + int(abs(s)) * n + n + 8) * max(
        1, s.denominator, lowest.deg.value.denominator
    )
    for _ in range(NEWTON_CAP):
        res = _poly_sub(p.truncate(prec), twisted_mul(lfac, cfac))
        if residual_done(res):
            break
        dl_total = TwistedPolynomial(
            tuple([Series.zero(prec)] * (m + 1)), twist
        )
        dc_total = TwistedPolynomial(
            tuple([Series.zero(prec)] * (n - m + 1)), twist
        )
        lin = res
        w_prev = _gauss_val(lin, s)
        inner = 0
        while not residual_done(lin):
            inner += 1
            if inner > inner_cap:
                raise PrecisionError(
                    "twisted factor lift failed to converge at this precision"
                )
            ul, ucr = graded_solve(lin)
            dl_total = add(dl_total, ul)
            dc_total = add(dc_total, ucr)
            # incremental update: the corrections are graded monomials, so
            # multiplying only them keeps each pass cheap
            lin = _poly_sub(
                lin, add(twisted_mul(ul, cfac), twisted_mul(lfac, ucr))
            )
            w_now = _gauss_val(lin, s)
            if w_now is not None and w_prev is not None and w_now <= w_prev:
                raise PrecisionError(
                    "residual valuation failed to increase during lift"
                )
            w_prev = w_now
        lfac = add(lfac, dl_total)
        cfac = add(cfac, dc_total)
    else:
        res = _poly_sub(p.truncate(prec), twisted_mul(lfac, cfac))
        if not residual_done(res):
            raise PrecisionError("Newton iteration cap reached before precision")
    return lfac.truncate(prec), cfac.truncate(prec)


def _lift_precision(p: TwistedPolynomial, precision: int) -> int:
    """Working precision with headroom for the valuation losses incurred by
    multiplying with negative-valuation coefficients."""
    poly = np_of_poly(p)
    variation = sum(abs(seg.deg.value) for seg in poly.segments)
    return precision + int(variation) + p.degree + 4


def slope_factor(
    p: TwistedPolynomial, precision: int = DEFAULT_PRECISION
) -> list[TwistedPolynomial]:
    """Unique slope factorization, factors ordered by increasing slope from
    the left; each factor is monic with a one-slope polygon and the twisted
    product of the factors reproduces p to the requested precision.

    Returned factors carry extra precision headroom so their re-multiplied
    product is verifiable modulo x^precision.
    """
    if not p.is_monic():
        raise TwistError("slope factorization expects a monic polynomial")
    poly = np_of_poly(p)
    if len(poly.segments) <= 1:
        return [p]
    lfac, cfac = _split_once(p, _lift_precision(p, precision))
    if len(np_of_poly(lfac).segments) != 1:
        raise PrecisionError("left factor polygon failed to be one-sloped")
    return [lfac] + slope_factor(cfac, precision)


# -- phi-matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class PhiMatrix:
    """Matrix of the semilinear map Phi(v) = A phi(v) on K^r."""

    entries: tuple[tuple[Series, ...], ...]
    twist: TwistSpec

    @property
    def rank(self) -> int:
        return len(self.entries)

    def det_series(self) -> Series:
        return _series_det(self.entries)

    def to_json(self):
        return {
            "twist": self.twist.to_json(),
            "matrix": [[c.to_json() for c in row] for row in self.entries],
        }


def _series_det(m) -> Series:
    n = len(m)
    if n == 0:
        return Series.one()
    if n == 1:
        return m[0][0]
    total = Series.zero()
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
        term = m[0][j] * _series_det(minor)
        if j % 2:
            term = -term
        total = total + term
    return total


def dm_degree(phi: PhiMatrix) -> DegreeValue:
    """Dieudonne-Manin style degree -v(det Phi), an exact rational."""
    d = phi.det_series()
    v = d.valuation()
    if v is None:
        raise SlopeError("matrix determinant is zero; degree undefined")
    return DegreeValue.rational(-v)


def dm_slope(phi: PhiMatrix) -> SlopeKey:
    return SlopeKey(dm_degree(phi), phi.rank)


def tensor_phi(a: PhiMatrix, b: PhiMatrix) -> PhiMatrix:
    """Kronecker product of the matrices (tensor of phi-modules)."""
    if a.twist != b.twist:
        raise TwistError("twist mismatch")
    entries = tuple(
        tuple(
            a.entries[i1][j1] * b.entries[i2][j2]
            for j1 in range(a.rank)
            for j2 in range(b.rank)
        )
        for i1 in range(a.rank)
        for i2 in range(b.rank)
    )
    return PhiMatrix(entries, a.twist)


def diagonal_phi(diag: Sequence[Series], twist: TwistSpec) -> PhiMatrix:
    r = len(diag)
    return PhiMatrix(
        tuple(
            tuple(diag[i] if i == j else Series.zero() for j in range(r))
            for i in range(r)
        ),
        twist,
    )


def np_diagonal(phi: PhiMatrix) -> NewtonPolygon:
    """Polygon of a diagonal phi-matrix: breaks -v(d_ii), merged."""
    from .polygon import DIRECT_SUM, polygon_combine

    out = None
    for i in range(phi.rank):
        v = phi.entries[i][i].valuation()
        if v is None:
            raise SlopeError("diagonal entry is zero")
        seg = NewtonPolygon((SlopeKey(DegreeValue.rational(-v), 1),))
        out = seg if out is None else polygon_combine(out, seg, DIRECT_SUM)
    assert out is not None
    return out


def cyclic_form(
    phi: PhiMatrix, precision: int = DEFAULT_PRECISION
) -> TwistedPolynomial:
    """Monic twisted polynomial of a cyclic vector for Phi.

    Tries standard basis vectors and small sums deterministically; raises
    when none is cyclic (rare for the shipped fixtures).
    """
    r = phi.rank
    candidates = []
    for i in range(r):
        e = [Series.zero() for _ in range(r)]
        e[i] = Series.one()
        candidates.append(tuple(e))
    for i in range(r):
        for j in range(i + 1, r):
            e = [Series.zero() for _ in range(r)]
            e[i] = Series.one()
            e[j] = Series.one()
            candidates.append(tuple(e))
            e2 = list(e)
            e2[j] = Series.monomial(1, 1)
            candidates.append(tuple(e2))
    for e in candidates:
        try:
            return _cyclic_from_vector(phi, e, precision)
        except (SlopeError, PrecisionError, ZeroDivisionError):
            continue
    raise SlopeError("no cyclic vector found among the candidates")


def _apply_phi(phi: PhiMatrix, vec) -> tuple[Series, ...]:
    r = phi.rank
    twisted = [phi.twist.apply(v) for v in vec]
    return tuple(
        _sum_series(phi.entries[i][j] * twisted[j] for j in range(r))
        for i in range(r)
    )


def _sum_series(items) -> Series:
    total = Series.zero()
    for s in items:
        total = total + s
    return total


def _cyclic_from_vector(phi: PhiMatrix, e, precision: int) -> TwistedPolynomial:
    r = phi.rank
    iterates = [tuple(e)]
    for _ in range(r):
        iterates.append(_apply_phi(phi, iterates[-1]))
    # solve sum_{k<r} c_k iterates[k] = iterates[r] over K((x)) at precision
    cols = iterates[:r]
    target = iterates[r]
    coeffs = _series_solve(cols, target, precision)
    zero_minus = [
        -c for c in coeffs
    ]  # P = phi^r - sum c_k phi^k
    return TwistedPolynomial(tuple(zero_minus + [Series.one()]), phi.twist)


def _series_solve(cols, target, precision: int):
    """Solve sum_k c_k cols[k] = target by series Gaussian elimination."""
    r = len(cols)
    aug = [
        [cols[k][i].truncate(precision) for k in range(r)]
        + [target[i].truncate(precision)]
        for i in range(len(target))
    ]
    n = len(aug)
    perm = []
    for col in range(r):
        piv = None
        piv_v = None
        for row in range(n):
            if row in perm:
                continue
            v = aug[row][col].valuation_or(None)
            if v is not None and (piv_v is None or v < piv_v):
                piv, piv_v = row, v
        if piv is None:
            raise SlopeError("candidate vector is not cyclic")
        perm.append(piv)
        inv = aug[piv][col].inverse(precision)
        for row in range(n):
            if row == piv:
                continue
            factor = aug[row][col] * inv
            if factor.is_zero():
                continue
            aug[row] = [
                a - factor * b for a, b in zip(aug[row], aug[piv])
            ]
    sol = []
    for col in range(r):
        piv = perm[col]
        inv = aug[piv][col].inverse(precision)
        sol.append(aug[piv][r] * inv)
    return sol


def fil_phi_degree(notch: int, c_valuation: int) -> DegreeValue:
    """Middle degree of a filtered phi-module datum: notch - v(c)."""
    return DegreeValue.rational(notch - c_valuation)
