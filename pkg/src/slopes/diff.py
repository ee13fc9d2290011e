"""Formal differential operators and modules over Q((x)) with the
logarithmic derivation x d/dx.

Three independent routes to the same invariants live here: the Fuchs
irregularity formula from coefficient valuations, the clamped Newton
polygon (only non-negative slopes), the spectral growth rate of powers of
the connection, and the lattice-growth irregularity.  The tests cross
check them against each other; a fixture where they disagree is a bug,
not something to patch around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .degrees import DegreeValue, SlopeKey
from .polygon import NewtonPolygon, polygon_from_points
from .series import PrecisionError, Series


class DiffError(ValueError):
    pass


@dataclass(frozen=True)
class DifferentialOperator:
    """P = D^n - a_{n-1} D^{n-1} - ... - a_0 with D = x d/dx; the a_i are
    the subtracted coefficients, low index first."""

    coeffs: tuple[Series, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise DiffError("operator order must be >= 1")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def valuations(self) -> list[Optional[int]]:
        return [c.valuation_or(None) if not _known_zero(c) else None for c in self.coeffs]

    @staticmethod
    def from_valuations(vals: Sequence[Optional[int]]) -> "DifferentialOperator":
        coeffs = tuple(
            Series.zero() if v is None else Series.monomial(1, int(v))
            for v in vals
        )
        return DifferentialOperator(coeffs)

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs], "n": self.order}


def _known_zero(c: Series) -> bool:
    return c.prec is None and c.is_zero()


@dataclass(frozen=True)
class DifferentialModule:
    """Connection matrix of nabla(x d/dx) on a basis of K^r."""

    matrix: tuple[tuple[Series, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def to_json(self):
        return {"matrix": [[c.to_json() for c in row] for row in self.matrix]}


def companion(op: DifferentialOperator) -> DifferentialModule:
    """Companion module of the cyclic presentation: basis 1, D, ..., D^(n-1)."""
    n = op.order
    rows = [[Series.zero() for _ in range(n)] for _ in range(n)]
    for j in range(n - 1):
        rows[j + 1][j] = Series.one()
    for i in range(n):
        rows[i][n - 1] = op.coeffs[i]
    return DifferentialModule(tuple(tuple(r) for r in rows))


def irregularity_cyclic(op: DifferentialOperator) -> int:
    """Fuchs number max(0, max_i(-ord a_i)); zero exactly for regular
    operators."""
    worst = 0
    for c in op.coeffs:
        if _known_zero(c):
            continue
        v = c.valuation()  # raises PrecisionError when indeterminate
        worst = max(worst, -v)
    return worst


def np_diff(op_or_vals) -> NewtonPolygon:
    """Clamped Newton polygon: concave hull of (i, -v(a_{n-i})) with every
    negative slope flattened into the slope-zero segment.

    The hull height equals the irregularity and the highest break is the
    Poincare-Katz rank.
    """
    if isinstance(op_or_vals, DifferentialOperator):
        vals = op_or_vals.valuations()
        n = op_or_vals.order
    else:
        vals = list(op_or_vals)
        n = len(vals)
    points = [(0, DegreeValue.rational(0))]
    for i, v in enumerate(vals):
        if v is None:
            continue
        points.append((n - i, DegreeValue.rational(-v)))
    hull = polygon_from_points(points)
    segs = []
    kept = 0
    zero = DegreeValue.rational(0)
    for seg in hull.segments:
        if seg.deg.cmp(zero) > 0:
            segs.append(seg)
            kept += seg.rk
        else:
            break
    if kept < n:
        segs.append(SlopeKey(DegreeValue.rational(0), n - kept))
    return NewtonPolygon(tuple(segs))


def polygon_height(poly: NewtonPolygon) -> Fraction:
    """Right-endpoint ordinate (the degree; for clamped polygons, the
    irregularity)."""
    return poly.total_degree().value


def highest_break(poly: NewtonPolygon) -> Fraction:
    seg = poly.highest_break().reduced()
    return seg.deg.value / seg.rk if seg.rk != 1 else seg.deg.value


# -- spectral Katz rank ------------------------------------------------------------


def _matrix_min_valuation(mat) -> Optional[int]:
    vals = []
    for row in mat:
        for c in row:
            v = c.valuation_or(None)
            if v is not None:
                vals.append(v)
    return min(vals) if vals else None


def _truncate_matrix(mat, prec: int):
    return tuple(tuple(c.truncate(prec) for c in row) for row in mat)


def _power_step(a, b):
    """B -> A B + d(B) entrywise, d the logarithmic derivative."""
    r = len(a)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = b[i][j].dlog_derivative()
            for k in range(r):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def katz_rank_spectral(
    module: DifferentialModule, n_max: int = 64, window: int = 12
):
    """Highest-break estimate from the valuation growth of connection
    powers.

    Raw ratios -v(B_n)/n converge only at rate rho/n, so the returned
    estimate is the windowed difference (v(B_{n-w}) - v(B_n))/w at n_max,
    exact once the extremal monomial pattern becomes periodic (period
    divides the break denominator, hence 12 covers orders <= 4).
    Diagnostics carry both sequences and a convergence verdict.
    """
    if n_max < 2:
        raise DiffError("n_max must be >= 2")
    attempts = 0
    keep = 16
    while True:
        attempts += 1
        try:
            return _katz_run(module, n_max, window, keep)
        except PrecisionError:
            if attempts >= 5:
                raise
            keep *= 2


def _katz_run(module: DifferentialModule, n_max: int, window: int, keep: int):
    a = module.matrix
    vals: list[Optional[int]] = []
    b = a
    for _n in range(1, n_max + 1):
        v = _matrix_min_valuation(b)
        if v is None:
            # zero as far as known: v(B_n) is at least the window bottom,
            # and superadditivity of power valuations then pins rho = 0
            # provided that bottom is positive.
            precs = [c.prec for row in b for c in row if c.prec is not None]
            if not precs or min(precs) >= 1:
                return Fraction(0), {
                    "valuations": vals,
                    "ratios": [],
                    "windowed": [],
                    "window": 0,
                    "converged": True,
                }
            raise PrecisionError("power valuation indeterminate")
        vals.append(v)
        # keep a bounded window above the running minimum
        b = _truncate_matrix(b, v + keep)
        if _n < n_max:
            b = _power_step(a, b)
    ratios = [Fraction(-vals[n - 1], n) for n in range(1, n_max + 1)]
    w = min(window, n_max - 1)
    windowed = []
    for n in range(w + 1, n_max + 1):
        windowed.append(Fraction(vals[n - 1 - w] - vals[n - 1], w))
    est = max(Fraction(0), windowed[-1]) if windowed else max(Fraction(0), ratios[-1])
    converged = len(windowed) >= 2 and windowed[-1] == windowed[-2]
    diagnostics = {
        "valuations": vals,
        "ratios": ratios,
        "windowed": windowed,
        "window": w,
        "converged": converged,
    }
    return est, diagnostics


# -- Gerard-Levelt lattice growth ----------------------------------------------------


def _approx_quotient(e: Series, p: Series, floor_prec: int) -> Series:
    """f in Q[[x]] with e - f p zero to the available precision.

    The pivot p is the global minimum-valuation entry, so inverting it to
    its maximal achievable precision (prec - 2 v(p)) makes the column
    update lose no precision at all.
    """
    vp = p.valuation()
    if p.prec is not None:
        inv_prec = p.prec - 2 * vp
    else:
        inv_prec = floor_prec - 2 * vp + 4
    inv = p.inverse(inv_prec)
    return e * inv


def _safe_valuation(s: Series):
    """Valuation, or None for an entry that is safely zero.

    Zero-as-stored is safe only when the unknown tail starts at x^1 or
    later: such content lies in x [[x]]^r, inside the standard lattice the
    generator set always contains.  An exhausted window below that level
    must raise so the caller can retry with more precision.
    """
    try:
        return s.valuation()
    except PrecisionError:
        if s.prec is not None and s.prec >= 1:
            return None
        raise


def _safely_zero(s: Series) -> bool:
    return s.is_zero() and (s.prec is None or s.prec >= 1)


def _reduce_columns(cols, r: int, floor_prec: int):
    """DVR column reduction; returns (sum of pivot diagonal valuations,
    pivot columns).  Entries are Series known at least to floor_prec."""
    active = []
    for c in cols:
        col = [e.truncate(floor_prec) for e in c]
        if not all(_safely_zero(e) for e in col):
            active.append(col)
    rows_left = list(range(r))
    pivots = []
    total = 0
    while rows_left:
        best = None  # (val, row, col index)
        for ci, col in enumerate(active):
            for row in rows_left:
                v = _safe_valuation(col[row])
                if v is not None and (best is None or v < best[0]):
                    best = (v, row, ci)
        if best is None:
            raise PrecisionError("column reduction ran out of certified pivots")
        v, row, ci = best
        pivot = active.pop(ci)
        for col in active:
            e = col[row]
            if _safe_valuation(e) is None:
                continue
            f = _approx_quotient(e, pivot[row], floor_prec)
            for i in range(r):
                col[i] = (col[i] - f * pivot[i]).truncate(floor_prec)
        rows_left.remove(row)
        pivots.append((row, pivot))
        total += v
        active = [c for c in active if not all(_safely_zero(e) for e in c)]
    return total, [p for _, p in pivots]


def gerard_levelt_irregularity(
    module: DifferentialModule, n_max: int = 12
):
    """Irregularity via lattice growth V_{k+1} = V_k + nabla(V_k).

    Returns (irregularity, stabilized, diagnostics).  The reported value is
    the increment of dim(V_k/V_0) once constant over the final quarter of
    the iterations; stabilized=False marks an advisory result.
    """
    if n_max < 4:
        raise DiffError("n_max must be >= 4")
    a = module.matrix
    r = module.rank
    h = max(0, -(_matrix_min_valuation(a) or 0))
    attempts = 0
    floor = h * (n_max + 2) + 8
    while True:
        attempts += 1
        try:
            return _gl_run(a, r, n_max, floor)
        except PrecisionError:
            if attempts >= 5:
                raise
            floor *= 2


def _identity_cols(r: int):
    return [
        [Series.one() if i == j else Series.zero() for i in range(r)]
        for j in range(r)
    ]


def _gl_run(a, r: int, n_max: int, floor: int):
    dims = []
    basis = [[Series.one() if i == j else Series.zero() for i in range(r)] for j in range(r)]
    for _step in range(n_max):
        grads = []
        for col in basis:
            twisted = [e.dlog_derivative() for e in col]
            img = []
            for i in range(r):
                acc = twisted[i]
                for k in range(r):
                    acc = acc + a[i][k] * col[k]
                img.append(acc)
            grads.append(img)
        gens = _identity_cols(r) + [list(c) for c in basis] + grads
        vmin = min(
            (e.valuation_or(0) or 0) for col in gens for e in col
        )
        total, pivots = _reduce_columns(gens, r, floor + max(0, -vmin))
        dims.append(-total)
        basis = pivots
    increments = [dims[0]] + [b - a2 for a2, b in zip(dims, dims[1:])]
    quarter = max(1, n_max // 4)
    tail = increments[-quarter:]
    stabilized = all(t == tail[0] for t in tail)
    return tail[-1], stabilized, {"dims": dims, "increments": increments}


# -- rank-one tensor law --------------------------------------------------------------


def tensor_rank_one(
    f_valuation: Optional[int],
    g_valuation: Optional[int],
    cancellation_valuation: Optional[int] = None,
) -> Fraction:
    """Break of the tensor of two rank-one modules with connections f and g.

    The tensor connection is f + g; v(f + g) must be supplied when the two
    valuations coincide (cancellation possible) and is forced to min(vf, vg)
    otherwise.  The highest-break bound is asserted.
    """

    def brk(v):
        return Fraction(max(0, -v)) if v is not None else Fraction(0)

    if f_valuation is None and g_valuation is None:
        vsum = cancellation_valuation
    elif f_valuation is None:
        vsum = g_valuation
    elif g_valuation is None:
        vsum = f_valuation
    elif f_valuation != g_valuation:
        forced = min(f_valuation, g_valuation)
        if cancellation_valuation is not None and cancellation_valuation != forced:
            raise DiffError(
                "v(f+g) must equal min(v(f), v(g)) when the valuations differ"
            )
        vsum = forced
    else:
        if cancellation_valuation is None:
            raise DiffError("equal valuations: supply v(f+g)")
        if cancellation_valuation < f_valuation:
            raise DiffError("v(f+g) cannot drop below min(v(f), v(g))")
        vsum = cancellation_valuation
    result = brk(vsum)
    bound = max(brk(f_valuation), brk(g_valuation))
    if result > bound:
        raise DiffError("tensor break exceeded the highest-break bound")
    return result


def rank_one_break(f: Series) -> Fraction:
    """Break of the rank-one module with connection f."""
    if _known_zero(f):
        return Fraction(0)
    return Fraction(max(0, -f.valuation()))
