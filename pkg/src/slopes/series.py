"""Truncated Laurent series over Q with explicit precision tracking.

A series is a window of exact rational coefficients starting at ``vmin``;
exponents at or beyond ``prec`` are unknown.  ``prec=None`` marks an exact
Laurent polynomial (every unstored coefficient is genuinely zero), which is
what all shipped fixtures use; truncation only enters through the slope
factorization, whose outputs carry finite precision.

Arithmetic propagates precision pessimistically and never invents a
coefficient: asking for the valuation of a window that is zero out to its
precision raises ``PrecisionError`` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rat = Union[Fraction, int, str]

INF = None  # precision sentinel for exact series


class PrecisionError(ArithmeticError):
    """A quantity is indeterminate at the working precision."""


def _frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class Series:
    vmin: int
    coeffs: tuple[Fraction, ...]
    prec: Optional[int] = None  # exponents >= prec are unknown; None = exact

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        if self.prec is not None and self.vmin + len(self.coeffs) > self.prec:
            object.__setattr__(
                self, "coeffs", self.coeffs[: max(0, self.prec - self.vmin)]
            )

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def zero(prec: Optional[int] = None) -> "Series":
        return Series(0, (), prec)

    @staticmethod
    def one() -> "Series":
        return Series(0, (Fraction(1),))

    @staticmethod
    def monomial(c: Rat, k: int, prec: Optional[int] = None) -> "Series":
        return Series(k, (_frac(c),), prec)

    @staticmethod
    def from_coeffs(vmin: int, coeffs, prec: Optional[int] = None) -> "Series":
        return Series(vmin, tuple(_frac(c) for c in coeffs), prec)

    # -- basic queries -----------------------------------------------------------

    def coeff(self, k: int) -> Fraction:
        """Coefficient of x**k; raises if k is beyond the known window."""
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of x^{k} beyond precision {self.prec}")
        i = k - self.vmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def is_zero(self) -> bool:
        """True when zero as far as known (exactly zero if exact)."""
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        """Least exponent with a nonzero coefficient.

        Returns None for the exact zero series; raises PrecisionError when a
        truncated series is zero out to its precision.
        """
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.vmin + i
        if self.prec is None:
            return None
        raise PrecisionError(
            f"series is zero to precision O(x^{self.prec}); valuation unknown"
        )

    def valuation_or(self, default=None):
        try:
            return self.valuation()
        except PrecisionError:
            return default

    def trimmed(self) -> "Series":
        lo = 0
        coeffs = self.coeffs
        while lo < len(coeffs) and coeffs[lo] == 0:
            lo += 1
        hi = len(coeffs)
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        return Series(self.vmin + lo, coeffs[lo:hi], self.prec)

    def truncate(self, prec: int) -> "Series":
        return Series(self.vmin, self.coeffs, _min_prec(self.prec, prec))

    # -- ring operations ------------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs:
            return Series(other.vmin, other.coeffs, prec)
        if not other.coeffs:
            return Series(self.vmin, self.coeffs, prec)
        lo = min(self.vmin, other.vmin)
        hi = max(self.vmin + len(self.coeffs), other.vmin + len(other.coeffs))
        out = [Fraction(0)] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            out[self.vmin - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.vmin - lo + i] += c
        return Series(lo, tuple(out), prec).trimmed()

    def __neg__(self) -> "Series":
        return Series(self.vmin, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other: "Series") -> "Series":
        # O(x^p) * (q + ...) is O(x^(p + v(q))); both cross terms count.
        va = self.trimmed()
        vb = other.trimmed()
        prec = None
        if self.prec is not None:
            prec = self.prec + (vb.vmin if vb.coeffs else 0)
        if other.prec is not None:
            p2 = other.prec + (va.vmin if va.coeffs else 0)
            prec = _min_prec(prec, p2)
        if not va.coeffs or not vb.coeffs:
            return Series.zero(prec)
        out = [Fraction(0)] * (len(va.coeffs) + len(vb.coeffs) - 1)
        for i, a in enumerate(va.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(vb.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Series(va.vmin + vb.vmin, tuple(out), prec).trimmed()

    def scale(self, c: Rat) -> "Series":
        c = _frac(c)
        return Series(self.vmin, tuple(c * a for a in self.coeffs), self.prec)

    def shift(self, k: int) -> "Series":
        """Multiply by x**k."""
        return Series(
            self.vmin + k,
            self.coeffs,
            None if self.prec is None else self.prec + k,
        )

    def dlog_derivative(self) -> "Series":
        """Apply x d/dx: c_k x^k -> k c_k x^k.  Valuation never drops."""
        return Series(
            self.vmin,
            tuple(c * (self.vmin + i) for i, c in enumerate(self.coeffs)),
            self.prec,
        ).trimmed()

    def dilate(self, q: Fraction) -> "Series":
        """Substitute x -> q x (the q-dilation twist); an isometry."""
        return Series(
            self.vmin,
            tuple(c * q ** (self.vmin + i) for i, c in enumerate(self.coeffs)),
            self.prec,
        )

    def inverse(self, prec: int) -> "Series":
        """Multiplicative inverse to O(x^prec); needs a known valuation."""
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of the zero series")
        t = self.trimmed()
        lead = t.coeffs[0]
        nterms = prec - (-v)
        if nterms <= 0:
            return Series.zero(prec)
        # u = t / (lead x^v) is 1 + higher; invert by the standard recursion.
        u = [c / lead for c in t.coeffs]
        if t.prec is not None and t.prec - v < nterms:
            raise PrecisionError("not enough terms to invert at this precision")
        u += [Fraction(0)] * max(0, nterms - len(u))
        inv = [Fraction(0)] * nterms
        inv[0] = Fraction(1)
        for k in range(1, nterms):
            acc = Fraction(0)
            for j in range(1, min(k, len(u) - 1) + 1):
                acc += u[j] * inv[k - j]
            inv[k] = -acc
        return Series(-v, tuple(c / lead for c in inv), prec)

    def eq_to_precision(self, other: "Series", prec: Optional[int] = None) -> bool:
        d = (self - other).trimmed()
        limit = _min_prec(d.prec, prec)
        if limit is None:
            return d.is_zero()
        return all(
            c == 0 for i, c in enumerate(d.coeffs) if d.vmin + i < limit
        )

    # -- io ---------------------------------------------------------------------------

    def to_json(self):
        t = self.trimmed()
        out = {"vmin": t.vmin, "c": [str(c) for c in t.coeffs]}
        if t.prec is not None:
            out["prec"] = t.prec
        return out

    @staticmethod
    def from_json(obj) -> "Series":
        if isinstance(obj, str):
            return Series(0, (Fraction(obj),))
        return Series(
            int(obj.get("vmin", 0)),
            tuple(Fraction(c) for c in obj.get("c", [])),
            obj.get("prec"),
        )

    def __repr__(self):
        t = self.trimmed()
        if not t.coeffs:
            body = "0"
        else:
            parts = []
            for i, c in enumerate(t.coeffs):
                if c == 0:
                    continue
                k = t.vmin + i
                parts.append(f"{c}*x^{k}" if k else f"{c}")
            body = " + ".join(parts) or "0"
        tail = f" + O(x^{t.prec})" if t.prec is not None else ""
        return f"<{body}{tail}>"
