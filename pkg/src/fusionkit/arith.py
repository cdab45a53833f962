"""Exact arithmetic in the real quadratic field Q(sqrt5).

Every dimension occurring in this package is an element of Q(sqrt5); the
values produced by the library itself lie on the half-integer lattice
{(u + v*sqrt5)/2 : u, v integers}.  The distinguished constant is
d = 2 + sqrt5, which satisfies d**2 = 1 + 4*d.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

import numpy as np

SQRT5 = math.sqrt(5.0)

# sqrt5 as a Fraction, good to ~60 digits; only used to seed float scans.
_SQRT5_FRAC = Fraction(math.isqrt(5 * 10**120), 10**60)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    if x == 0:
        return Fraction(0)
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@total_ordering
class QuadNumber:
    """An exact element a + b*sqrt5 of Q(sqrt5).

    Immutable; rationals are kept in lowest terms by Fraction.  Comparison
    and sign are exact (no floating point on any correctness path).
    """

    __slots__ = ("a", "b")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> None:
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QuadNumber is immutable")

    def __reduce__(self):
        return (QuadNumber, (self.a, self.b))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_half_pair(cls, u: int, v: int) -> QuadNumber:
        """Build (u + v*sqrt5)/2 from integer half-coordinates."""
        return cls(Fraction(u, 2), Fraction(v, 2))

    # -- basic structure -------------------------------------------------

    def conjugate(self) -> QuadNumber:
        return QuadNumber(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a**2 - 5*b**2 (product with the conjugate)."""
        return self.a * self.a - 5 * self.b * self.b

    def is_half_integral(self) -> bool:
        return (2 * self.a).denominator == 1 and (2 * self.b).denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: object) -> QuadNumber | None:
        if isinstance(other, QuadNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber(other)
        return None

    def __add__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QuadNumber:
        return QuadNumber(-self.a, -self.b)

    def __sub__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadNumber(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        # 1/(a+b*sqrt5) = (a-b*sqrt5)/norm
        return self * QuadNumber(o.a / n, -o.b / n)

    def __rtruediv__(self, other: object) -> QuadNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> QuadNumber:
        if k < 0:
            return QuadNumber(1) / self ** (-k)
        out = QuadNumber(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt5 as a real number."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a**2 with 5*b**2
        if a > 0:  # b < 0: positive iff a**2 > 5 b**2
            return 1 if a * a > 5 * b * b else (-1 if a * a < 5 * b * b else 0)
        return -1 if a * a > 5 * b * b else (1 if a * a < 5 * b * b else 0)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT5

    # -- display ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"QuadNumber({self.a!r}, {self.b!r})"

    def __str__(self) -> str:
        return format_quad(self)

    def d_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (m, n) with self = m + n*d, d = 2 + sqrt5."""
        return (self.a - 2 * self.b, self.b)

    def d_string(self) -> str:
        """Human form 'm+nd' used throughout the source paper's tables."""
        m, n = self.d_coords()
        if n == 0:
            return str(m)
        nd = "d" if n == 1 else ("-d" if n == -1 else f"{n}d")
        if m == 0:
            return nd
        return f"{m}+{nd}" if n > 0 else f"{m}{nd}"


ZERO = QuadNumber(0)
ONE = QuadNumber(1)
SQRT5_Q = QuadNumber(0, 1)
D = QuadNumber(2, 1)  # 2 + sqrt5
PHI = QuadNumber(Fraction(1, 2), Fraction(1, 2))  # (1+sqrt5)/2


def compare_sign(x: QuadNumber) -> int:
    return x.sign()


def sqrt_in_field(x: QuadNumber) -> QuadNumber | None:
    """The nonnegative y in Q(sqrt5) with y*y == x, or None.

    Closed form: writing y = u + v*sqrt5 and squaring, u**2 must be
    (a +- t)/2 where t is the rational square root of the field norm of x.
    This covers all of Q(sqrt5), not only the half-integer lattice.
    """
    s = x.sign()
    if s < 0:
        return None
    if s == 0:
        return ZERO
    if x.b == 0:
        u = _rational_sqrt(x.a)
        if u is not None:
            return QuadNumber(u)
        v = _rational_sqrt(x.a / 5)
        if v is not None:
            return QuadNumber(0, v)
        return None
    t = _rational_sqrt(x.norm())
    if t is None:
        return None
    for tt in (t, -t):
        u = _rational_sqrt((x.a + tt) / 2)
        if u is None or u == 0:
            continue
        y = QuadNumber(u, x.b / (2 * u))
        if y * y == x:
            return y if y.sign() >= 0 else -y
    return None


def is_square_in_field(x: QuadNumber) -> bool:
    return sqrt_in_field(x) is not None


class AmbiguousRecognitionError(ValueError):
    """Two half-integer lattice points lie within tolerance of the input."""


def recognize_float(
    v: float, tol: float = 1e-9, bound: int = 10**6
) -> QuadNumber | None:
    """Nearest half-integer lattice element (u + w*sqrt5)/2 within tol of v.

    Scans integer w (u then forced by rounding); candidate hits are
    re-checked with exact rational arithmetic so the tolerance decision
    itself never depends on float rounding.  Returns None when no lattice
    point is in range; raises AmbiguousRecognitionError when two are.

    The coefficient bound shrinks as tol grows (lattice points with huge
    coefficients are dense in R, so uniqueness within tol is only
    meaningful below ~0.02/tol); at the default 1e-9 tolerance the full
    configured bound applies.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    eff = min(bound, max(1000, int(0.02 / tol)))
    target = 2.0 * v
    slack = 2.0 * tol + 1e-7  # float pre-filter; exact check follows
    vf = QuadNumber(Fraction(v))
    tol2 = QuadNumber(Fraction(tol) ** 2)
    exact: list[QuadNumber] = []
    for lo in range(-eff, eff + 1, 2**22):
        hi = min(lo + 2**22, eff + 1)
        w = np.arange(lo, hi, dtype=np.float64)
        u = np.rint(target - w * SQRT5)
        res = np.abs(u + w * SQRT5 - target)
        for idx in np.nonzero(res <= slack)[0]:
            cand = QuadNumber.from_half_pair(int(u[idx]), int(w[idx]))
            diff = cand - vf
            # |diff| <= tol, exact: compare diff**2 against tol**2
            if (diff * diff - tol2).sign() <= 0:
                exact.append(cand)
                if len(exact) > 1:
                    raise AmbiguousRecognitionError(
                        f"multiple lattice points within {tol} of {v}: "
                        + ", ".join(map(str, exact))
                    )
    return exact[0] if exact else None


# -- textual and JSON forms --------------------------------------------------


def format_quad(x: QuadNumber) -> str:
    """Canonical text form '(u+v*sqrt5)/2' (exact round-trip)."""
    u, v = 2 * x.a, 2 * x.b
    return f"({u}{'+' if v >= 0 else ''}{v}*sqrt5)/2"


def parse_quad(src: str) -> QuadNumber:
    """Parse the canonical '(u+v*sqrt5)/2' form (u, v rational)."""
    s = src.strip().replace(" ", "")
    if not (s.startswith("(") and s.endswith(")/2")):
        raise ValueError(f"bad Q(sqrt5) literal: {src!r}")
    body = s[1:-3]
    mark = body.find("*sqrt5")
    if mark < 0:
        raise ValueError(f"bad Q(sqrt5) literal: {src!r}")
    head = body[:mark]
    if body[mark + 6 :]:
        raise ValueError(f"bad Q(sqrt5) literal: {src!r}")
    # split head into u and v at the last +/- that is not part of a fraction sign
    cut = None
    for i in range(len(head) - 1, 0, -1):
        if head[i] in "+-" and head[i - 1] not in "+-/":
            cut = i
            break
    if cut is None:
        raise ValueError(f"bad Q(sqrt5) literal: {src!r}")
    u, v = Fraction(head[:cut]), Fraction(head[cut:])
    return QuadNumber(u / 2, v / 2)


def quad_to_json(x: QuadNumber) -> list[str]:
    """JSON pair [u, v] of exact rationals with x = (u + v*sqrt5)/2."""
    return [str(2 * x.a), str(2 * x.b)]


def quad_from_json(pair: list[str]) -> QuadNumber:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"bad Q(sqrt5) JSON pair: {pair!r}")
    return QuadNumber(Fraction(str(pair[0])) / 2, Fraction(str(pair[1])) / 2)


@total_ordering
class QuadRoot:
    """The nonnegative square root of a nonnegative QuadNumber.

    Module dimension vectors live here: each entry d_a has d_a**2 in
    Q(sqrt5) even when d_a itself does not (e.g. sqrt(1+d)).  Equality and
    order compare the exact squares; multiplication stays closed.
    """

    __slots__ = ("square", "exact")

    def __init__(self, square: QuadNumber) -> None:
        if square.sign() < 0:
            raise ValueError("QuadRoot of a negative value")
        object.__setattr__(self, "square", square)
        object.__setattr__(self, "exact", sqrt_in_field(square))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QuadRoot is immutable")

    def __reduce__(self):
        return (QuadRoot, (self.square,))

    @classmethod
    def of(cls, value: QuadNumber) -> QuadRoot:
        """Wrap an exact nonnegative field element as a root."""
        if value.sign() < 0:
            raise ValueError("negative dimension")
        return cls(value * value)

    def in_field(self) -> bool:
        return self.exact is not None

    def __mul__(self, other: object) -> QuadRoot:
        if isinstance(other, QuadRoot):
            return QuadRoot(self.square * other.square)
        if isinstance(other, (int, Fraction, QuadNumber)):
            q = QuadNumber(other) if not isinstance(other, QuadNumber) else other
            return QuadRoot(self.square * q * q)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadRoot):
            return self.square == other.square
        if isinstance(other, (int, Fraction, QuadNumber)):
            q = other if isinstance(other, QuadNumber) else QuadNumber(other)
            return q.sign() >= 0 and self.square == q * q
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, QuadRoot):
            return self.square < other.square
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("QuadRoot", self.square))

    def __float__(self) -> float:
        return math.sqrt(float(self.square))

    def __repr__(self) -> str:
        return f"QuadRoot({self.square!r})"

    def __str__(self) -> str:
        if self.exact is not None:
            return self.exact.d_string()
        return f"sqrt({self.square.d_string()})"
