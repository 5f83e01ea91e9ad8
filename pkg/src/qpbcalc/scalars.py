"""Exact coefficient arithmetic.

Every coefficient in the engine is a Laurent polynomial in one formal,
central, invertible parameter ``q`` with rational coefficients.  The same
``q`` plays the role of ``e^{i*theta}`` on the noncommutative 2-torus and
of the deformation parameter of the quantum group instances; no numeric
specialisation ever happens.

``Frac`` is the fraction field of that ring.  It only shows up inside the
exact linear solver, where Gaussian elimination may need to divide by
non-unit pivots such as ``1 + q^2``.
"""

from __future__ import annotations

from fractions import Fraction


class Scalar:
    """Laurent polynomial in ``q`` over the rationals, dict exponent -> coeff."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[int(k)] = v
        self.c = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar({0: Fraction(value)})

    @staticmethod
    def q(exp: int = 1, coeff=1) -> "Scalar":
        return Scalar({exp: Fraction(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == {0: Fraction(1)}

    def is_unit(self) -> bool:
        """Units of the Laurent ring: nonzero monomials r*q^k."""
        return len(self.c) == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = Scalar.of(other)
        c = dict(self.c)
        for k, v in other.c.items():
            w = c.get(k, 0) + v
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        out = Scalar.__new__(Scalar)
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Scalar.__new__(Scalar)
        out.c = {k: -v for k, v in self.c.items()}
        return out

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) + (-self)

    def __mul__(self, other):
        other = Scalar.of(other)
        c = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                k = k1 + k2
                w = c.get(k, 0) + v1 * v2
                if w:
                    c[k] = w
                else:
                    c.pop(k, None)
        out = Scalar.__new__(Scalar)
        out.c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def invert(self) -> "Scalar":
        if not self.is_unit():
            raise ArithmeticError(f"not a unit in Q[q,q^-1]: {self}")
        ((k, v),) = self.c.items()
        return Scalar({-k: Fraction(1) / v})

    # -- structure ---------------------------------------------------------

    def terms(self):
        return sorted(self.c.items(), reverse=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        return isinstance(other, Scalar) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        bits = []
        for k, v in self.terms():
            if k == 0:
                bits.append(str(v))
            else:
                head = "q" if k == 1 else f"q^{k}"
                bits.append(head if v == 1 else f"{v}*{head}")
        return " + ".join(bits).replace("+ -", "- ")


ZERO = Scalar()
ONE = Scalar.of(1)
Q = Scalar.q()
MINUS_ONE = Scalar.of(-1)


# ---------------------------------------------------------------------------
# Dense polynomial helpers for the fraction field.  A Laurent polynomial is
# written q^shift * p(q) with p having a nonzero constant term.
# ---------------------------------------------------------------------------


def _to_dense(s: Scalar):
    if s.is_zero():
        return 0, []
    lo = min(s.c)
    hi = max(s.c)
    return lo, [s.c.get(k, Fraction(0)) for k in range(lo, hi + 1)]


def _from_dense(shift, coeffs) -> Scalar:
    return Scalar({shift + i: c for i, c in enumerate(coeffs) if c})


def _ptrim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    """Polynomial division over Q; b must be nonzero."""
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv
        if f:
            q[i] = f
            for j, y in enumerate(b):
                a[i + j] -= f * y
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if a:
        inv = Fraction(1) / a[-1]
        a = [x * inv for x in a]
    return a


class Frac:
    """Element of the fraction field Q(q), reduced num/den pair."""

    __slots__ = ("n", "d")

    def __init__(self, num: Scalar, den: Scalar = ONE):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.n, self.d = ZERO, ONE
            return
        ns, np = _to_dense(num)
        ds, dp = _to_dense(den)
        g = _pgcd(np, dp)
        if len(g) > 1:
            np, _ = _pdivmod(np, g)
            dp, _ = _pdivmod(dp, g)
        # normalise: denominator constant term 1, q-shift folded into num
        lead = dp[0]
        np = [x / lead for x in np]
        dp = [x / lead for x in dp]
        self.n = _from_dense(ns - ds, np)
        self.d = _from_dense(0, dp)

    @staticmethod
    def of(value) -> "Frac":
        if isinstance(value, Frac):
            return value
        return Frac(Scalar.of(value))

    def is_zero(self):
        return self.n.is_zero()

    def __add__(self, other):
        other = Frac.of(other)
        return Frac(self.n * other.d + other.n * self.d, self.d * other.d)

    __radd__ = __add__

    def __neg__(self):
        out = Frac.__new__(Frac)
        out.n, out.d = -self.n, self.d
        return out

    def __sub__(self, other):
        return self + (-Frac.of(other))

    def __mul__(self, other):
        other = Frac.of(other)
        return Frac(self.n * other.n, self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Frac.of(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.n * other.d, self.d * other.n)

    def __eq__(self, other):
        other = Frac.of(other)
        return self.n == other.n and self.d == other.d

    def __hash__(self):
        return hash((self.n, self.d))

    def to_scalar(self) -> Scalar:
        """Convert back to a Laurent polynomial; denominator must be a unit."""
        if not self.d.is_unit():
            raise ArithmeticError(f"non-Laurent solution: denominator {self.d}")
        return self.n * self.d.invert()

    def __repr__(self):
        return repr(self.n) if self.d.is_one() else f"({self.n})/({self.d})"
