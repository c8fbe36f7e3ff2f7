"""Exact truncated p-adic coefficient arithmetic.

Scalars are "p-adic floats": a valuation together with a unit mantissa known
modulo a power of p.  All arithmetic propagates absolute precision so that a
result is never claimed beyond what the inputs support.  Coefficients may live
in an unramified extension of Q_p of degree a, represented as polynomials in a
fixed generator modulo a user-supplied irreducible polynomial.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import MismatchedParams, NonInvertible


class RingMode(enum.Enum):
    POWER_SERIES = "power_series"  # S_K / R_K^+ truncations: exponents >= 0
    LAURENT = "laurent"            # E_K^dagger / R_K / E_K truncations


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingParams:
    """Parameters of a truncated coefficient-and-series ring.

    p, a determine q = p^a; N is the working coefficient precision (mod p^N);
    t_window = (M_neg, M_pos) bounds series exponents to [-M_neg, M_pos].
    """

    p: int
    N: int
    t_window: tuple[int, int] = (0, 32)
    ring_mode: RingMode = RingMode.LAURENT
    a: int = 1
    modulus: tuple[int, ...] | None = None  # monic, degree a, irreducible mod p

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.N < 1:
            raise ValueError("coefficient precision N must be >= 1")
        m_neg, m_pos = self.t_window
        if m_neg < 0 or m_pos < 1:
            raise ValueError("t_window must satisfy M_neg >= 0, M_pos >= 1")
        if self.ring_mode is RingMode.POWER_SERIES and m_neg != 0:
            raise ValueError("POWER_SERIES mode requires M_neg = 0")
        if self.a < 1:
            raise ValueError("residue degree a must be >= 1")
        if self.a > 1:
            if self.modulus is None or len(self.modulus) != self.a + 1:
                raise ValueError("a > 1 needs a monic modulus of degree a")
            if self.modulus[-1] != 1:
                raise ValueError("modulus must be monic")
        if self.a == 1 and self.modulus is not None:
            raise ValueError("modulus only makes sense for a > 1")

    @property
    def q(self) -> int:
        return self.p ** self.a

    @property
    def window_lo(self) -> int:
        return -self.t_window[0]

    @property
    def window_hi(self) -> int:
        return self.t_window[1]

    def rescaled(self, factor: int) -> "RingParams":
        """Same ring at precision and window scaled by ``factor``."""
        m_neg, m_pos = self.t_window
        return RingParams(self.p, self.N * factor,
                          (m_neg * factor, m_pos * factor),
                          self.ring_mode, self.a, self.modulus)

    def with_mode(self, mode: RingMode) -> "RingParams":
        m_neg, m_pos = self.t_window
        if mode is RingMode.LAURENT and m_neg == 0:
            m_neg = m_pos
        if mode is RingMode.POWER_SERIES:
            m_neg = 0
        return RingParams(self.p, self.N, (m_neg, m_pos), mode,
                          self.a, self.modulus)


# ---------------------------------------------------------------------------
# polynomial helpers for the unramified extension (coefficients mod p^k)

def _poly_mul(u, v, modulus, pk):
    a = len(modulus) - 1
    out = [0] * (len(u) + len(v) - 1)
    for i, ci in enumerate(u):
        if ci:
            for j, cj in enumerate(v):
                out[i + j] = (out[i + j] + ci * cj) % pk
    # reduce modulo the monic modulus
    for i in range(len(out) - 1, a - 1, -1):
        c = out[i]
        if c:
            for j in range(a + 1):
                out[i - a + j] = (out[i - a + j] - c * modulus[j]) % pk
    return tuple(c % pk for c in out[:a]) + (0,) * max(0, a - len(out))


def _poly_add(u, v, pk):
    return tuple((x + y) % pk for x, y in zip(u, v))


def _poly_scale(u, c, pk):
    return tuple((c * x) % pk for x in u)


def _poly_inv(u, modulus, p, k):
    """Invert u in (Z/p^k)[x]/(modulus); u must be a unit mod p."""
    a = len(modulus) - 1
    # invert mod p by extended Euclid over F_p
    def polydivmod(f, g):
        f = [c % p for c in f]
        g = [c % p for c in g]
        while g and g[-1] == 0:
            g.pop()
        q = [0] * max(1, len(f) - len(g) + 1)
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g) and any(f):
            while f and f[-1] % p == 0:
                f.pop()
            if len(f) < len(g):
                break
            c = (f[-1] * inv) % p
            d = len(f) - len(g)
            q[d] = c
            for i, gi in enumerate(g):
                f[i + d] = (f[i + d] - c * gi) % p
            while f and f[-1] % p == 0:
                f.pop()
        return q, f if f else [0]

    r0, r1 = [c % p for c in modulus], [c % p for c in u]
    s0, s1 = [0], [1]
    while any(c % p for c in r1):
        q, r = polydivmod(r0, r1)
        r0, r1 = r1, r
        # s0 - q*s1
        prod = [0] * (len(q) + len(s1) - 1)
        for i, qi in enumerate(q):
            for j, sj in enumerate(s1):
                prod[i + j] = (prod[i + j] + qi * sj) % p
        new = [(x - y) % p for x, y in
               zip(s0 + [0] * max(0, len(prod) - len(s0)),
                   prod + [0] * max(0, len(s0) - len(prod)))]
        s0, s1 = s1, new
    lead = next(c for c in reversed(r0) if c % p)
    inv_lead = pow(lead, -1, p)
    z = [(c * inv_lead) % p for c in s0]
    z = tuple(z[:a]) + (0,) * max(0, a - len(z))
    if not any(z):
        raise NonInvertible("element not invertible mod p")
    # Hensel lift: z <- z(2 - u z) doubling the precision each step
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        pk = p ** prec
        uz = _poly_mul(u, z, modulus, pk)
        two_minus = tuple((-c) % pk for c in uz)
        two_minus = (two_minus[0] + 2,) + two_minus[1:]
        two_minus = tuple(c % pk for c in two_minus)
        z = _poly_mul(z, two_minus, modulus, pk)
    return z


def _poly_eval(coeffs, y, modulus, pk):
    """Horner evaluation of an integer polynomial at the extension element y."""
    a = len(modulus) - 1
    acc = (0,) * a
    for c in reversed(coeffs):
        acc = _poly_mul(acc, y, modulus, pk)
        acc = ((acc[0] + c) % pk,) + acc[1:]
    return acc


def _frobenius_generator_image(params: RingParams) -> tuple[int, ...]:
    """Witt Frobenius image of the generator x: the root of the modulus
    congruent to x^p mod p, lifted by Newton iteration to precision N."""
    p, k, f = params.p, params.N, params.modulus
    a = params.a
    x = (0, 1) + (0,) * (a - 2)
    y = (1,) + (0,) * (a - 1)
    for _ in range(p):
        y = _poly_mul(y, x, f, p)
    df = [i * f[i] for i in range(1, len(f))]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        ppr = p ** prec
        fy = _poly_eval(f, y, f, ppr)
        dfy = _poly_eval(df, y, f, ppr)
        corr = _poly_mul(fy, _poly_inv(dfy, f, p, prec), f, ppr)
        y = tuple((yi - ci) % ppr for yi, ci in zip(y, corr))
    return y


_FROB_CACHE: dict = {}


def _padic_val(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """Element of K (or its unramified extension) at tracked precision.

    Nonzero: value = p^v * unit, with the unit mantissa known modulo
    p^(abs_prec - v).  Zero-at-precision: only the bound |x| <= p^-abs_prec
    is known.  Instances are immutable.
    """

    __slots__ = ("params", "v", "unit", "abs_prec", "is_zero_at_precision")

    def __init__(self, params: RingParams, v, unit, abs_prec: int,
                 is_zero: bool = False):
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "abs_prec", abs_prec)
        if is_zero:
            object.__setattr__(self, "v", None)
            object.__setattr__(self, "unit", None)
            object.__setattr__(self, "is_zero_at_precision", True)
            return
        object.__setattr__(self, "is_zero_at_precision", False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "unit", unit)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PadicNumber is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, params: RingParams, abs_prec: int | None = None):
        return cls(params, None, None,
                   params.N if abs_prec is None else abs_prec, is_zero=True)

    @classmethod
    def from_rational(cls, params: RingParams, value, rel_prec=None):
        value = Fraction(value)
        N = params.N if rel_prec is None else rel_prec
        if value == 0:
            # an exact zero: known to arbitrary precision; cap generously
            return cls.zero(params, abs_prec=10 ** 9)
        p = params.p
        num, den = value.numerator, value.denominator
        if den % p == 0:
            vd = _padic_val(den, p)
            den //= p ** vd
            v = -vd + (_padic_val(num, p) if num % p == 0 else 0)
        else:
            v = _padic_val(num, p) if num % p == 0 else 0
        num //= p ** max(0, v)
        if v < 0 and num % p == 0:
            raise ValueError("unreduced fraction")
        pk = p ** N
        u = (num * pow(den, -1, pk)) % pk
        if params.a > 1:
            u = (u,) + (0,) * (params.a - 1)
        return cls(params, v, u, v + N)

    @classmethod
    def from_poly(cls, params: RingParams, coeffs, rel_prec=None):
        """Element of the unramified extension from rational coordinates."""
        if params.a == 1:
            return cls.from_rational(params, coeffs[0], rel_prec)
        N = params.N if rel_prec is None else rel_prec
        p = params.p
        fracs = [Fraction(c) for c in coeffs]
        if all(c == 0 for c in fracs):
            return cls.zero(params, abs_prec=10 ** 9)
        v = min(_padic_val(c.numerator, p) - _padic_val(c.denominator, p)
                for c in fracs if c != 0)
        pk = p ** N
        u = []
        for c in fracs:
            c = c / Fraction(p) ** v
            den = c.denominator
            u.append((c.numerator * pow(den, -1, pk)) % pk)
        u += [0] * (params.a - len(u))
        return cls(params, v, tuple(u), v + N)

    # -- basic queries ------------------------------------------------------

    @property
    def rel_prec(self):
        if self.is_zero_at_precision:
            return 0
        return self.abs_prec - self.v

    def valuation(self):
        if self.is_zero_at_precision:
            return self.abs_prec  # lower bound
        return self.v

    def _unit_tuple(self):
        return self.unit if self.params.a > 1 else (self.unit,)

    def _check(self, other):
        if self.params.p != other.params.p or self.params.a != other.params.a \
                or self.params.modulus != other.params.modulus:
            raise MismatchedParams("coefficient fields differ")

    # -- arithmetic ---------------------------------------------------------

    def _abs_tuple(self, abs_prec):
        """Value as coefficient tuple modulo p^abs_prec (absolute)."""
        p, a = self.params.p, self.params.a
        pk = p ** max(abs_prec, 0)
        if self.is_zero_at_precision or abs_prec <= (self.v or 0):
            return (0,) * a
        if self.v >= 0:
            scale = p ** self.v
            return tuple((c * scale) % pk for c in self._unit_tuple())
        raise ValueError("negative valuation has no integral residue")

    def __add__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.params, other)
        self._check(other)
        if self.is_zero_at_precision and other.is_zero_at_precision:
            return PadicNumber.zero(self.params,
                                    min(self.abs_prec, other.abs_prec))
        if self.is_zero_at_precision:
            return other._truncate_abs(min(self.abs_prec, other.abs_prec))
        if other.is_zero_at_precision:
            return self._truncate_abs(min(self.abs_prec, other.abs_prec))
        p, a = self.params.p, self.params.a
        A = min(self.abs_prec, other.abs_prec)
        vmin = min(self.v, other.v)
        k = A - vmin
        if k <= 0:
            return PadicNumber.zero(self.params, A)
        pk = p ** k
        s1 = p ** (self.v - vmin)
        s2 = p ** (other.v - vmin)
        coeffs = tuple((c1 * s1 + c2 * s2) % pk for c1, c2 in
                       zip(self._unit_tuple(), other._unit_tuple()))
        return PadicNumber._from_mantissa(self.params, vmin, coeffs, A)

    @classmethod
    def _from_mantissa(cls, params, v, coeffs, abs_prec):
        """Normalise (v, coeffs mod p^(abs_prec - v)) into canonical form."""
        p = params.p
        k = abs_prec - v
        if k <= 0 or not any(coeffs):
            return cls.zero(params, abs_prec)
        shift = min(_padic_val(c, p) if c else k for c in coeffs)
        shift = min(shift, k)
        if shift >= k:
            return cls.zero(params, abs_prec)
        if shift:
            v += shift
            k -= shift
            pk = p ** k
            coeffs = tuple((c // p ** shift) % pk for c in coeffs)
        else:
            pk = p ** k
            coeffs = tuple(c % pk for c in coeffs)
        unit = coeffs if params.a > 1 else coeffs[0]
        return cls(params, v, unit, abs_prec)

    def _truncate_abs(self, abs_prec):
        if self.is_zero_at_precision:
            return PadicNumber.zero(self.params, min(self.abs_prec, abs_prec))
        if abs_prec >= self.abs_prec:
            return self
        return PadicNumber._from_mantissa(
            self.params, self.v, self._unit_tuple(), abs_prec)

    def __neg__(self):
        if self.is_zero_at_precision:
            return self
        k = self.rel_prec
        pk = self.params.p ** k
        coeffs = tuple((-c) % pk for c in self._unit_tuple())
        unit = coeffs if self.params.a > 1 else coeffs[0]
        return PadicNumber(self.params, self.v, unit, self.abs_prec)

    def __sub__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.params, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.params, other)
        self._check(other)
        p = self.params.p
        if self.is_zero_at_precision or other.is_zero_at_precision:
            A1 = self.abs_prec if self.is_zero_at_precision else self.v
            A2 = other.abs_prec if other.is_zero_at_precision else other.v
            return PadicNumber.zero(self.params, min(A1 + A2, 10 ** 9))
        k = min(self.rel_prec, other.rel_prec)
        v = self.v + other.v
        pk = p ** k
        if self.params.a == 1:
            unit = (self.unit * other.unit) % pk
        else:
            unit = _poly_mul(self._unit_tuple(), other._unit_tuple(),
                             self.params.modulus, pk)
        return PadicNumber._from_mantissa(
            self.params, v, unit if isinstance(unit, tuple) else (unit,),
            v + k)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def inverse(self):
        if self.is_zero_at_precision:
            raise NonInvertible("zero at working precision")
        p, k = self.params.p, self.rel_prec
        pk = p ** k
        if self.params.a == 1:
            unit = pow(self.unit, -1, pk)
        else:
            unit = _poly_inv(self._unit_tuple(), self.params.modulus, p, k)
        return PadicNumber(self.params, -self.v, unit, -self.v + k)

    def __truediv__(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.params, other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PadicNumber.from_rational(self.params, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons and export --------------------------------------------

    def is_zero(self):
        return self.is_zero_at_precision

    def congruent(self, other) -> bool:
        """Equality at the joint working precision."""
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.params, other)
        return (self - other).is_zero_at_precision

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.congruent(other)
        return NotImplemented

    def __hash__(self):  # pragma: no cover
        raise TypeError("PadicNumber is not hashable")

    def sigma(self):
        """Witt Frobenius on coefficients; identity for a = 1."""
        if self.params.a == 1 or self.is_zero_at_precision:
            return self
        key = (self.params.p, self.params.a, self.params.modulus,
               self.params.N)
        if key not in _FROB_CACHE:
            _FROB_CACHE[key] = _frobenius_generator_image(self.params)
        y = _FROB_CACHE[key]
        p, k = self.params.p, self.rel_prec
        pk = p ** k
        f = self.params.modulus
        out = (0,) * self.params.a
        for c in reversed(self._unit_tuple()):
            out = _poly_mul(out, y, f, pk)
            out = ((out[0] + c) % pk,) + out[1:]
        return PadicNumber._from_mantissa(self.params, self.v, out,
                                          self.abs_prec)

    def to_fraction(self) -> Fraction:
        """Rational reconstruction of a (ground-field) value.

        Uses the half-extended Euclidean algorithm modulo p^rel_prec;
        raises ValueError when no small-height representative exists.
        """
        if self.is_zero_at_precision:
            return Fraction(0)
        if self.params.a > 1 and any(self._unit_tuple()[1:]):
            raise ValueError("element not in the ground field")
        p = self.params.p
        k = self.rel_prec
        m = p ** k
        u = self._unit_tuple()[0] % m
        # lattice reduction on (m, 0), (u, 1)
        bound = int(m ** 0.5) // 2 or 1
        r0, s0 = m, 0
        r1, s1 = u, 1
        while r1 > bound:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        if s1 == 0 or abs(s1) > bound * 4 or s1 % p == 0:
            raise ValueError("no small rational representative")
        frac = Fraction(r1, s1)
        # verify: frac must reduce back to u mod p^k
        den = frac.denominator
        if den % p == 0 or (frac.numerator * pow(den, -1, m) - u) % m:
            raise ValueError("rational reconstruction failed")
        return frac * Fraction(p) ** self.v

    def __repr__(self):
        if self.is_zero_at_precision:
            return f"O(p^{self.abs_prec})"
        try:
            return str(self.to_fraction())
        except ValueError:
            return f"p^{self.v}*{self.unit} + O(p^{self.abs_prec})"
