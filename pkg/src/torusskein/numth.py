"""Modular arithmetic, roots of unity, exact Z[zeta_n] arithmetic and square classes."""
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels


def mod_inverse(a, r):
    """Representative of a^{-1} mod r in 1..r-1 (0 when r == 1)."""
    if r < 1:
        raise ValueError(f"modulus must be positive, got {r}")
    if math.gcd(a, r) != 1:
        raise ValueError(f"{a} is not invertible mod {r}")
    if r == 1:
        return 0
    return pow(a, -1, r)


def inverse_witness(a, r):
    """The integer I in 0..a-1 with a * a_r^* = I*r + 1.

    For r == 1 the representative a_1^* = 1 is used, so I = a - 1.
    """
    if a < 1 or r < 1:
        raise ValueError("a and r must be positive")
    if math.gcd(a, r) != 1:
        raise ValueError(f"gcd({a}, {r}) != 1")
    inv = mod_inverse(a, r) if r > 1 else 1
    I, rem = divmod(a * inv - 1, r)
    assert rem == 0 and 0 <= I < a
    return I


def factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def is_squarefree(n):
    return all(e == 1 for e in factorize(n).values())


# ---------------------------------------------------------------- roots of unity

@dataclass(frozen=True)
class RootOfUnity:
    """Primitive root exp(2 i pi s / n); the constructor insists on gcd(s, n) = 1."""
    order: int
    exponent: int

    def __post_init__(self):
        n, s = self.order, self.exponent
        if n < 1:
            raise ValueError(f"order must be >= 1, got {n}")
        if n == 1:
            object.__setattr__(self, "exponent", 0)
            return
        s %= n
        if math.gcd(s, n) != 1:
            raise ValueError(f"exponent {self.exponent} not coprime to order {n}")
        object.__setattr__(self, "exponent", s)

    @classmethod
    def from_fraction(cls, s, n):
        """exp(2 i pi s/n) with (s, n) reduced to lowest terms."""
        g = math.gcd(s, n)
        return cls(n // g, (s // g) % (n // g) if n // g > 1 else 0)

    @classmethod
    def from_pi(cls, s, r):
        """exp(i pi s / r), i.e. exp(2 i pi s / (2r))."""
        return cls.from_fraction(s, 2 * r)

    @property
    def value(self):
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def __complex__(self):
        return self.value

    def power(self, e):
        """xi^e as a (possibly non-primitive) root, reduced."""
        return RootOfUnity.from_fraction(self.exponent * e, self.order)

    def pow_value(self, e):
        return cmath.exp(2j * math.pi * ((self.exponent * e) % self.order) / self.order)

    @property
    def half_order(self):
        """r for an even-order root of order 2r."""
        if self.order % 2:
            raise ValueError("odd-order root has no r with order 2r")
        return self.order // 2

    def __str__(self):
        return f"exp(2*pi*i*{self.exponent}/{self.order})"


def negate_root(xi):
    """-xi for xi of even order 2r: order r when r odd, 2r when r even."""
    if xi.order % 2:
        raise ValueError(f"negate_root needs an even order, got {xi.order}")
    return RootOfUnity.from_fraction(2 * xi.exponent + xi.order, 2 * xi.order)


def in_U(n):
    """Membership of order n in the Gauss-sum domain: n > 2, n != 2 mod 4."""
    return n > 2 and n % 4 != 2


def roots_of_order(n):
    return [RootOfUnity(n, s) for s in range(1, n) if math.gcd(s, n) == 1] if n > 1 else [RootOfUnity(1, 0)]


# --------------------------------------------------------------- cyclotomic ring

def _poly_divexact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c, rem = divmod(num[i + len(den) - 1], lead)
        assert rem == 0
        out[i] = c
        if c:
            for t, dt in enumerate(den):
                num[i + t] -= c * dt
    assert not any(num[: len(den) - 1])
    return out


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic(n):
    """Coefficients of Phi_n (low degree first), by dividing x^n - 1 by Phi_d for d | n, d < n."""
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in divisors(n)[:-1]:
        den = _poly_mul(den, cyclotomic(d))
    return tuple(_poly_divexact(num, den))


@lru_cache(maxsize=None)
def _phi_array(n):
    return np.array(cyclotomic(n), dtype=np.int64)


class GroupRingElement:
    """Element of Z[zeta_n] stored as an unreduced length-n integer array."""
    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        if coeffs is None:
            c = np.zeros(order, dtype=np.int64)
        else:
            c = np.asarray(coeffs, dtype=np.int64).copy()
            if c.shape != (order,):
                raise ValueError(f"coefficient array must have length {order}")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, order, e, c=1):
        a = np.zeros(order, dtype=np.int64)
        a[e % order] = c
        return cls(order, a)

    @classmethod
    def constant(cls, order, c):
        return cls.monomial(order, 0, c)

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            raise TypeError("expected GroupRingElement")
        if other.order != self.order:
            raise ValueError(f"order mismatch {self.order} vs {other.order}; promote first")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement(self.order, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GroupRingElement(self.order, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupRingElement(self.order, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return GroupRingElement(self.order, self.coeffs * int(other))
        self._check(other)
        return GroupRingElement(self.order, kernels.cyclic_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale_by_power(self, e):
        """Multiply by zeta_n^e."""
        return GroupRingElement(self.order, np.roll(self.coeffs, e % self.order))

    def promote(self, order):
        if order % self.order:
            raise ValueError(f"cannot promote order {self.order} into {order}")
        f = order // self.order
        a = np.zeros(order, dtype=np.int64)
        a[::f] = self.coeffs
        return GroupRingElement(order, a)

    def reduced(self):
        """Canonical remainder mod Phi_n (length phi(n))."""
        return kernels.cyclo_rem(self.coeffs, _phi_array(self.order))

    def is_zero(self):
        return not self.reduced().any()

    def equals(self, other):
        self._check(other)
        return (self - other).is_zero()

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        if other.order != self.order:
            n = math.lcm(self.order, other.order)
            return self.promote(n).equals(other.promote(n))
        return self.equals(other)

    __hash__ = None

    def embed(self):
        n = self.order
        z = np.exp(2j * np.pi * np.arange(n) / n)
        return complex(np.dot(self.coeffs, z))

    def __complex__(self):
        return self.embed()

    def __repr__(self):
        terms = [f"{c}*z{self.order}^{j}" for j, c in enumerate(self.coeffs.tolist()) if c]
        return "GroupRingElement(" + (" + ".join(terms) or "0") + ")"


def group_ring_add(x, y):
    return x + y


def group_ring_mul(x, y):
    return x * y


def group_ring_scale_by_power(x, e):
    return x.scale_by_power(e)


def group_ring_equals(x, y):
    return x.equals(y)


def promote_common(*xs):
    n = 1
    for x in xs:
        n = math.lcm(n, x.order)
    return [x.promote(n) for x in xs]


# --------------------------------------------------------------- square classes

@dataclass(frozen=True)
class SquareClassTable:
    modulus: int
    squares: tuple
    count: int


@lru_cache(maxsize=None)
def invertible_squares(d):
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return SquareClassTable(1, (0,), 1)
    sq = sorted({(y * y) % d for y in range(1, d) if math.gcd(y, d) == 1})
    return SquareClassTable(d, tuple(sq), len(sq))


def square_count_closed(p, alpha):
    """|Lambda_{p^alpha}| from the closed forms."""
    if alpha == 0:
        return 1
    if p == 2:
        return 1 if alpha <= 2 else 2 ** (alpha - 3)
    return (p - 1) * p ** (alpha - 1) // 2


def sum_squares_over_divisors(k):
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(invertible_squares(d).count for d in divisors(k))


def sum_squares_closed(k):
    """Product closed form of sum_{d|k} |Lambda_d| by the residue of k mod 4."""
    f = factorize(k)
    prod = 1
    for p, a in f.items():
        if p != 2:
            prod *= (p ** a + 1) // 2
    a2 = f.get(2, 0)
    if a2 == 0:
        return prod
    if a2 == 1:
        return 2 * prod
    return (2 + 2 ** (a2 - 2)) * prod
