"""Arithmetic in GF(2^n), 1 <= n <= 16, in a polynomial basis.

Elements are plain ints: bit i is the coefficient of g^i, where g is the
class of x modulo the field's primitive modulus.  Multiplication, powers and
roots go through discrete-log tables built once per field.
"""

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

MAX_N = 16

# Lexicographically smallest primitive polynomial of each degree, bit k = coeff of x^k.
PRIMITIVE_MODULI = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x402B,
    15: 0x8003,
    16: 0x1002D,
}


class FieldError(ValueError):
    """Invalid field parameters or an undefined field operation."""


@dataclass(frozen=True)
class DLogTables:
    """``antilog[e] = g^e`` and ``log[x]`` its inverse on nonzero ``x``.

    ``log`` has length ``2^n`` with ``log[0] = -1`` as a sentinel so it can be
    indexed directly by element values.
    """

    log: np.ndarray
    antilog: np.ndarray


def _xtime_order(n, modulus):
    """Multiplicative order of x modulo ``modulus`` (0 if x never returns to 1)."""
    order = (1 << n) - 1
    x = 1
    for k in range(1, order + 1):
        x <<= 1
        if (x >> n) & 1:
            x ^= modulus
        if x == 1:
            return k
    return 0


def is_primitive(n, modulus):
    """True if ``modulus`` is a primitive polynomial of degree ``n`` over GF(2)."""
    if modulus >> n != 1:
        return False
    return _xtime_order(n, modulus) == (1 << n) - 1


@dataclass(frozen=True)
class FieldSpec:
    n: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise FieldError(f"extension degree must be in [1, {MAX_N}], got {self.n}")
        if not is_primitive(self.n, self.modulus):
            raise FieldError(f"0x{self.modulus:x} is not a primitive polynomial of degree {self.n}")

    @property
    def size(self):
        return 1 << self.n

    @property
    def order(self):
        """Order of the multiplicative group, 2^n - 1."""
        return (1 << self.n) - 1

    @cached_property
    def tables(self):
        q, order = self.size, self.order
        antilog = np.empty(order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for e in range(order):
            antilog[e] = x
            log[x] = e
            x <<= 1
            if x & q:
                x ^= self.modulus
        antilog.setflags(write=False)
        log.setflags(write=False)
        return DLogTables(log=log, antilog=antilog)

    @cached_property
    def trace_table(self):
        """``trace_table[x] = Tr(x)`` for every element, as uint8."""
        out = np.zeros(self.size, dtype=np.uint8)
        xs = np.arange(self.size, dtype=np.int64)
        acc = np.zeros(self.size, dtype=np.int64)
        cur = xs
        for _ in range(self.n):
            acc ^= cur
            cur = self.mul_vec(cur, cur)
        # Tr(x) lies in GF(2) so acc is 0 or 1
        if np.any(acc > 1):
            raise AssertionError("trace left GF(2); arithmetic tables are corrupt")
        out[:] = acc
        out.setflags(write=False)
        return out

    @cached_property
    def trace_dual(self):
        """Map ``a -> mask`` with ``Tr(a*x) = popcount(mask & x) mod 2``.

        Bit i of the mask is ``Tr(a * g^i)``; converts the field trace form
        into the dot product used by the butterfly transform.
        """
        a = np.arange(self.size, dtype=np.int64)
        mask = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            mask |= self.trace_table[self.mul_vec(a, 1 << i)].astype(np.int64) << i
        mask.setflags(write=False)
        return mask

    def to_json(self):
        return {"n": self.n, "modulus": f"0x{self.modulus:x}"}

    def generator_order(self):
        return _xtime_order(self.n, self.modulus)

    # scalar arithmetic

    def check(self, x):
        if not 0 <= x < self.size:
            raise FieldError(f"{x} is not an element of GF(2^{self.n})")
        return x

    @staticmethod
    def add(x, y):
        return x ^ y

    def mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        t = self.tables
        return int(t.antilog[(t.log[x] + t.log[y]) % self.order])

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^n)")
        t = self.tables
        return int(t.antilog[(-t.log[x]) % self.order])

    def pow(self, x, k):
        if x == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if k == 0 else 0
        t = self.tables
        return int(t.antilog[(int(t.log[x]) * k) % self.order])

    def trace(self, x):
        return int(self.trace_table[x])

    def gen_pow(self, e):
        """g^e for any integer e."""
        return int(self.tables.antilog[e % self.order])

    # vectorized arithmetic on int arrays

    def mul_vec(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        t = self.tables
        lx, ly = t.log[x], t.log[y]
        prod = t.antilog[(lx + ly) % self.order]
        return np.where((lx < 0) | (ly < 0), 0, prod)

    def pow_vec(self, x, k):
        """Elementwise x^k with the same 0^0 = 1 convention as :meth:`pow`."""
        x = np.asarray(x, dtype=np.int64)
        t = self.tables
        lx = t.log[x]
        out = t.antilog[(lx * k) % self.order]
        zero = 1 if k == 0 else 0
        if k < 0 and np.any(lx < 0):
            raise ZeroDivisionError("negative power of 0")
        return np.where(lx < 0, zero, out)

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def subfield(self, m):
        """Elements of the subfield GF(2^m); requires m | n."""
        if self.n % m:
            raise FieldError(f"GF(2^{m}) is not a subfield of GF(2^{self.n})")
        step = self.order // ((1 << m) - 1)
        return [0] + [self.gen_pow(step * j) for j in range((1 << m) - 1)]


def field_new(n, modulus=None):
    """Field GF(2^n) with the built-in modulus, or a validated override."""
    if not 1 <= n <= MAX_N:
        raise FieldError(f"extension degree must be in [1, {MAX_N}], got {n}")
    return _field_cached(n, PRIMITIVE_MODULI[n] if modulus is None else modulus)


_FIELDS = {}


def _field_cached(n, modulus):
    key = (n, modulus)
    if key not in _FIELDS:
        _FIELDS[key] = FieldSpec(n, modulus)
    return _FIELDS[key]


# integer and cyclotomic utilities


@dataclass(frozen=True)
class CyclotomicCoset:
    representative: int
    members: tuple


def coset_of(i, n):
    """Cyclotomic coset of ``i`` modulo 2^n - 1, sorted."""
    order = (1 << n) - 1
    i %= order
    members = {i}
    j = (2 * i) % order
    while j not in members:
        members.add(j)
        j = (2 * j) % order
    return CyclotomicCoset(min(members), tuple(sorted(members)))


def cyclotomic_cosets(n):
    """Partition of {1, ..., 2^n - 2} into cyclotomic cosets, by representative.

    The coset {0} is excluded: exponent 0 is a constant map.
    """
    order = (1 << n) - 1
    seen = bytearray(order)
    out = []
    for i in range(1, order):
        if seen[i]:
            continue
        c = coset_of(i, n)
        for j in c.members:
            seen[j] = 1
        out.append(c)
    return out


def coset_representatives(n):
    return [c.representative for c in cyclotomic_cosets(n)]


def gcd3(a, b, c):
    return gcd(gcd(a, b), c)


def reduce_exponent(e, n):
    """Smallest exponent in [0, 2^n - 1] giving the same power map as ``e``."""
    if e < 0:
        raise FieldError("negative exponents are not power maps on all of GF(2^n)")
    if e == 0:
        return 0
    return (e - 1) % ((1 << n) - 1) + 1


def binom_odd(a, b):
    """Parity of C(a, b) via Lucas: odd iff the bits of b are a subset of a's."""
    return 0 <= b <= a and (b & ~a) == 0


# GF(2)[x] polynomials as int bitmasks


def poly_degree(p):
    return p.bit_length() - 1


def poly_mod(p, d):
    if d == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    dd = d.bit_length()
    while p.bit_length() >= dd:
        p ^= d << (p.bit_length() - dd)
    return p


def poly_divides(d, p):
    return poly_mod(p, d) == 0


def poly_mul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_powmod(base, e, mod):
    result = 1
    base = poly_mod(base, mod)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base), mod)
        base = poly_mod(poly_mul(base, base), mod)
        e >>= 1
    return poly_mod(result, mod)


def poly_str(p):
    if p == 0:
        return "0"
    terms = []
    for k in range(poly_degree(p), -1, -1):
        if (p >> k) & 1:
            terms.append("1" if k == 0 else "x" if k == 1 else f"x^{k}")
    return " + ".join(terms)


def minimal_polynomial(spec, i):
    """Minimal polynomial of g^i over GF(2), as a bitmask.

    Expands prod_{j in C_i} (x - g^j) in GF(2^n)[x] and checks every
    coefficient landed in GF(2).
    """
    if not 0 <= i <= spec.order - 1:
        raise FieldError(f"exponent {i} outside [0, {spec.order - 1}]")
    if i == 0:
        roots = [1]
    else:
        roots = [spec.gen_pow(j) for j in coset_of(i, spec.n).members]
    coeffs = [1]  # coeffs[k] = coefficient of x^k, field elements
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] ^= c
            nxt[k] ^= spec.mul(c, r)
        coeffs = nxt
    mask = 0
    for k, c in enumerate(coeffs):
        if c not in (0, 1):
            raise AssertionError(f"minimal polynomial coefficient {c} outside GF(2)")
        mask |= c << k
    return mask
