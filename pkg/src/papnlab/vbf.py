"""Vectorial Boolean (n, n)-functions stored as full value tables."""

from dataclasses import dataclass

import numpy as np

from .expr import Constant, LinTerm, Monomial, TraceTerm, check_expr, parse_expr
from .gf2n import FieldError


class VBF:
    """An (n, n)-function: ``table[x] = F(x)`` for every x in GF(2^n).

    The table is a read-only int64 array so it can index other tables
    directly.  Instances are immutable and compare by field and table.
    """

    __slots__ = ("spec", "table", "label")

    def __init__(self, spec, table, label=None):
        table = np.array(table, dtype=np.int64)
        if table.shape != (spec.size,):
            raise ValueError(f"value table must have {spec.size} entries, got {table.shape}")
        if table.size and (table.min() < 0 or table.max() >= spec.size):
            raise ValueError(f"value table has entries outside GF(2^{spec.n})")
        table.setflags(write=False)
        self.spec = spec
        self.table = table
        self.label = label

    @property
    def n(self):
        return self.spec.n

    def __call__(self, x):
        return int(self.table[x])

    def __eq__(self, other):
        return (
            isinstance(other, VBF)
            and self.spec == other.spec
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.spec, self.table.tobytes()))

    def __repr__(self):
        name = self.label or "table"
        return f"VBF(n={self.n}, {name})"

    def __add__(self, other):
        if other.spec != self.spec:
            raise ValueError("functions live over different fields")
        return VBF(self.spec, self.table ^ other.table)


@dataclass(frozen=True)
class LinearizedPoly:
    """sum_i coeffs[i] * X^(2^i); a GF(2)-linear map of GF(2^n)."""

    coeffs: tuple

    @classmethod
    def identity(cls, n):
        return cls((1,) + (0,) * (n - 1))

    @classmethod
    def trace(cls, n):
        return cls((1,) * n)

    @classmethod
    def padded(cls, coeffs, n):
        coeffs = tuple(coeffs)
        if len(coeffs) > n:
            raise ValueError(f"linearized polynomial over GF(2^{n}) has at most {n} coefficients")
        return cls(coeffs + (0,) * (n - len(coeffs)))

    def apply(self, spec, values):
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros_like(values)
        cur = values
        for c in self.coeffs:
            if c:
                out ^= spec.mul_vec(cur, c)
            cur = spec.mul_vec(cur, cur)
        return out


@dataclass(frozen=True)
class UnivariatePoly:
    """sum of coefficient * x^exponent, exponents strictly increasing."""

    terms: tuple

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if exps != sorted(set(exps)):
            raise ValueError("exponents must be unique and increasing")
        if any(c == 0 for _, c in self.terms):
            raise ValueError("zero coefficients are not stored")

    def evaluate(self, spec):
        xs = spec.elements()
        out = np.zeros(spec.size, dtype=np.int64)
        for e, c in self.terms:
            out ^= spec.mul_vec(spec.pow_vec(xs, e), c)
        return out


def from_table(spec, table, label=None):
    return VBF(spec, table, label)


def from_power(spec, m):
    """The power map x -> x^m, 0 <= m <= 2^n - 1."""
    if not 0 <= m <= spec.size - 1:
        raise FieldError(f"exponent {m} outside [0, {spec.size - 1}]")
    return VBF(spec, spec.pow_vec(spec.elements(), m), label=f"x^{m}")


def from_univariate(spec, poly, label=None):
    return VBF(spec, poly.evaluate(spec), label)


def _eval_mono(spec, m, xs):
    return spec.mul_vec(spec.pow_vec(xs, m.exponent), m.coefficient)


def evaluate_expr(spec, expr):
    """Pointwise value table of a parsed expression."""
    check_expr(expr, spec)
    xs = spec.elements()
    out = np.zeros(spec.size, dtype=np.int64)
    for t in expr.terms:
        if isinstance(t, Monomial):
            out ^= _eval_mono(spec, t, xs)
        elif isinstance(t, TraceTerm):
            out ^= spec.trace_table[_eval_mono(spec, t.inner, xs)]
        elif isinstance(t, LinTerm):
            lin = LinearizedPoly.padded(t.coeffs, spec.n)
            out ^= lin.apply(spec, _eval_mono(spec, t.inner, xs))
        elif isinstance(t, Constant):
            out ^= t.value
    return out


def from_expression(spec, src):
    expr = parse_expr(src)
    return VBF(spec, evaluate_expr(spec, expr), label=str(expr))


def modify_at(F, x0, eps):
    """The (x0, eps)-modification: F everywhere except F(x0) + eps at x0."""
    if eps == 0:
        raise ValueError("modification requires a nonzero eps")
    F.spec.check(x0)
    F.spec.check(eps)
    table = F.table.copy()
    table[x0] ^= eps
    return VBF(F.spec, table, label=None)


def random_vbf(spec, rng):
    """Uniformly random function; ``rng`` is a numpy Generator."""
    return VBF(spec, rng.integers(0, spec.size, size=spec.size))


def is_quadratic(F):
    """All second derivatives D_a D_b F constant (affine and linear maps count)."""
    q = F.spec.size
    t = F.table
    xs = np.arange(q)
    shifts = xs[:, None] ^ xs[None, :]  # shifts[b, x] = x + b
    for a in range(1, q):
        da = t[xs ^ a] ^ t  # D_a F
        dab = da[shifts] ^ da[None, :]  # row b: D_b D_a F
        if np.any(dab != dab[:, :1]):
            return False
    return True
