"""Exact Walsh spectra of (n, n)-functions and their moment sums.

``W_F(a, b) = sum_x (-1)^(Tr(b F(x)) + Tr(a x))``.  Each component
``Tr(b F(x))`` goes through a +-1 butterfly transform; the trace form
``Tr(a x)`` is matched to the transform's dot product through
:attr:`FieldSpec.trace_dual`.  Everything is integer arithmetic: int64
inside a component, Python ints once sums could overflow.
"""

from dataclasses import dataclass

import numpy as np

from .vbf import modify_at

# Above this, full 2^n x 2^n tables are not materialized.
MAX_TABLE_N = 12
# Per-component power sums are bounded by 2^(4n); int64 is exact up to here.
_INT64_SAFE_N = 14


@dataclass(frozen=True)
class WalshTable:
    """``w[a, b] = W_F(a, b)`` for all a, b."""

    n: int
    w: np.ndarray


@dataclass(frozen=True)
class MomentReport:
    k: int
    value: int
    twist: tuple = None

    def to_json(self):
        twist = None if self.twist is None else [f"0x{t:x}" for t in self.twist]
        return {"k": self.k, "twist": twist, "value": str(self.value)}


def fwht(values):
    """Unnormalized Walsh-Hadamard butterfly along the last axis (a copy).

    ``out[..., u] = sum_x values[..., x] * (-1)^popcount(u & x)``.  Applying it
    twice multiplies by the length.
    """
    a = np.array(values, dtype=np.int64)
    q = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < q:
        v = a.reshape(*lead, q // (2 * h), 2, h)
        lo = v[..., 0, :] + v[..., 1, :]
        hi = v[..., 0, :] - v[..., 1, :]
        v[..., 0, :] = lo
        v[..., 1, :] = hi
        h *= 2
    return a


def _component_signs(F, bs):
    """Rows ``(-1)^Tr(b F(x))`` for each b in ``bs``."""
    spec = F.spec
    prods = spec.mul_vec(np.asarray(bs)[:, None], F.table[None, :])
    return 1 - 2 * spec.trace_table[prods].astype(np.int64)


def walsh_columns(F, bs):
    """Array ``out[i, a] = W_F(a, bs[i])``."""
    spectra = fwht(_component_signs(F, bs))
    return spectra[:, F.spec.trace_dual]


def iter_walsh_columns(F, chunk=None):
    """Yield ``(b_values, block)`` with ``block[i, a] = W_F(a, b_values[i])``.

    Streams over b so memory stays at ``chunk * 2^n`` entries.
    """
    q = F.spec.size
    if chunk is None:
        chunk = max(1, min(q, (1 << 22) // q))
    for start in range(0, q, chunk):
        bs = np.arange(start, min(q, start + chunk))
        yield bs, walsh_columns(F, bs)


def walsh_full(F):
    if F.n > MAX_TABLE_N:
        raise MemoryError(
            f"a full Walsh table at n={F.n} has 2^{2 * F.n} entries; use the streaming moments"
        )
    bs = np.arange(F.spec.size)
    w = walsh_columns(F, bs).T.copy()
    w.setflags(write=False)
    return WalshTable(F.n, w)


def walsh_naive(F):
    """O(2^(3n)) double loop straight from the definition; a test oracle."""
    spec = F.spec
    q = spec.size
    out = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            s = 0
            for x in range(q):
                s += 1 - 2 * (spec.trace(spec.mul(b, F(x))) ^ spec.trace(spec.mul(a, x)))
            out[a, b] = s
    return WalshTable(F.n, out)


def _weighted_power_sum(block, k, weight, n):
    """Exact sum of ``block**k * weight``; per-row int64, then Python ints."""
    if n <= _INT64_SAFE_N:
        rows = (block**k * weight).sum(axis=-1)
        return sum(int(r) for r in rows)
    obj = block.astype(object)
    return int((obj**k * weight).sum())


def trace_signs(spec, c):
    """Vector ``(-1)^Tr(c x)`` over all x."""
    return 1 - 2 * spec.trace_table[spec.mul_vec(spec.elements(), c)].astype(np.int64)


def _check_order(k, allowed):
    if k not in allowed:
        raise ValueError(f"moment order must be one of {sorted(allowed)}, got {k}")


def moment(W, k):
    """Sum of W_F(a, b)^k over all a, b (b = 0 included)."""
    _check_order(k, {2, 3, 4})
    return MomentReport(k, _weighted_power_sum(W.w.T, k, 1, W.n))


def twisted_moment(W, k, x0, y0, spec):
    """Sum of W_F(a, b)^k (-1)^Tr(a x0 + b y0) over all a, b."""
    _check_order(k, {2, 3})
    sa = trace_signs(spec, x0)
    sb = trace_signs(spec, y0)
    weight = sb[:, None] * sa[None, :]
    return MomentReport(k, _weighted_power_sum(W.w.T, k, weight, W.n), (x0, y0))


def moment_streaming(F, k, twist=None, chunk=None):
    """Same value as :func:`moment` / :func:`twisted_moment`, one b-block at a time."""
    _check_order(k, {2, 3, 4} if twist is None else {2, 3})
    spec = F.spec
    if twist is None:
        sa = np.ones(spec.size, dtype=np.int64)
        sb = sa
    else:
        sa = trace_signs(spec, twist[0])
        sb = trace_signs(spec, twist[1])
    total = 0
    for bs, block in iter_walsh_columns(F, chunk):
        total += _weighted_power_sum(block, k, sb[bs][:, None] * sa[None, :], spec.n)
    return MomentReport(k, total, twist)


def d_factor(spec, b, eps):
    """D(b) = 1 - (-1)^Tr(b eps), in {0, 2}."""
    if eps == 0:
        raise ValueError("eps must be nonzero")
    return 1 - (1 - 2 * spec.trace(spec.mul(b, eps)))


def e_factor(spec, a, b, x0, y0, eps):
    """E(a, b) = (-1)^Tr(a x0 + b y0) D(b), in {-2, 0, 2}."""
    sign = 1 - 2 * (spec.trace(spec.mul(a, x0)) ^ spec.trace(spec.mul(b, y0)))
    return sign * d_factor(spec, b, eps)


def e_matrix(spec, x0, y0, eps):
    """``E[a, b]`` for all a, b, vectorized."""
    if eps == 0:
        raise ValueError("eps must be nonzero")
    d = 1 - trace_signs(spec, eps)
    return trace_signs(spec, x0)[:, None] * (trace_signs(spec, y0) * d)[None, :]


def verify_walsh_diff(F, x0, eps):
    """Check W_F'(a,b) = W_F(a,b) - E(a,b) at every (a,b), both sides computed separately."""
    G = modify_at(F, x0, eps)
    lhs = walsh_full(G).w
    rhs = walsh_full(F).w - e_matrix(F.spec, x0, F(x0), eps)
    return bool(np.array_equal(lhs, rhs))


def walsh_csv_rows(W):
    """Rows (a, b, W) in (a, b) order."""
    q = 1 << W.n
    for a in range(q):
        for b in range(q):
            yield a, b, int(W.w[a, b])
