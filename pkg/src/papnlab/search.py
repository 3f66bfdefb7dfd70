"""Exhaustive searches: 0-APN non-APN power maps, polynomial scans, conjecture sweeps."""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import groupby

import numpy as np

from . import differential as dif
from .expr import Constant, FuncExpr, Monomial, format_expr
from .families import monomial_0apn_direct
from .gf2n import MAX_N, coset_representatives, field_new, reduce_exponent
from .identities import PreconditionError, conjecture_probe
from .vbf import VBF, from_power

# Candidate rows held in memory per block during a polynomial scan.
_BLOCK_ROWS = 1 << 18
# Rough single-core throughput of the batch scan, for cost estimates.
_CANDIDATES_PER_SECOND = 2e6


class InfeasibleScan(ValueError):
    pass


def _map(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Table1Row:
    n: int
    exponents: tuple
    delta: int

    def to_json(self):
        return {"n": self.n, "exponents": list(self.exponents), "delta": self.delta}


def power_map_delta(spec, m):
    """Differential uniformity of x^m from the single row a = 1.

    (x + a)^m + x^m = a^m ((t + 1)^m + t^m) with x = a t, so every nonzero
    row is a permutation of row 1.
    """
    xs = spec.elements()
    row = spec.pow_vec(xs ^ 1, m) ^ spec.pow_vec(xs, m)
    return int(np.bincount(row, minlength=spec.size).max())


def _table1_for_n(n):
    spec = field_new(n)
    found = []
    for e in coset_representatives(n):
        if e > spec.size - 2 or not monomial_0apn_direct(spec, e):
            continue
        delta = power_map_delta(spec, e)
        if delta > 2:
            found.append((delta, e))
    rows = []
    for delta, group in groupby(sorted(found), key=lambda t: t[0]):
        rows.append(Table1Row(n, tuple(sorted(e for _, e in group)), delta))
    rows.sort(key=lambda r: r.exponents[0])
    return rows


def table1_scan(n_min, n_max, jobs=1):
    """Power maps x^e (e a coset representative) that are 0-APN but not APN, grouped by Delta."""
    if not 1 <= n_min <= n_max <= MAX_N:
        raise ValueError(f"need 1 <= n_min <= n_max <= {MAX_N}")
    out = []
    for rows in _map(_table1_for_n, range(n_min, n_max + 1), jobs):
        out.extend(rows)
    return out


@dataclass
class ScanSummary:
    n: int
    mode: str
    x0: int
    candidates: int
    hits: int
    spectra: Counter = field(default_factory=Counter)
    samples: list = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "mode": self.mode,
            "x0": f"0x{self.x0:x}",
            "candidates": str(self.candidates),
            "hits": str(self.hits),
            "spectra": {k: v for k, v in sorted(self.spectra.items())},
            "samples": self.samples,
        }


_SCAN_LIMITS = {"f2": 5, "full": 3}
_SAMPLE_COUNT = 8


def scan_size(n, mode):
    q = 1 << n
    return 2**q if mode == "f2" else q**q


def _check_scan(n, mode):
    if mode not in _SCAN_LIMITS:
        raise ValueError(f"unknown coefficient set {mode!r}; use 'f2' or 'full'")
    if n > _SCAN_LIMITS[mode]:
        total = scan_size(n, mode)
        hours = total / _CANDIDATES_PER_SECOND / 3600
        raise InfeasibleScan(
            f"{mode} scan at n={n} has {total:.3e} candidates "
            f"(about {hours:.2e} core-hours); the limit is n <= {_SCAN_LIMITS[mode]}"
        )


def _quadruple_triples(q, x0):
    """Triples u < v < w with {x0, u, v, w} distinct and u + v + w = x0."""
    out = []
    for u in range(q):
        for v in range(u + 1, q):
            w = x0 ^ u ^ v
            if x0 not in (u, v) and v < w:
                out.append((u, v, w))
    return np.array(out, dtype=np.int64).reshape(-1, 3)


def batch_x0_apn(tables, x0, triples=None):
    """x0-APN verdict for every row of ``tables`` (quadruple form)."""
    q = tables.shape[1]
    if triples is None:
        triples = _quadruple_triples(q, x0)
    ok = np.ones(len(tables), dtype=bool)
    base = tables[:, x0]
    for u, v, w in triples:
        ok &= (base ^ tables[:, u] ^ tables[:, v] ^ tables[:, w]) != 0
    return ok


def batch_x0_apn_derivative(tables, x0):
    """x0-APN verdict per row by counting solutions of D_aF(x) = D_aF(x0)."""
    q = tables.shape[1]
    xs = np.arange(q)
    ok = np.ones(len(tables), dtype=bool)
    for a in range(1, q):
        d = tables[:, xs ^ a] ^ tables
        ok &= (d == d[:, x0][:, None]).sum(axis=1) == 2
    return ok


def batch_is_apn(tables):
    q = tables.shape[1]
    xs = np.arange(q)
    ok = np.ones(len(tables), dtype=bool)
    for a in range(1, q):
        d = np.sort(tables[:, xs ^ a] ^ tables, axis=1)
        ok &= ~np.any(d[:, 2:] == d[:, :-2], axis=1)
    return ok


def _dtype(q):
    return np.uint8 if q <= 256 else np.uint16


class _PolyScan:
    """Enumerates sum_e c_e x^e, e = 0..2^n-1, c_e in the coefficient set.

    Candidate index = sum_e c_e B^e (B = 2 or 2^n).  The low ``k``
    coefficients are expanded into a block by repeated XOR of scaled
    monomial tables; each block fixes the high coefficients.
    """

    def __init__(self, n, mode, x0):
        _check_scan(n, mode)
        self.spec = spec = field_new(n)
        self.n, self.mode, self.x0 = n, mode, x0
        spec.check(x0)
        q = spec.size
        self.base = 2 if mode == "f2" else q
        xs = spec.elements()
        mono = np.stack([spec.pow_vec(xs, e) for e in range(q)])
        # scaled[e][c] = c * x^e as a table
        self.scaled = np.stack(
            [np.stack([spec.mul_vec(mono[e], c) for c in range(self.base)]) for e in range(q)]
        ).astype(_dtype(q))
        k = 0
        while k < q and self.base ** (k + 1) <= _BLOCK_ROWS:
            k += 1
        self.k = k
        self.block = self._expand(k)
        self.blocks = self.base ** (q - k)
        self.triples = _quadruple_triples(q, x0)

    def _expand(self, k):
        t = np.zeros((1, self.spec.size), dtype=self.scaled.dtype)
        for e in range(k):
            t = np.concatenate([t ^ self.scaled[e][c] for c in range(self.base)])
        return t

    def high_digits(self, j):
        digits = []
        for _ in range(self.spec.size - self.k):
            digits.append(j % self.base)
            j //= self.base
        return digits

    def run_block(self, j):
        offset = np.zeros(self.spec.size, dtype=self.scaled.dtype)
        for i, c in enumerate(self.high_digits(j)):
            offset ^= self.scaled[self.k + i][c]
        tables = self.block ^ offset
        papn = np.flatnonzero(batch_x0_apn(tables, self.x0, self.triples))
        sub = tables[papn]
        if not np.array_equal(batch_x0_apn_derivative(sub, self.x0), np.ones(len(sub), bool)):
            raise AssertionError("x0-APN verdicts disagree between the two batch tests")
        hits = papn[~batch_is_apn(sub)]
        return j, hits

    def index(self, j, low):
        return j * len(self.block) + int(low)

    def coefficients(self, idx):
        out = []
        for _ in range(self.spec.size):
            out.append(idx % self.base)
            idx //= self.base
        return out

    def table_of(self, idx):
        t = np.zeros(self.spec.size, dtype=np.int64)
        for e, c in enumerate(self.coefficients(idx)):
            t ^= self.scaled[e][c]
        return t

    def expression(self, idx):
        terms = []
        for e, c in reversed(list(enumerate(self.coefficients(idx)))):
            if c:
                terms.append(Constant(c) if e == 0 else Monomial(c, e))
        return format_expr(FuncExpr(tuple(terms))) if terms else "0x0"


_WORKER_SCAN = {}


def _scan_block(args):
    n, mode, x0, j = args
    key = (n, mode, x0)
    if key not in _WORKER_SCAN:
        _WORKER_SCAN.clear()
        _WORKER_SCAN[key] = _PolyScan(n, mode, x0)
    return _WORKER_SCAN[key].run_block(j)


def papn_poly_scan(spec, mode, x0=1, jobs=1, spectra=None):
    """Count polynomials with coefficients in GF(2) ("f2") or GF(2^n) ("full")
    that are x0-APN but not APN.

    Every hit is confirmed by both batch x0-APN tests.  ``spectra`` (default:
    on for f2) also tallies the differential spectrum of each hit.
    """
    scan = _PolyScan(spec.n, mode, x0)
    if spectra is None:
        spectra = mode == "f2"
    summary = ScanSummary(spec.n, mode, x0, scan_size(spec.n, mode), 0)
    jobs_args = [(spec.n, mode, x0, j) for j in range(scan.blocks)]
    if jobs <= 1:
        results = map(lambda a: scan.run_block(a[3]), jobs_args)
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_scan_block, jobs_args, chunksize=max(1, scan.blocks // (8 * jobs)))
    try:
        for j, hits in results:
            summary.hits += len(hits)
            for low in hits[: max(0, _SAMPLE_COUNT - len(summary.samples))]:
                summary.samples.append(scan.expression(scan.index(j, low)))
            if spectra:
                for low in hits:
                    F = VBF(scan.spec, scan.table_of(scan.index(j, low)))
                    summary.spectra[str(dif.spectrum(F))] += 1
    finally:
        if jobs > 1:
            pool.shutdown()
    return summary


def _x3_tr_x9(spec):
    # x^9 is reduced first: below n = 4 the exponent exceeds 2^n - 1.
    xs = spec.elements()
    table = spec.pow_vec(xs, 3) ^ spec.trace_table[spec.pow_vec(xs, reduce_exponent(9, spec.n))]
    return VBF(spec, table, "x^3 + Tr(x^9)")


def catalog(name, n_max, n_min=3):
    """Named lists of APN functions for the conjecture sweep."""
    builders = {
        "gold": lambda s: from_power(s, 3),
        "x3-tr-x9": _x3_tr_x9,
    }
    if name == "default":
        names = list(builders)
    elif name in builders:
        names = [name]
    else:
        raise ValueError(f"unknown catalog {name!r}; choose from default, {', '.join(builders)}")
    return [builders[nm](field_new(n)) for nm in names for n in range(n_min, n_max + 1)]


@dataclass
class ConjectureReport:
    entries: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)

    def to_json(self):
        return {
            "entries": self.entries,
            "counterexamples": self.counterexamples,
            "probes": sum(e["points"] for e in self.entries),
        }


def conjecture_scan(functions):
    """Look for x0-APN single-point modifications of APN functions, at every x0."""
    report = ConjectureReport()
    for F in functions:
        if not dif.is_apn(F):
            raise PreconditionError(f"{F!r} is not APN")
        full = 0
        for x0 in range(F.spec.size):
            probe = conjecture_probe(F, x0)
            full += probe.full_image
            for eps in probe.missing:
                report.counterexamples.append(
                    {"function": F.label, "n": F.n, "x0": f"0x{x0:x}", "eps": f"0x{eps:x}"}
                )
        report.entries.append(
            {"function": F.label, "n": F.n, "points": F.spec.size, "full_image_points": full}
        )
    return report
