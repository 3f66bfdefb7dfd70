"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from collections import Counter, defaultdict
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from papnlab import differential as dif  # noqa: E402
from papnlab import families as fam  # noqa: E402
from papnlab import identities as ids  # noqa: E402
from papnlab import search  # noqa: E402
from papnlab.gf2n import field_new  # noqa: E402
from papnlab.spectral import walsh_full, walsh_naive  # noqa: E402
from papnlab.vbf import VBF, from_expression, from_power, modify_at, random_vbf  # noqa: E402
from reference_values import (  # noqa: E402
    F2_SCAN_N3_HITS,
    F2_SCAN_N3_SPECTRA,
    F2_SCAN_N4_HITS,
    FULL_SCAN_N3_MIN_HITS,
    TABLE1,
)

TITLES = {
    1: "Table 1 reproduction, n = 1..10",
    2: "GF(2)-coefficient scans at x0 = 1, n = 3 and 4",
    3: "full-field scan at n = 3 exceeds six million",
    4: "spot claims",
    5: "theorem sweeps",
    6: "identity suite",
    7: "cross-oracle coherence",
    8: "conjecture evidence",
}
# criterion -> list of (ok, detail)
RESULTS = defaultdict(list)


def record(criterion, ok, detail):
    RESULTS[criterion].append((bool(ok), detail))
    assert ok, f"criterion {criterion}: {detail}"


def summary_lines():
    lines = []
    for c in sorted(RESULTS):
        parts = RESULTS[c]
        ok = all(p for p, _ in parts)
        details = "; ".join(d for _, d in parts)
        lines.append(f"criterion {c} {'PASS' if ok else 'FAIL'}: {TITLES[c]} ({details})")
    return lines


def test_criterion_1_table1():
    t = time.perf_counter()
    rows = search.table1_scan(1, 10, jobs=1)
    got = [(r.n, r.exponents, r.delta) for r in rows]
    record(1, got == TABLE1,
           f"{len(got)} groups, {'exact match' if got == TABLE1 else 'MISMATCH'}, "
           f"{time.perf_counter() - t:.1f}s")


def test_criterion_2_f2_scans():
    s3 = search.papn_poly_scan(field_new(3), "f2", 1)
    s4 = search.papn_poly_scan(field_new(4), "f2", 1, spectra=False)
    ok = (s3.hits == F2_SCAN_N3_HITS and dict(s3.spectra) == F2_SCAN_N3_SPECTRA
          and s4.hits == F2_SCAN_N4_HITS)
    record(2, ok, f"n=3: {s3.hits} hits {dict(s3.spectra)}; n=4: {s4.hits} hits")


def test_criterion_3_full_scan():
    from os import cpu_count

    t = time.perf_counter()
    s = search.papn_poly_scan(field_new(3), "full", 1, jobs=min(8, cpu_count() or 1))
    record(3, s.hits > FULL_SCAN_N3_MIN_HITS,
           f"{s.hits} hits of {s.candidates}, {time.perf_counter() - t:.1f}s")


def test_criterion_4_x7_n11_is_0apn():
    F = from_power(field_new(11), 7)
    ok = dif.is_x0_apn_rodier(F, 0) and dif.is_x0_apn_derivative(F, 0)
    record(4, ok, f"x^7 n=11 0-APN: {ok}")


def test_criterion_4_x7_n11_not_weakly_apn():
    # Stated claim, kept as written.  The definition gives 870 >= 513 values
    # for every derivative, so this check is expected to fail.
    F = from_power(field_new(11), 7)
    images = set(dif.derivative_images(F)[1:].tolist())
    weak = dif.is_weakly_apn(F)
    record(4, not weak, f"x^7 n=11 not weakly APN: {not weak} (derivative image sizes {sorted(images)}, "
                        f"threshold {2 ** 9 + 1})")


def test_criterion_4_inverse_maps():
    out = []
    for n in (4, 6):
        F = from_power(field_new(n), (1 << n) - 2)
        out.append(dif.is_weakly_apn(F) and not any(dif.papn_set(F).verdicts))
    record(4, all(out), f"x^(2^n-2) n=4,6 weakly APN and x0-APN nowhere: {all(out)}")


def test_criterion_4_x9_tr_x3():
    ok = dif.is_x0_apn_rodier(from_expression(field_new(5), "x^9 + Tr(x^3)"), 0)
    record(4, ok, f"x^9+Tr(x^3) n=5 0-APN: {ok}")


def test_criterion_4_x7_x6():
    F = from_expression(field_new(3), "x^7 + x^6")
    ok = dif.is_x0_apn_rodier(F, 1) and not dif.is_apn(F)
    record(4, ok, f"x^7+x^6 n=3 1-APN and not APN: {ok}")


def test_criterion_5_sweeps():
    mism = Counter()
    for n in range(1, 11):
        spec = field_new(n)
        for d in range(1, 2 * n + 1):
            gold = ((1 << d) + 1) % spec.order or spec.order
            mers = ((1 << d) - 1) % spec.order or spec.order
            mism["gold gcd"] += fam.monomial_0apn_direct(spec, gold) != fam.gold_0apn_rule(n, d)
            mism["mersenne gcd"] += (
                fam.monomial_0apn_direct(spec, mers) != fam.mersenne_0apn_rule(n, d)
            )
    power = ids.check_power_1apn_theorem(8)
    mism["1-APN power"] = len(power["violations"])
    quad = 0
    for n in range(2, 9):
        for k in range(1, n):
            quad += 1
            mism["quadratic"] += not ids.check_quadratic_prop(
                from_power(field_new(n), (1 << k) + 1))["passed"]
    verdicts = 0
    for family in fam.FAMILIES:
        for v in fam.family_grid(family, n_max=8):
            verdicts += 1
            mism[family] += not v.consistent
    bad = sum(mism.values())
    record(5, bad == 0, f"{power['checked']} power maps, {quad} Gold maps, {verdicts} family "
                        f"verdicts, {bad} mismatches")


def test_criterion_6_identity_suite():
    total = failures = 0
    fewest = None
    for n in (2, 3, 4, 5):
        per_identity = Counter()
        for res in ids.random_suite(n, 200, seed=2024):
            total += 1
            failures += not res.passed
            per_identity[res.identity] += 1
        low = min(per_identity.values())
        fewest = low if fewest is None else min(fewest, low)
    for n in (2, 3):
        for res in ids.random_suite(n, 10, seed=7, exhaustive=True):
            total += 1
            failures += not res.passed
    record(6, failures == 0 and fewest >= 100,
           f"{total} checks, {failures} failures, at least {fewest} functions per identity and n")


def test_criterion_7_oracles():
    walsh_bad = 0
    walsh_count = 0
    for n in (1, 2):
        spec = field_new(n)
        q = spec.size
        for idx in range(q**q):
            F = VBF(spec, [(idx // q**i) % q for i in range(q)])
            walsh_count += 1
            walsh_bad += not np.array_equal(walsh_full(F).w, walsh_naive(F).w)
    rng = np.random.default_rng(7)
    for n in (3, 4):
        for _ in range(30):
            F = random_vbf(field_new(n), rng)
            walsh_count += 1
            walsh_bad += not np.array_equal(walsh_full(F).w, walsh_naive(F).w)
    # every function at n = 2, then 10^4 random functions at n = 3 and 4, all x0;
    # single-point modifications of APN maps add verdicts that come out positive
    functions = [VBF(field_new(2), t) for t in itertools.product(range(4), repeat=4)]
    for n in (3, 4):
        spec = field_new(n)
        functions += [random_vbf(spec, rng) for _ in range(10_000)]
        for _ in range(500):
            G = ids.random_apn(spec, rng)
            functions.append(modify_at(G, int(rng.integers(spec.size)), int(rng.integers(1, spec.size))))
    papn_bad = positives = checks = 0
    for F in functions:
        for x0 in range(F.spec.size):
            r = dif.is_x0_apn_rodier(F, x0)
            checks += 1
            positives += r
            papn_bad += r != dif.is_x0_apn_derivative(F, x0)
    record(7, walsh_bad == 0 and papn_bad == 0,
           f"Walsh {walsh_count} functions, {walsh_bad} disagreements; x0-APN "
           f"{len(functions)} functions, {checks} verdicts ({positives} positive), "
           f"{papn_bad} disagreements")


def test_criterion_8_conjecture():
    rep = search.conjecture_scan(search.catalog("default", 7))
    doc = rep.to_json()
    record(8, not rep.counterexamples,
           f"{len(doc['entries'])} functions, {doc['probes']} probes, "
           f"{len(rep.counterexamples)} x0-APN modifications found")


def main():
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    for line in summary_lines():
        print(line)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
