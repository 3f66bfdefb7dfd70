"""0-APN criteria for power maps and the "never 0-APN" function classes.

Every class check builds the function, decides 0-APN-ness by a direct
Rodier scan, and compares against the class's gcd prediction.  A
prediction of ``False`` means "not 0-APN"; ``None`` means the theorem is
silent for these parameters.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .gf2n import (
    binom_odd,
    coset_representatives,
    field_new,
    gcd3,
    minimal_polynomial,
    poly_mod,
    poly_powmod,
    reduce_exponent,
)
from .vbf import VBF, LinearizedPoly


@dataclass
class FamilyVerdict:
    family: str
    params: dict
    predicted: object  # True / False / None
    observed: bool
    witness: tuple = None
    extra: dict = field(default_factory=dict)

    @property
    def applicable(self):
        return self.predicted is not None

    @property
    def consistent(self):
        return self.predicted is None or self.predicted == self.observed

    def to_json(self):
        return {
            "family": self.family,
            "params": self.params,
            "predicted_0apn": self.predicted,
            "observed_0apn": self.observed,
            "consistent": self.consistent,
            "witness": None if self.witness is None else [f"0x{v:x}" for v in self.witness],
            "extra": self.extra,
        }


def not0apn_witness_search(F):
    """First (u, v) with u, v, u + v nonzero and F(0) + F(u) + F(v) + F(u + v) = 0."""
    t = F.table
    q = F.spec.size
    vs = np.arange(q)
    for u in range(1, q):
        s = t[0] ^ t[u] ^ t ^ t[u ^ vs]
        s[[0, u]] = 1  # excluded: v = 0, v = u
        hits = np.flatnonzero(s == 0)
        if hits.size:
            return u, int(hits[0])
    return None


def _rodier_zero(F, u, v):
    return u != 0 and v != 0 and u != v and (F(0) ^ F(u) ^ F(v) ^ F(u ^ v)) == 0


def _rodier_factor(spec, m, alphas):
    """1 + a^m + (1 + a)^m for each a."""
    return 1 ^ spec.pow_vec(alphas, m) ^ spec.pow_vec(alphas ^ 1, m)


def _nontrivial(spec):
    return np.arange(2, spec.size)


def monomial_0apn_witness(spec, m):
    """Smallest a outside {0, 1} with 1 + a^m + (1 + a)^m = 0, or None."""
    if not 1 <= m <= spec.size - 1:
        raise ValueError(f"exponent {m} outside [1, {spec.size - 1}]")
    alphas = _nontrivial(spec)
    roots = alphas[_rodier_factor(spec, m, alphas) == 0]
    return int(roots[0]) if roots.size else None


def monomial_0apn_direct(spec, m):
    return monomial_0apn_witness(spec, m) is None


def gold_0apn_rule(n, d):
    """x^(2^d+1) is 0-APN iff gcd(d, n) = 1."""
    return gcd(d, n) == 1


def mersenne_0apn_rule(n, d):
    """x^(2^d-1) is 0-APN iff gcd(d-1, n) = 1."""
    return gcd(d - 1, n) == 1


def rodier_sum_poly(m):
    """sum_{k=1}^{m-1} binom(m, k) x^(m-k-1) mod 2, as a bitmask (Lucas parity)."""
    p = 0
    for k in range(1, m):
        if binom_odd(m, k):
            p |= 1 << (m - k - 1)
    return p


@lru_cache(maxsize=None)
def _minpolys(n, modulus):
    spec = field_new(n, modulus)
    return tuple((i, minimal_polynomial(spec, i)) for i in coset_representatives(n))


def _residue(i, m, P):
    """(1 + x^(im) + (1 + x^i)^m) mod P.

    This is x times the "divided by x" polynomial, and P never has x as a
    factor, so P divides one exactly when it divides the other.
    """
    xi = poly_powmod(0b10, i, P)
    return poly_mod(1 ^ poly_powmod(xi, m, P) ^ poly_powmod(1 ^ xi, m, P), P)


def minpoly_roots(spec, m, form="proof"):
    """Coset representatives i flagged by a divisibility form; empty means "0-APN".

    ``proof``: P_g divides (1 + x^(im) + (1 + x^i)^m)/x, i.e. g^i is a root.
    ``root``: P_{g^i} divides (1 + x^m + (1 + x)^m)/x.
    ``stated-mi``: P_{g^i} divides sum_k binom(mi, k) x^(mi-k-1).
    ``stated-sec5``: P_{g^i} divides sum_k binom(m, k) x^(i(m-k)-1).
    """
    polys = _minpolys(spec.n, spec.modulus)
    if not polys:
        return []
    p_g = dict(polys)[1]
    out = []
    for i, p_i in polys:
        if form == "proof":
            hit = _residue(i, m, p_g) == 0
        elif form == "root":
            hit = _residue(1, m, p_i) == 0
        elif form == "stated-mi":
            hit = _residue(1, m * i, p_i) == 0
        elif form == "stated-sec5":
            hit = _residue(i, m, p_i) == 0
        else:
            raise ValueError(f"unknown divisibility form {form!r}")
        if hit:
            out.append(i)
    return out


def monomial_0apn_minpoly(spec, m):
    """Minimal-polynomial route over the nontrivial cyclotomic cosets.

    i ranges over coset representatives in [1, 2^n - 2]; i = 2^n - 1 is left
    out because g^i = 1 is a root for every m.
    """
    if not 1 <= m <= spec.size - 1:
        raise ValueError(f"exponent {m} outside [1, {spec.size - 1}]")
    return not minpoly_roots(spec, m, "proof")


def monomial_check(spec, m):
    """Direct root scan against the divisibility forms, all reported."""
    witness = monomial_0apn_witness(spec, m)
    observed = witness is None
    forms = {f: not minpoly_roots(spec, m, f) for f in ("proof", "root", "stated-mi", "stated-sec5")}
    return FamilyVerdict(
        "monomial",
        {"n": spec.n, "m": m},
        forms["proof"],
        observed,
        None if witness is None else (witness,),
        {"forms": forms, "diverging_forms": sorted(f for f, v in forms.items() if v != observed)},
    )


# Building blocks for the classes.


def _power(spec, e):
    return spec.pow_vec(spec.elements(), reduce_exponent(e, spec.n))


def _vbf(spec, table, label):
    return VBF(spec, table, label)


def _lin_name(L, n):
    if L == LinearizedPoly.identity(n):
        return "id"
    if L == LinearizedPoly.trace(n):
        return "Tr"
    return "L{" + ",".join(f"0x{c:x}" for c in L.coeffs) + "}"


def _subfield_alpha(spec, m):
    """Smallest element of GF(2^m) inside GF(2^n) that is not 0 or 1."""
    if m < 2 or spec.n % m:
        return None
    sub = spec.subfield(m)
    return min(x for x in sub if x > 1)


def _verdict(family, params, F, predicted, proof_witness=None, extra=None):
    search = not0apn_witness_search(F)
    extra = dict(extra or {})
    witness = search
    if proof_witness is not None:
        ok = _rodier_zero(F, *proof_witness)
        extra["proof_witness"] = [f"0x{v:x}" for v in proof_witness]
        extra["proof_witness_verified"] = ok
        if ok:
            witness = proof_witness
    return FamilyVerdict(family, params, predicted, search is None, witness, extra)


def trace_class_check(spec, d, variant, L):
    """L(x^e) + Tr(x^3) with e = 2^d + 1 (variant "F") or 2^(d+1) + 2^d + 1 ("G")."""
    if d < 1:
        raise ValueError("d must be positive")
    n = spec.n
    if variant == "F":
        e = (1 << d) + 1
    elif variant == "G":
        e = (1 << (d + 1)) + (1 << d) + 1
    else:
        raise ValueError("variant must be 'F' or 'G'")
    table = L.apply(spec, _power(spec, e)) ^ spec.trace_table[_power(spec, 3)]
    F = _vbf(spec, table, f"{_lin_name(L, n)}(x^{e}) + Tr(x^3)")
    m = gcd(d, n)
    predicted = False if m > 1 else None
    alpha = _subfield_alpha(spec, m) if m > 1 else None
    e_red = reduce_exponent(e, n)
    extra = {
        # The general sufficient condition: x^e itself has a nontrivial root.
        "general_condition": bool(minpoly_roots(spec, e_red, "proof")),
        "general_condition_stated": bool(minpoly_roots(spec, e_red, "stated-sec5")),
    }
    params = {"n": n, "d": d, "variant": variant, "L": _lin_name(L, n), "exponent": e}
    return _verdict(f"trace-{variant.lower()}", params, F, predicted,
                    None if alpha is None else (1, alpha), extra)


def l1l2_class_check(spec, d, r, L1, L2):
    """L1(x^(2^d+1)) + L2(x^(2^r+1)); not 0-APN when gcd(d, r, n) > 1."""
    n = spec.n
    table = L1.apply(spec, _power(spec, (1 << d) + 1)) ^ L2.apply(spec, _power(spec, (1 << r) + 1))
    name = f"{_lin_name(L1, n)}(x^{(1 << d) + 1}) + {_lin_name(L2, n)}(x^{(1 << r) + 1})"
    m = gcd3(d, r, n)
    alpha = _subfield_alpha(spec, m) if m > 1 else None
    params = {"n": n, "d": d, "r": r, "L1": _lin_name(L1, n), "L2": _lin_name(L2, n)}
    return _verdict("l1l2", params, _vbf(spec, table, name), False if m > 1 else None,
                    None if alpha is None else (1, alpha))


def _gold_trace_witness(spec, d, r):
    """The explicit pair (x, alpha x) for the gcd(d, n) > 1, gcd(2^r+1, 2^n-1) = 1 case."""
    alpha = _subfield_alpha(spec, gcd(d, spec.n))
    c = alpha ^ spec.pow(alpha, 1 << r)
    if c == 0:
        x = 1
    else:
        beta = c if c != 1 else spec.gen_pow(1)
        if beta == 1:  # only at n = 1, ruled out by gcd(d, n) > 1
            return None
        target = spec.mul(beta ^ spec.mul(beta, beta), spec.inv(c))
        root = pow((1 << r) + 1, -1, spec.order)
        x = spec.pow(target, root)
    return x, spec.mul(alpha, x)


def gold_trace_check(spec, d, r):
    """x^(2^d+1) + Tr(x^(2^r+1))."""
    n = spec.n
    table = _power(spec, (1 << d) + 1) ^ spec.trace_table[_power(spec, (1 << r) + 1)]
    F = _vbf(spec, table, f"x^{(1 << d) + 1} + Tr(x^{(1 << r) + 1})")
    special = gcd(d, n) > 1 and gcd((1 << r) + 1, spec.order) == 1
    general = gcd3(d, r, n) > 1
    if special:
        witness = _gold_trace_witness(spec, d, r)
    elif general:
        witness = (1, _subfield_alpha(spec, gcd3(d, r, n)))
    else:
        witness = None
    params = {"n": n, "d": d, "r": r}
    extra = {"special_case": special, "gcd_case": general}
    return _verdict("gold-trace", params, F, False if special or general else None, witness, extra)


def triple_class_check(spec, d, s, L1, L2):
    """L1(x^(2^(d+1)+2^d+1)) + L2(x^(2^(s+1)+2^s+1)); not 0-APN when gcd(d, s, n) > 1."""
    n = spec.n
    ea = (1 << (d + 1)) + (1 << d) + 1
    eb = (1 << (s + 1)) + (1 << s) + 1
    table = L1.apply(spec, _power(spec, ea)) ^ L2.apply(spec, _power(spec, eb))
    name = f"{_lin_name(L1, n)}(x^{ea}) + {_lin_name(L2, n)}(x^{eb})"
    m = gcd3(d, s, n)
    alpha = _subfield_alpha(spec, m) if m > 1 else None
    params = {"n": n, "d": d, "s": s, "L1": _lin_name(L1, n), "L2": _lin_name(L2, n)}
    return _verdict("triple", params, _vbf(spec, table, name), False if m > 1 else None,
                    None if alpha is None else (1, alpha))


def binomial_case_exponents(case, c, d):
    """(a, b) for the four binomial shapes; c > d >= 1."""
    if not c > d >= 1:
        raise ValueError("need c > d >= 1")
    plus = lambda k: (1 << k) + 1  # noqa: E731
    minus = lambda k: (1 << k) - 1  # noqa: E731
    return {
        "i": (minus(c), minus(d)),
        "ii": (plus(c), plus(d)),
        "iii": (plus(c), minus(d)),
        "iv": (minus(c), plus(d)),
    }[case]


def binomial_case_condition(case, n, c, d):
    """The gcd condition attached to each binomial shape, as written."""
    N = (1 << n) - 1
    if case == "i":
        return gcd(c - d, n) == 1 and (gcd(c - 1, n) == 1 or gcd(d - 1, n) == 1)
    if case == "ii":
        return gcd(c - d, n) == 1 and (gcd(c, n) == 1 or gcd(d, n) == 1)
    if case == "iii":
        g = gcd((1 << (c - 1)) - (1 << (d - 1)) + 1, N)
        return g == 1 and (gcd(c, n) == 1 or gcd(d - 1, n) == 1)
    if case == "iv":
        g = gcd(abs((1 << (c - 1)) - (1 << (d - 1)) - 1), N)
        return g == 1 and (gcd(c - 1, n) == 1 or gcd(d, n) == 1)
    raise ValueError(f"unknown binomial case {case!r}")


def _binomial_prediction(spec, a, b, beta):
    """Prediction for x^a + beta x^b plus the explicit (z, z alpha) witness.

    Beyond the stated hypotheses (one monomial 0-APN, gcd(a - b, 2^n - 1) = 1)
    the argument needs some alpha outside {0, 1} where both Rodier factors are
    nonzero.  That fails exactly when one exponent acts linearly (a power of 2
    modulo 2^n - 1); there the theorem is reported as not applicable.
    """
    n = spec.n
    ar, br = reduce_exponent(a, n), reduce_exponent(b, n)
    stated = (monomial_0apn_direct(spec, ar) or monomial_0apn_direct(spec, br)) and (
        gcd(abs(a - b), spec.order) == 1
    )
    alphas = _nontrivial(spec)
    fa = _rodier_factor(spec, ar, alphas)
    fb = _rodier_factor(spec, br, alphas)
    both = np.flatnonzero((fa != 0) & (fb != 0))
    info = {"stated_hypotheses": bool(stated), "nondegenerate": bool(both.size)}
    if not (stated and both.size):
        return None, None, info
    k = both[0]
    alpha = int(alphas[k])
    # z^(a-b) = beta fb / fa, solved with the inverse exponent modulo 2^n - 1.
    rhs = spec.mul(beta, spec.mul(int(fb[k]), spec.inv(int(fa[k]))))
    z = spec.pow(rhs, pow((a - b) % spec.order, -1, spec.order))
    return False, (z, spec.mul(z, alpha)), info


def binomial_check(spec, a, b, beta, case=None, c=None, d=None):
    """x^a + beta x^b with a > b >= 1, beta != 0."""
    if not a > b >= 1:
        raise ValueError("need a > b >= 1")
    if beta == 0:
        raise ValueError("beta must be nonzero")
    n = spec.n
    table = _power(spec, a) ^ spec.mul_vec(_power(spec, b), beta)
    F = _vbf(spec, table, f"x^{a} + 0x{beta:x}*x^{b}")
    predicted, witness, info = _binomial_prediction(spec, a, b, beta)
    params = {"n": n, "a": a, "b": b, "beta": f"0x{beta:x}"}
    if case is not None:
        params.update(case=case, c=c, d=d)
        info["case_condition"] = binomial_case_condition(case, n, c, d)
    return _verdict("binomial", params, F, predicted, witness, info)


def binomial_case_check(spec, case, c, d, beta):
    a, b = binomial_case_exponents(case, c, d)
    if a < b:
        a, b = b, a
    if a == b:
        return None
    return binomial_check(spec, a, b, beta, case=case, c=c, d=d)


def leander_rodier_check(spec, d, beta):
    """x^(2^n-2) + beta x^d for odd n; not 0-APN when gcd(d + 1, 2^n - 1) = 1."""
    n = spec.n
    if beta == 0:
        raise ValueError("beta must be nonzero")
    params = {"n": n, "d": d, "beta": f"0x{beta:x}"}
    inv_e = spec.size - 2
    table = _power(spec, inv_e) ^ spec.mul_vec(_power(spec, d), beta)
    F = _vbf(spec, table, f"x^{inv_e} + 0x{beta:x}*x^{d}")
    info = {"gcd_condition": gcd(d + 1, spec.order) == 1}
    if n % 2 == 0:
        info["reason"] = "n even"
        return _verdict("leander-rodier", params, F, None, None, info)
    a, b = max(inv_e, d), min(inv_e, d)
    predicted, witness, more = (None, None, {}) if a == b else _binomial_prediction(spec, a, b, beta)
    info.update(more)
    return _verdict("leander-rodier", params, F, predicted, witness, info)


def _lin_choices(n):
    return (LinearizedPoly.identity(n), LinearizedPoly.trace(n))


def _betas(spec, full_field_max_n=5):
    if spec.n <= full_field_max_n:
        return range(1, spec.size)
    return sorted({1, spec.gen_pow(1), spec.gen_pow(2), spec.gen_pow(spec.order - 1)})


def family_grid(family, n_max=8, n_min=1):
    """Every verdict of one family over the standard parameter grid."""
    for n in range(n_min, n_max + 1):
        spec = field_new(n)
        ps = range(1, n + 1)
        if family in ("trace-f", "trace-g"):
            for d in ps:
                for L in _lin_choices(n):
                    yield trace_class_check(spec, d, family[-1].upper(), L)
        elif family == "l1l2":
            for d in ps:
                for r in ps:
                    for L1 in _lin_choices(n):
                        for L2 in _lin_choices(n):
                            yield l1l2_class_check(spec, d, r, L1, L2)
        elif family == "gold-trace":
            for d in ps:
                for r in ps:
                    yield gold_trace_check(spec, d, r)
        elif family == "triple":
            for d in ps:
                for s in ps:
                    for L1 in _lin_choices(n):
                        for L2 in _lin_choices(n):
                            yield triple_class_check(spec, d, s, L1, L2)
        elif family == "binomial":
            for case in ("i", "ii", "iii", "iv"):
                for c in ps:
                    for d in range(1, c):
                        for beta in _betas(spec):
                            v = binomial_case_check(spec, case, c, d, beta)
                            if v is not None:
                                yield v
        elif family == "leander-rodier":
            for d in range(1, spec.size - 1):
                for beta in _betas(spec, 4):
                    yield leander_rodier_check(spec, d, beta)
        elif family == "monomial":
            for m in range(1, spec.size):
                yield monomial_check(spec, m)
        else:
            raise ValueError(f"unknown family {family!r}")


FAMILIES = ("trace-f", "trace-g", "l1l2", "gold-trace", "triple", "binomial", "leander-rodier", "monomial")
