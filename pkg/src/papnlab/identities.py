"""Executable checks of the moment identities around single-point modifications.

Each ``check_*`` function computes the two sides of one identity by separate
routes (Walsh tables of F and F' on one side, E-weighted sums or the
combinatorial T/S counts on the other) and returns an
:class:`IdentityCheckResult`.  All arithmetic is exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import differential as dif
from .spectral import (
    _weighted_power_sum,
    d_factor,
    e_factor,
    e_matrix,
    moment,
    trace_signs,
    twisted_moment,
    verify_walsh_diff,
    walsh_full,
)
from .vbf import VBF, modify_at, random_vbf


class PreconditionError(ValueError):
    """The identity's hypotheses do not hold for the given input."""


@dataclass
class IdentityCheckResult:
    identity: str
    params: dict
    lhs: object
    rhs: object
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.lhs == self.rhs

    def to_json(self):
        return {
            "identity": self.identity,
            "params": self.params,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "pass": self.passed,
        }


def _params(F, x0=None, eps=None, **extra):
    p = {"n": F.n, "table": [f"0x{v:x}" for v in F.table]}
    if F.label:
        p["function"] = F.label
    if x0 is not None:
        p["x0"] = f"0x{x0:x}"
    if eps is not None:
        p["eps"] = f"0x{eps:x}"
    p.update(extra)
    return p


def _delta0(z):
    return 1 if z == 0 else 0


def _sum(W, k, weight):
    return _weighted_power_sum(W.w, k, weight, W.n)


def apn_third_moment(n):
    """2^(2n+1) (3 * 2^(n-1) - 1), written to stay integral at n = 1."""
    return (1 << (2 * n)) * (3 * (1 << n) - 2)


def apn_fourth_moment(n):
    """2^(3n+1) (3 * 2^(n-1) - 1)."""
    return (1 << (3 * n)) * (3 * (1 << n) - 2)


def check_walsh_diff(F, x0, eps):
    ok = verify_walsh_diff(F, x0, eps)
    q2 = F.spec.size ** 2
    return IdentityCheckResult("walsh-diff", _params(F, x0, eps), q2 if ok else -1, q2)


def check_power_simplification(F, x0, eps, m_max=3):
    """E^(2m) = 2^(2m-1) D and E^(2m+1) = 2^(2m) E at every (a, b), scalar path."""
    spec = F.spec
    y0 = F(x0)
    good = total = 0
    for a in range(spec.size):
        for b in range(spec.size):
            e = e_factor(spec, a, b, x0, y0, eps)
            d = d_factor(spec, b, eps)
            for m in range(1, m_max + 1):
                total += 2
                good += e ** (2 * m) == 2 ** (2 * m - 1) * d
                good += e ** (2 * m + 1) == 2 ** (2 * m) * e
    return IdentityCheckResult("power-simplification", _params(F, x0, eps), good, total)


def check_thm_4thpower_i(F, x0, eps, e_sign=1):
    """(1/4) sum(W_F^4 - W_F'^4) = sum W_F^3 E - (3 2^(3n) - 2^(2n+1)).

    ``e_sign=-1`` flips E, for falsifiability tests only.
    """
    n = F.n
    W = walsh_full(F)
    Wp = walsh_full(modify_at(F, x0, eps))
    lhs = Fraction(moment(W, 4).value - moment(Wp, 4).value, 4)
    E = e_sign * e_matrix(F.spec, x0, F(x0), eps)
    rhs = _sum(W, 3, E) - (3 * (1 << (3 * n)) - (1 << (2 * n + 1)))
    return IdentityCheckResult("4thpower-i", _params(F, x0, eps), lhs, rhs)


def check_thm_4thpower_ii(F, x0, eps):
    """sum(W_F^3 - W_F'^3) = 3 sum W_F^2 E - 3 2^(2n+1) (d0(F(0)) - d0(eps + F(0)))
    + 2^(2n+2) d0(x0) (d0(y0) - d0(y1))."""
    n = F.n
    y0 = F(x0)
    y1 = y0 ^ eps
    W = walsh_full(F)
    Wp = walsh_full(modify_at(F, x0, eps))
    lhs = moment(W, 3).value - moment(Wp, 3).value
    E = e_matrix(F.spec, x0, y0, eps)
    rhs = (
        3 * _sum(W, 2, E)
        - 3 * (1 << (2 * n + 1)) * (_delta0(F(0)) - _delta0(eps ^ F(0)))
        + (1 << (2 * n + 2)) * _delta0(x0) * (_delta0(y0) - _delta0(y1))
    )
    return IdentityCheckResult("4thpower-ii", _params(F, x0, eps), lhs, rhs)


def check_cor_4thpower(F, x0, eps):
    """Special forms of the cubic difference when F(0) = 0.

    x0 = y0 = 0: constant -2^(2n+1); x0 != 0: constant -3 2^(2n+1).
    """
    if F(0) != 0:
        raise PreconditionError("requires F(0) = 0")
    n = F.n
    if x0 == 0:
        const = -(1 << (2 * n + 1))
        name = "cor-4thpower-a"
    else:
        const = -3 * (1 << (2 * n + 1))
        name = "cor-4thpower-b"
    W = walsh_full(F)
    Wp = walsh_full(modify_at(F, x0, eps))
    lhs = moment(W, 3).value - moment(Wp, 3).value
    rhs = 3 * _sum(W, 2, e_matrix(F.spec, x0, F(x0), eps)) + const
    return IdentityCheckResult(name, _params(F, x0, eps), lhs, rhs)


def check_mainthm(F, x0, eps):
    """Both halves: the E-weighted cubic and quadratic sums against T- and S-set sizes."""
    n = F.n
    y0 = F(x0)
    y1 = y0 ^ eps
    W = walsh_full(F)
    E = e_matrix(F.spec, x0, y0, eps)
    scale = 1 << (2 * n)
    t0, t1 = dif.t_size(F, x0, y0), dif.t_size(F, x0, y1)
    s0, s1 = dif.s_size(F, x0, y0), dif.s_size(F, x0, y1)
    first = IdentityCheckResult(
        "mainthm-i", _params(F, x0, eps, t0=t0, t1=t1), _sum(W, 3, E),
        scale * (3 * (1 << n) - 2 + t0 - t1),
    )
    second = IdentityCheckResult(
        "mainthm-ii", _params(F, x0, eps, s0=s0, s1=s1), _sum(W, 2, E), scale * (s0 - s1)
    )
    return first, second


def check_localglobal(F, x0, eps):
    """sum(W_F^4 - W_F'^4) = 0 exactly when |T(x0, y0)| = |T(x0, y1)|.

    lhs/rhs are the two truth values.
    """
    y0 = F(x0)
    diff4 = moment(walsh_full(F), 4).value - moment(walsh_full(modify_at(F, x0, eps)), 4).value
    equal_t = dif.t_size(F, x0, y0) == dif.t_size(F, x0, y0 ^ eps)
    return IdentityCheckResult("localglobal", _params(F, x0, eps), diff4 == 0, equal_t)


def check_sec3_characterization(F, x0):
    """Twisted cubic moment equals the APN value exactly when F is x0-APN."""
    spec = F.spec
    tm = twisted_moment(walsh_full(F), 3, x0, F(x0), spec).value
    by_moment = tm == apn_third_moment(F.n)
    return IdentityCheckResult(
        "sec3-characterization", _params(F, x0, twisted_moment=str(tm)),
        by_moment, dif.is_x0_apn_rodier(F, x0),
    )


def check_twisted_t_count(F, x0):
    """Twisted cubic moment at (x0, F(x0)) = 2^(2n) (3 2^n - 2 + |T(x0, F(x0))|)."""
    n = F.n
    tm = twisted_moment(walsh_full(F), 3, x0, F(x0), F.spec).value
    rhs = (1 << (2 * n)) * (3 * (1 << n) - 2 + dif.t_size(F, x0, F(x0)))
    return IdentityCheckResult("twisted-t-count", _params(F, x0), tm, rhs)


def check_cube_pair_count(F):
    """sum W^3 = 2^(2n) #{(u, v) : F(u) + F(v) + F(u + v) = 0}."""
    lhs = moment(walsh_full(F), 3).value
    rhs = (1 << (2 * F.n)) * dif.quadruple_pair_count(F)
    return IdentityCheckResult("cube-pair-count", _params(F), lhs, rhs)


def check_cor_cond(F, eps):
    """For APN F with F(0) = 0: the (0, eps)-modification is APN exactly when
    sum W^3 (-1)^Tr(b eps) = 0."""
    if F(0) != 0:
        raise PreconditionError("requires F(0) = 0")
    if not dif.is_apn(F):
        raise PreconditionError("requires an APN function")
    sb = trace_signs(F.spec, eps)
    weighted = _sum(walsh_full(F), 3, sb[None, :])
    modified_apn = dif.is_apn(modify_at(F, 0, eps))
    return IdentityCheckResult(
        "cor-cond", _params(F, 0, eps, weighted_sum=str(weighted)), weighted == 0, modified_apn
    )


def check_w2_corollary(F, eps):
    """sum W^2 (-1)^Tr(b eps) = 0 for any nonzero eps."""
    if eps == 0:
        raise PreconditionError("eps must be nonzero")
    sb = trace_signs(F.spec, eps)
    return IdentityCheckResult("w2-corollary", _params(F, 0, eps), _sum(walsh_full(F), 2, sb[None, :]), 0)


def check_wcube_e(F, x0, eps):
    """The cubic-difference corollary: its general form plus whichever of (a)-(d) apply."""
    n = F.n
    y0 = F(x0)
    y1 = y0 ^ eps
    s0, s1 = dif.s_size(F, x0, y0), dif.s_size(F, x0, y1)
    m3 = moment(walsh_full(F), 3).value
    m3p = moment(walsh_full(modify_at(F, x0, eps)), 3).value
    base = _params(F, x0, eps, s0=s0, s1=s1)
    out = [
        IdentityCheckResult(
            "wcube-e",
            base,
            m3 - m3p,
            3 * (1 << (2 * n)) * (s0 - s1)
            - 3 * (1 << (2 * n + 1)) * (_delta0(F(0)) - _delta0(eps ^ F(0)))
            + (1 << (2 * n + 2)) * _delta0(x0) * (_delta0(y0) - _delta0(y1)),
        )
    ]
    if F(0) != 0:
        return out
    apn = dif.is_apn(F)
    if x0 != 0:
        out.append(IdentityCheckResult(
            "wcube-e-a", base, m3 - m3p, 3 * (1 << (2 * n)) * (s0 - s1) - 3 * (1 << (2 * n + 1))
        ))
        if apn:
            out.append(IdentityCheckResult(
                "wcube-e-c", base, m3p, apn_third_moment(n) + 3 * (1 << (2 * n)) * s1
            ))
    else:
        out.append(IdentityCheckResult(
            "wcube-e-b", base, m3 - m3p, 3 * (1 << (2 * n)) * (s0 - s1) - (1 << (2 * n + 1))
        ))
        out.append(IdentityCheckResult("wcube-e-b-closed", base, m3 - m3p, apn_third_moment(n)))
        if apn:
            out.append(IdentityCheckResult("wcube-e-d", base, m3p, 0))
    return out


@dataclass
class LocalGlobalTally:
    """Outcome of testing "F' is x0-APN implies F' is APN" over many modifications."""

    cases: int = 0
    fired: int = 0
    violations: list = field(default_factory=list)

    @property
    def vacuous(self):
        return self.cases - self.fired

    def to_json(self):
        return {
            "cases": self.cases,
            "fired": self.fired,
            "vacuous": self.vacuous,
            "violations": [[f"0x{x:x}", f"0x{e:x}"] for x, e in self.violations],
        }


def check_local_global(F, x0, eps):
    """"F' is x0-APN implies F' is APN" for one modification of APN F.

    Returns ``(holds, fired)``; ``fired`` is False when F' is not x0-APN and
    the implication holds vacuously.
    """
    if not dif.is_apn(F):
        raise PreconditionError("requires an APN function")
    G = modify_at(F, x0, eps)
    if not dif.is_x0_apn_rodier(G, x0):
        return True, False
    return dif.is_apn(G), True


def local_global_sweep(F, points=None):
    """:func:`check_local_global` over every eps and the given x0 (default: all)."""
    tally = LocalGlobalTally()
    for x0 in range(F.spec.size) if points is None else points:
        for eps in range(1, F.spec.size):
            holds, fired = check_local_global(F, x0, eps)
            tally.cases += 1
            tally.fired += fired
            if not holds:
                tally.violations.append((x0, eps))
    return tally


@dataclass
class ConjectureProbe:
    x0: int
    full_image: bool
    missing: list


def quadruple_image(F, x0):
    """{F(x0) + F(u) + F(v) + F(x0 + u + v) : u, v}."""
    t = F.table
    xs = np.arange(F.spec.size)
    vals = t[x0] ^ t[:, None] ^ t[None, :] ^ t[x0 ^ xs[:, None] ^ xs[None, :]]
    return set(np.unique(vals).tolist())


def derivative_pair_image(F, x0):
    """{D_aF(x0) + D_aF(y) : a, y}; the same set written through derivatives."""
    t = F.table
    xs = np.arange(F.spec.size)
    da_x0 = t[x0 ^ xs] ^ t[x0]  # indexed by a
    da_y = t[xs[:, None] ^ xs[None, :]] ^ t[None, :]  # [a, y]
    return set(np.unique(da_x0[:, None] ^ da_y).tolist())


def conjecture_probe(F, x0):
    """Which eps would give an x0-APN (x0, eps)-modification of APN F.

    ``missing`` lists the nonzero field elements outside the quadruple-sum
    image; each one is a modification that stays x0-APN.
    """
    if not dif.is_apn(F):
        raise PreconditionError("requires an APN function")
    image = quadruple_image(F, x0)
    missing = [e for e in range(1, F.spec.size) if e not in image]
    return ConjectureProbe(x0, not missing, missing)


def x0_apn_modifications(F, x0):
    """Direct route: every eps whose modification is x0-APN."""
    return [e for e in range(1, F.spec.size) if dif.is_x0_apn_rodier(modify_at(F, x0, e), x0)]


def non_apn_modification(F, x0):
    """An eps making the (x0, eps)-modification of APN F non-APN, built from a quadruple.

    Takes the first y, z with x0, y, z distinct.
    """
    q = F.spec.size
    if q < 4:
        raise PreconditionError("needs n > 1")
    y, z = [v for v in range(q) if v != x0][:2]
    return F(y) ^ F(z) ^ F(x0 ^ y ^ z) ^ F(x0)


def check_power_1apn_theorem(n_max, n_min=2):
    """Every power map that is 1-APN is APN, for every exponent and n in range."""
    from .gf2n import field_new
    from .vbf import from_power

    checked = 0
    one_apn = 0
    violations = []
    for n in range(n_min, n_max + 1):
        spec = field_new(n)
        for k in range(spec.size):
            F = from_power(spec, k)
            checked += 1
            if dif.is_x0_apn_rodier(F, 1):
                one_apn += 1
                if not dif.is_apn(F):
                    violations.append((n, k))
    return {"checked": checked, "one_apn": one_apn, "violations": violations}


def check_quadratic_prop(F):
    """For quadratic F the x0-APN verdict is the same at every point and equals APN-ness."""
    from .vbf import is_quadratic

    if not is_quadratic(F):
        raise PreconditionError("requires a quadratic function")
    verdicts = dif.papn_set(F).verdicts
    apn = dif.is_apn(F)
    return {
        "apn": apn,
        "papn_points": sum(verdicts),
        "passed": all(v == apn for v in verdicts),
    }


def _random_linear(spec, rng, invertible):
    """Table of a random GF(2)-linear map of GF(2^n)."""
    xs = spec.elements()
    while True:
        cols = rng.integers(0, spec.size, size=spec.n)
        table = np.zeros(spec.size, dtype=np.int64)
        for i, c in enumerate(cols):
            table ^= np.where((xs >> i) & 1, c, 0)
        if not invertible or len(np.unique(table)) == spec.size:
            return table


def random_apn(spec, rng):
    """A random function affine-equivalent to x^3, shifted so F(0) = 0.

    Affine equivalence A1 o x^3 o A2 + A3 preserves APN-ness, and x^3 is APN
    over every GF(2^n).
    """
    a1 = _random_linear(spec, rng, True)
    a2 = _random_linear(spec, rng, True)
    a3 = _random_linear(spec, rng, False)
    c = int(rng.integers(spec.size))
    table = a1[spec.pow_vec(a2 ^ c, 3)] ^ a3
    return VBF(spec, table ^ table[0])


def _apn_identities(G, x0, eps):
    yield check_cor_cond(G, eps)
    yield from check_wcube_e(G, x0, eps)
    holds, fired = check_local_global(G, x0, eps)
    yield IdentityCheckResult("local-global", _params(G, x0, eps, fired=fired), holds, True)


def _trial_identities(F, x0, eps):
    yield check_walsh_diff(F, x0, eps)
    yield check_thm_4thpower_i(F, x0, eps)
    yield check_thm_4thpower_ii(F, x0, eps)
    yield from check_mainthm(F, x0, eps)
    yield check_localglobal(F, x0, eps)
    yield from check_wcube_e(F, x0, eps)
    if F(0) == 0:
        yield check_cor_4thpower(F, x0, eps)


def random_suite(n, trials, seed, exhaustive=False):
    """Identity checks on ``trials`` seeded random functions over GF(2^n).

    Each trial draws a fresh function and checks it at x0 = 0 and at one
    random nonzero x0, each with a random eps; with ``exhaustive`` every
    (x0, eps) pair is checked instead.  Half the
    trials are forced to F(0) = 0 so the F(0)-dependent branches get exercised,
    and each trial also draws a random APN function for the identities that
    need one.  Yields results carrying the trial seed for replay.
    """
    from .gf2n import field_new

    spec = field_new(n)
    for trial in range(trials):
        trial_seed = [seed, n, trial]
        rng = np.random.default_rng(trial_seed)
        F = random_vbf(spec, rng)
        G = random_apn(spec, rng)
        if trial % 2:
            F = F + type(F)(spec, np.full(spec.size, F(0)))
        pairs = (
            [(x0, e) for x0 in range(spec.size) for e in range(1, spec.size)]
            if exhaustive
            else [(0, int(rng.integers(1, spec.size))),
                  (int(rng.integers(1, spec.size)), int(rng.integers(1, spec.size)))]
        )
        for x0, eps in pairs:
            for res in _trial_identities(F, x0, eps):
                res.params["seed"] = trial_seed
                yield res
            for res in _apn_identities(G, x0, eps):
                res.params["seed"] = trial_seed
                yield res
        x0, eps = pairs[0]
        checks = [check_sec3_characterization(F, p) for p in sorted({p for p, _ in pairs})]
        checks += [check_twisted_t_count(F, p) for p in sorted({p for p, _ in pairs})]
        checks += [
            check_power_simplification(F, x0, eps, m_max=2),
            check_cube_pair_count(F),
            check_w2_corollary(F, eps),
        ]
        for res in checks:
            res.params["seed"] = trial_seed
            yield res
