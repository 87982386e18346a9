#!/usr/bin/env python3
"""Independent oracle for the award values frozen into the C++ tests.

Every scheme is implemented here from scratch, straight from its defining
formula, with exact fractions (floats only where the scheme itself is
floating point). The C++ unit tests quote this script's output as literals;
if a number in a test looks wrong, rerun this and compare.

Usage: python3 tools/oracles/expected_values.py
"""

from fractions import Fraction as F
import math

R = F(1)  # net reward used throughout unless stated


def rounds_of(shape):
    """Share index ranges (0-based, half-open) for a round-length shape."""
    out, start = [], 0
    for n in shape:
        out.append((start, start + n))
        start += n
    return out


def omega_of(shape):
    """Round index (1-based) per share for a shape."""
    out = []
    for r, n in enumerate(shape, 1):
        out.extend([r] * n)
    return out


# --- round-based schemes: award(rank, round_len) ------------------------

def proportional(rank, n, R=R):
    return R / n


def absolute_fair(eps, rank, n, R=R):
    # eps is 1-based via eps[j-1]
    return R * (eps[rank - 1] - sum(eps[i - 1] / (i - 1) for i in range(rank + 1, n + 1)))


def relative_fair(eps, rank, n, R=R):
    v = R * eps[rank - 1]
    for j in range(rank + 1, n + 1):
        v *= 1 - eps[j - 1]
    return v


def k_pseudo(k, delta, rank, n, R=R):
    if k is None or n < k:  # k = None means infinity
        return R / n
    if rank < k:
        return (R - delta) / (k - 1)
    if rank == k:
        return delta
    return F(0)


def geometric(r, rank, n, B=F(1)):
    return (r - 1) / r ** (n - rank + 1) * B


def constrained_geometric(r, rank, n, B=F(1)):
    return geometric(r, rank, n, B) * r ** n / (r ** n - 1)


def ic(D, rank, n, R=R):
    if n <= D and rank < n:
        return R / D
    if n <= D and rank == n:
        return R / D + (1 - F(n, D)) * R
    return R / n


def indep1(rank, n, R=R):
    return R / n if n % 2 == 1 else R / (2 * n)


def indep2(lam, rank, n, R=R):
    if n == 1:
        return R
    if rank == 1:
        return (R - lam) + lam / n
    return lam / n


def indep3(rank, n, R=R):
    if rank == 1:
        return R / 2 ** (n - 1)
    return 2 ** (rank - 2) * R / 2 ** (n - 1)


def indep5(rank, n, R=R):
    return 2 * R / n


def vec(f, n, **kw):
    return [f(rank, n, **kw) for rank in range(1, n + 1)]


# --- PPLNS on a whole history -------------------------------------------

def pplns(shape, N, R=R):
    """Returns (status, value) per share: 'final' or 'pending' (accrued)."""
    om = omega_of(shape)
    m = len(om)
    l = len(shape)
    out = []
    for i in range(1, m + 1):
        if i + N <= m:
            out.append(("final", (om[i + N - 1] - om[i - 1]) * R / N))
        else:
            out.append(("pending", (l - om[i - 1] + 1) * R / N))
    return out


# --- Slush ----------------------------------------------------------------

def slush(times, shape, lam, R=1.0):
    ends = [e - 1 for (_, e) in rounds_of(shape)]  # 0-based index of each round's last share
    om = omega_of(shape)
    awards = []
    for i, t in enumerate(times):
        total = 0.0
        for j in range(om[i] - 1, len(shape)):
            tbar = times[ends[j]]
            num = math.exp((t - tbar) / lam)
            den = sum(math.exp((tp - tbar) / lam) for tp in times if tp <= tbar)
            total += num / den
        awards.append(R * total)
    return awards


def show(label, values):
    def fmt(v):
        if isinstance(v, tuple):
            return f"{v[0]}:{fmt(v[1])}"
        if isinstance(v, F):
            return str(v)
        return f"{v:.9f}"
    print(f"{label}: [{', '.join(fmt(v) for v in values)}]")


def main():
    print("# round-based scheme vectors (R = 1, B = 1 unless stated)")
    eps = [F(1), F(2, 5), F(1, 5)]
    show("absolute_fair eps=[1,2/5,1/5] n=3", vec(lambda k, n: absolute_fair(eps, k, n), 3))
    show("relative_fair eps=[1,2/5,1/5] n=3", vec(lambda k, n: relative_fair(eps, k, n), 3))
    show("k_pseudo k=3 delta=1/10 n=5", vec(lambda k, n: k_pseudo(3, F(1, 10), k, n), 5))
    show("k_pseudo k=2 delta=1 n=2", vec(lambda k, n: k_pseudo(2, F(1), k, n), 2))
    show("geometric r=2 n=2", vec(lambda k, n: geometric(F(2), k, n), 2))
    show("geometric r=2 n=3", vec(lambda k, n: geometric(F(2), k, n), 3))
    show("constrained_geometric r=2 n=2", vec(lambda k, n: constrained_geometric(F(2), k, n), 2))
    show("constrained_geometric r=2 n=3", vec(lambda k, n: constrained_geometric(F(2), k, n), 3))
    show("ic D=4 R=12 n=2", vec(lambda k, n: ic(4, k, n, R=F(12)), 2))
    show("ic D=4 R=12 n=6", vec(lambda k, n: ic(4, k, n, R=F(12)), 6))
    show("ic D=3 n=3 (boundary, all branches)", vec(lambda k, n: ic(3, k, n), 3))
    show("indep1 R=6 n=3", vec(lambda k, n: indep1(k, n, R=F(6)), 3))
    show("indep1 R=6 n=2", vec(lambda k, n: indep1(k, n, R=F(6)), 2))
    show("indep2 lam=1/2 n=3", vec(lambda k, n: indep2(F(1, 2), k, n), 3))
    show("indep3 R=4 n=3", vec(lambda k, n: indep3(k, n, R=F(4)), 3))
    show("indep5 n=2", vec(lambda k, n: indep5(k, n), 2))

    print()
    print("# constrained geometric as a relative-fair member")
    # the decay table that reproduces it: eps_j = r^{j-1}(r-1)/(r^j-1), eps_1 = 1
    for r in (F(3, 2), F(2), F(3)):
        for n in (1, 2, 3, 5, 8):
            eps_cg = [F(1)] + [r ** (j - 1) * (r - 1) / (r ** j - 1) for j in range(2, n + 1)]
            a = vec(lambda k, nn: constrained_geometric(r, k, nn), n)
            b = vec(lambda k, nn: relative_fair(eps_cg, k, nn), n)
            assert a == b, (r, n, a, b)
    print("identity holds for r in {3/2, 2, 3}, n in {1,2,3,5,8} with eps_j = r^(j-1)(r-1)/(r^j-1)")
    # the complemented (displayed) table does NOT reproduce it
    r, n = F(2), 3
    eps_bad = [F(1)] + [(r ** (j - 1) - 1) / (r ** j - 1) for j in range(2, n + 1)]
    show("relative_fair with complement table r=2 n=3", vec(lambda k, nn: relative_fair(eps_bad, k, nn), n))
    show("constrained_geometric r=2 n=3 (differs)   ", vec(lambda k, nn: constrained_geometric(r, k, nn), n))

    print()
    print("# proportional as the eps = 1/j member of both families")
    for n in range(1, 9):
        eps_prop = [F(1, j) for j in range(1, 9)]
        pa = vec(lambda k, nn: proportional(k, nn), n)
        assert vec(lambda k, nn: absolute_fair(eps_prop, k, nn), n) == pa, n
        assert vec(lambda k, nn: relative_fair(eps_prop, k, nn), n) == pa, n
    print("absolute_fair(1/j) == relative_fair(1/j) == proportional for n = 1..8")

    print()
    print("# PPLNS, N=3, shape [5,1,1,1,12] (Example-4-like head)")
    show("pplns shape [5,1,1,1,12] first 9", pplns([5, 1, 1, 1, 12], 3)[:9])
    show("pplns restriction [5]", pplns([5], 3))
    show("pplns extended [6,1,1,1,12] first 9", pplns([6, 1, 1, 1, 12], 3)[:9])
    r1 = pplns([5, 1, 1, 1, 12], 3)[:5]
    print("round-1 sum:", sum(v for _, v in r1))

    print()
    print("# PPLNS witnesses inside the n_max=6 canonical budget, shape [2,1,3]")
    show("pplns shape [2,1,3]", pplns([2, 1, 3], 3))
    show("pplns extended [3,1,3]", pplns([3, 1, 3], 3))

    print()
    print("# Slush, lambda=1200, times 1,2,3, shape [2,1]")
    base = slush([1.0, 2.0, 3.0], [2, 1], 1200.0)
    show("slush base awards", base)
    ext = slush([1.0, 2.0, 2.5, 3.0], [3, 1], 1200.0)
    show("slush extension awards (s*, full at 2.5)", ext)
    print("round-1 sum:", f"{base[0] + base[1]:.9f}")
    big = slush([1.0, 2.0, 3.0], [2, 1], 1e12)
    show("slush lambda->inf awards", big)

    print()
    print("# scheme-2 relative redistribution witness, lam=1/2, round 2 -> 3")
    h = vec(lambda k, n: indep2(F(1, 2), k, n), 2)
    hp = vec(lambda k, n: indep2(F(1, 2), k, n), 3)
    show("indep2 n=2", h)
    show("indep2 n=3", hp)
    print("ratios:", [str(hp[i] / h[i]) for i in range(2)])

    print()
    print("# scheme-3 absolute redistribution witness, round 3 -> 4, R=1")
    h = vec(lambda k, n: indep3(k, n), 3)
    hp = vec(lambda k, n: indep3(k, n), 4)
    show("indep3 n=3", h)
    show("indep3 n=4", hp)
    print("differences:", [str(h[i] - hp[i]) for i in range(3)])

    print()
    print("# geometric example, r arbitrary kept symbolic via r=5 spot check, B=1")
    r = F(5)
    show("geometric r=5 n=2", vec(lambda k, n: geometric(r, k, n), 2))
    show("geometric r=5 n=3 (extension of the above)", vec(lambda k, n: geometric(r, k, n), 3))

    print()
    print("# round sums")
    for n in (1, 2, 3, 7, 16):
        s = sum(vec(lambda k, nn: geometric(F(2), k, nn), n))
        assert s == 1 - F(1, 2 ** n)
        s = sum(vec(lambda k, nn: constrained_geometric(F(2), k, nn), n))
        assert s == 1
    eps = [F(1), F(2, 5), F(1, 5), F(1, 10), F(1, 20)]
    for n in (1, 2, 3, 5):
        assert sum(vec(lambda k, nn: absolute_fair(eps, k, nn), n)) == R * eps[0]
        assert sum(vec(lambda k, nn: relative_fair(eps, k, nn), n)) == R
    print("geometric sums B(1-r^-n); constrained sums B; absolute sums R*eps1; relative sums R")


if __name__ == "__main__":
    main()
