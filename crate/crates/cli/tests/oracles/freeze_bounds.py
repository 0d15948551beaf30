"""Freeze 30-digit reference values of the closed-form bounds.

Each formula is transcribed literally (no algebraic rewrites) and evaluated
with mpmath at 60 significant digits. Output: tests/data/frozen_bounds.tsv,
one point per line as `name<TAB>args<TAB>value`, list arguments comma-joined.

    python3 crates/cli/tests/oracles/freeze_bounds.py > crates/cli/tests/data/frozen_bounds.tsv
"""

from mpmath import mp, mpf, sqrt, log, exp, pi

mp.dps = 60


def sqrt_karmed(sigma, sigma0, k, n):
    s2, c = mpf(sigma) ** 2, mpf(sigma) ** 2 / mpf(sigma0) ** 2 * k
    return 4 * sqrt(2 * s2 * k * log(n)) * (sqrt(n + c) - sqrt(c))


def sqrt_linear(sigma, sigma0max, d, n, delta):
    s2, m2 = mpf(sigma) ** 2, mpf(sigma0max) ** 2
    inner = 2 * m2 * d * n / log(1 + m2 / s2) * log(1 + m2 * n / (s2 * d)) * log(1 / mpf(delta))
    return 2 * sqrt(inner)


def lemma3(means, sigma0):
    s2 = mpf(sigma0) ** 2
    total = mpf(0)
    for a, ma in enumerate(means):
        for b, mb in enumerate(means):
            if a != b:
                total += exp(-(mpf(ma) - mpf(mb)) ** 2 / (4 * s2))
    return total / (2 * sqrt(pi * s2))


def two_arm(means, sigma0):
    s2 = mpf(sigma0) ** 2
    return exp(-(mpf(means[0]) - mpf(means[1])) ** 2 / (4 * s2)) / sqrt(pi * s2)


def appendix_c(delta, n, k):
    L = log(1 / mpf(delta))
    return (2 * sqrt(2 * L) + 1) / sqrt(8 * L * log(log(n))) * k * mpf(delta) + 1


def fmt(x):
    return mp.nstr(x, 30, min_fixed=-40, max_fixed=40)


def line(name, args, value):
    print(f"{name}\t{' '.join(args)}\t{fmt(value)}")


SQRT_KARMED = [(1, 1, 10, 1000), (0.5, 2, 5, 100), (2, 0.25, 20, 10**4), (1, 0.001, 3, 10**6), (3, 10, 50, 10**9)]
SQRT_LINEAR = [
    (1, 1, 10, 1000, 0.001),
    (0.5, 2, 3, 100, 0.05),
    (2, 0.1, 20, 10**4, 1e-4),
    (1, 0.001, 5, 10**6, 1e-6),
    (1.5, 4, 2, 50, 0.2),
]
LEMMA3 = [
    ([1, 0, 0], 1),
    ([0.5, -0.25, 2, 0], 0.3),
    ([1] + [0] * 9, 0.25),
    ([3, 2.5, -1, 0.75, 0.1], 2),
    ([0.2, 0.1], 0.05),
]
TWO_ARM = [([1, 0], 1), ([0.3, -0.4], 0.7), ([2, 2], 0.5), ([-1, 1.5], 3), ([0.05, 0], 0.01)]
APPENDIX_C = [(0.001, 1000, 10), (0.01, 100, 2), (1e-6, 10**6, 5), (0.1, 20, 3), (1e-9, 10**9, 50)]

if __name__ == "__main__":
    for s, s0, k, n in SQRT_KARMED:
        line("sqrt_karmed", [repr(s), repr(s0), str(k), str(n)], sqrt_karmed(s, s0, k, n))
    for s, m, d, n, dl in SQRT_LINEAR:
        line("sqrt_linear", [repr(s), repr(m), str(d), str(n), repr(dl)], sqrt_linear(s, m, d, n, dl))
    for means, s0 in LEMMA3:
        line("lemma3", [",".join(repr(x) for x in means), repr(s0)], lemma3(means, s0))
    for means, s0 in TWO_ARM:
        line("two_arm", [",".join(repr(x) for x in means), repr(s0)], two_arm(means, s0))
    for dl, n, k in APPENDIX_C:
        line("appendix_c", [repr(dl), str(n), str(k)], appendix_c(dl, n, k))
