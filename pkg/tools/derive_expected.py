"""Independent oracles for hand-frozen test constants.

Run once, paste results into tests. Uses only direct formula evaluation
(fractions / mpmath-free float math), never the package under test.
"""

import math


def chi2_distance(x, y):
    sx, sy = sum(x), sum(y)
    xh = [v / sx for v in x]
    yh = [v / sy for v in y]
    k = sum(2 * a * b / (a + b) for a, b in zip(xh, yh) if a + b > 0)
    return 1.0 - k


def js_distance(x, y):
    sx, sy = sum(x), sum(y)
    xh = [v / sx for v in x]
    yh = [v / sy for v in y]
    k = 0.0
    for a, b in zip(xh, yh):
        s = a + b
        if a > 0:
            k += 0.5 * a * math.log2(s / a)
        if b > 0:
            k += 0.5 * b * math.log2(s / b)
    return 1.0 - k


def nmi(a, b):
    n = len(a)
    la, lb = sorted(set(a)), sorted(set(b))
    hx = 0.0
    for u in la:
        p = sum(1 for v in a if v == u) / n
        hx -= p * math.log(p)
    hy = 0.0
    for u in lb:
        p = sum(1 for v in b if v == u) / n
        hy -= p * math.log(p)
    mi = 0.0
    for u in la:
        for w in lb:
            pxy = sum(1 for i in range(n) if a[i] == u and b[i] == w) / n
            if pxy > 0:
                px = sum(1 for v in a if v == u) / n
                py = sum(1 for v in b if v == w) / n
                mi += pxy * math.log(pxy / (px * py))
    denom = 0.5 * (hx + hy)
    return mi / denom if denom > 0 else 0.0


def main():
    x = [1.0, 2.0, 3.0]
    y = [3.0, 2.0, 1.0]
    print(f"chi2 d([1,2,3],[3,2,1])      = {chi2_distance(x, y):.15f}")
    print(f"js   d([1,2,3],[3,2,1])      = {js_distance(x, y):.15f}")
    x2 = [0.5, 0.5, 0.0]
    y2 = [0.0, 0.5, 0.5]
    print(f"chi2 d([.5,.5,0],[0,.5,.5])  = {chi2_distance(x2, y2):.15f}")
    print(f"js   d([.5,.5,0],[0,.5,.5])  = {js_distance(x2, y2):.15f}")

    a = [0, 0, 1, 1]
    b = [0, 1, 1, 1]
    print(f"nmi([0,0,1,1],[0,1,1,1])     = {nmi(a, b):.15f}")
    a2 = [0, 0, 1, 1, -1]
    b2 = [1, 1, 0, 0, -1]
    print(f"nmi(perm + noise match)      = {nmi(a2, b2):.15f}")
    a3 = [0, 0, 0, 1, 1, 1]
    b3 = [0, 1, 2, 3, 3, 4]
    print(f"nmi(refinement case)         = {nmi(a3, b3):.15f}")

    # Embedded-epsilon closed forms: cosine-space eps for kernel measures.
    eps, sigma = 10.0, 20.0
    print(f"embedded eps l2 (10, s=20)   = {1.0 - math.exp(-eps * eps / (2 * sigma * sigma)):.15f}")
    eps, sigma = 40.0, 80.0
    print(f"embedded eps l1 (40, s=80)   = {1.0 - math.exp(-eps / sigma):.15f}")

    # Gaussian tail: success probability of the pairwise rank test at
    # x.q = 0.9, y.q = 0.3. X ~ N(0.9 t, 1-0.81), Y ~ N(0.3 t, 1-0.09),
    # t = sqrt(2 ln D), D = 1024. P[X > Y] = Phi(0.6 t / sqrt(1.10)).
    t = math.sqrt(2.0 * math.log(1024.0))
    z = 0.6 * t / math.sqrt((1 - 0.81) + (1 - 0.09))
    p = 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
    print(f"rank-test success prob       = {p:.15f}")

    # Adaptive threshold for eps = 0.3 cosine: (1 - eps) sqrt(2 ln D).
    print(f"adaptive thr eps=.3 D=1024   = {(1 - 0.3) * t:.15f}")


if __name__ == "__main__":
    main()
