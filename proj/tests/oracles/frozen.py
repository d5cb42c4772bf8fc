"""Reference values for the unit tests, at 50 significant digits.

Independent of the library's closed forms: kappa1 and kappa2 come from
solving the tangency condition on the two disc families directly, v0 from
bisecting their difference, and base-point normalization from finite
differences of the automorphism. Writes tests/frozen_values.inc.

    python3 tests/oracles/frozen.py > tests/frozen_values.inc
"""

import mpmath as mp

mp.mp.dps = 50


def bisect(g, lo, hi, iters=200):
    glo = g(lo)
    if glo == 0:
        return lo
    for _ in range(iters):
        mid = (lo + hi) / 2
        gm = g(mid)
        if gm == 0:
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return (lo + hi) / 2


def gauge(m, x, y):
    f = lambda s: (x / s) ** 2 + (y / s) ** (2 * m) - 1
    return bisect(f, max(x, y), max(mp.sqrt(2) * x, 2 ** (1 / (2 * m)) * y))


def blaschke_tau(m, b, z):
    """tau and |phi1'(0)| * tau for the Blaschke disc with zero at -z."""
    a2 = (b / z) ** m
    al2 = -z
    al0 = a2 ** 2 * al2
    a1 = mp.sqrt(1 + al0 ** 2 - a2 ** 2 * (1 + z ** 2))
    g0 = b / z
    d2 = (1 - al2 ** 2) * g0 - al2 * g0 * (al0 - al2) / m
    tau = 1 / d2
    return tau, a1 * tau


def kappa1(m, b, v):
    """Smallest-tau Blaschke disc tangent to (m sqrt(v)/b, 1)."""
    xmag = m * mp.sqrt(v) / b
    g = lambda z: blaschke_tau(m, b, z)[1] - xmag
    # Scan (b, 1) for sign changes; keep the root of least tau.
    zs = [b + (1 - b) * mp.mpf(k) / 400 for k in range(400)]
    best = None
    for lo, hi in zip(zs, zs[1:]):
        glo, ghi = g(lo), g(hi)
        if glo == 0 or glo * ghi < 0:
            z = bisect(g, lo, hi)
            tau = blaschke_tau(m, b, z)[0]
            if best is None or tau < best[0]:
                best = (tau, z)
    return best


def kappa2(m, b, v):
    """Power disc tangent to (m sqrt(v)/b, 1), solved for alpha2 in (-1, 0)."""
    B = b ** (2 * m)
    xmag = m * mp.sqrt(v) / b

    def parts(al2):
        al0 = B * al2
        a1 = mp.sqrt(1 + al0 ** 2 - B * (1 + al2 ** 2))
        d2 = b * (al0 - al2) / m
        return a1, d2

    g = lambda al2: parts(al2)[0] / parts(al2)[1] - xmag
    # alpha2 = -1 exactly at v = 1, so the bracket reaches a little past it.
    lo, hi = mp.mpf("-1.001"), mp.mpf("-1e-30")
    assert g(lo) * g(hi) < 0
    al2 = bisect(g, lo, hi)
    return 1 / parts(al2)[1]


def vmax(m):
    return 1 / (4 * m * (1 - m))


def v0(m, b):
    lo, hi = mp.mpf(1) + mp.mpf("1e-30"), vmax(m) - mp.mpf("1e-30")
    h = lambda v: kappa1(m, b, v)[0] - kappa2(m, b, v)
    hlo = h(lo)
    for _ in range(120):
        mid = (lo + hi) / 2
        if (h(mid) < 0) == (hlo < 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def kappa_v(m, b, v):
    if v >= vmax(m):
        return kappa2(m, b, v)
    k1 = kappa1(m, b, v)[0]
    return k1 if v <= 1 else min(k1, kappa2(m, b, v))


def automorphism(m, a, z1, z2):
    d = 1 - mp.conj(a) * z1
    s = 1 - abs(a) ** 2
    return (z1 - a) / d, s ** (1 / (2 * m)) * z2 * mp.exp(-mp.log(d) / m)


def kappa_point(m, z1, z2, X, Y):
    """Move z to (0, |z2'|) with the automorphism a = z1 and rotate."""
    eps = mp.mpf("1e-22")
    w1, w2 = automorphism(m, z1, z1, z2)
    p1, p2 = automorphism(m, z1, z1 + eps * X, z2 + eps * Y)
    q1, q2 = automorphism(m, z1, z1 - eps * X, z2 - eps * Y)
    Xn, Yn = (p1 - q1) / (2 * eps), (p2 - q2) / (2 * eps)
    b = abs(w2)
    xm, ym = abs(Xn), abs(Yn)
    if b == 0:
        return gauge(m, xm, ym)
    if xm == 0:
        return ym / (1 - b ** 2)
    if ym == 0:
        return xm / mp.sqrt(1 - b ** (2 * m))
    v = (b * xm / (m * ym)) ** 2
    return ym * kappa_v(m, b, v)


def f(x):
    return mp.nstr(mp.mpf(x), 20, min_fixed=-mp.inf, max_fixed=mp.inf)


def main():
    M = lambda s: mp.mpf(s)
    out = ["// Generated by tests/oracles/frozen.py; do not edit.", ""]

    out.append("// m, |X|, |Y|, gauge")
    out.append("inline constexpr double kGaugeCases[][4] = {")
    for m, x, y in [("0.25", "0.6", "0.8"), ("0.1", "0.3", "0.2"), ("0.45", "1", "1"),
                    ("0.05", "0.5", "0.01"), ("0.3", "2", "0.001")]:
        out.append(f"    {{{m}, {x}, {y}, {f(gauge(M(m), M(x), M(y)))}}},")
    out.append("};")

    out.append("")
    out.append("// m, b, v, kappa1, Blaschke zero x")
    out.append("inline constexpr double kKappa1Cases[][5] = {")
    for m in ["0.05", "0.25", "0.45"]:
        for b in ["0.1", "0.5", "0.9"]:
            mm, bb = M(m), M(b)
            for v in [M("0.3"), M(1), (1 + vmax(mm)) / 2]:
                tau, z = kappa1(mm, bb, v)
                out.append(f"    {{{m}, {b}, {f(v)}, {f(tau)}, {f(z)}}},")
    out.append("};")

    out.append("")
    out.append("// m, b, v, kappa2")
    out.append("inline constexpr double kKappa2Cases[][4] = {")
    for m in ["0.05", "0.25", "0.45"]:
        for b in ["0.1", "0.5", "0.9"]:
            for v in ["1", "2", "10"]:
                out.append(f"    {{{m}, {b}, {v}, {f(kappa2(M(m), M(b), M(v)))}}},")
    out.append("};")

    out.append("")
    out.append("// m, b, v0")
    out.append("inline constexpr double kSwitchCases[][3] = {")
    for m in ["0.05", "0.25", "0.45"]:
        for b in ["0.1", "0.5", "0.9"]:
            out.append(f"    {{{m}, {b}, {f(v0(M(m), M(b)))}}},")
    out.append("};")

    out.append("")
    out.append("// m, re z1, im z1, re z2, im z2, re X, im X, re Y, im Y, kappa")
    out.append("inline constexpr double kPointCases[][10] = {")
    cases = [
        ("0.25", 0, 0, "0.5", 0, 1, 0, 0, 0),
        ("0.25", 0, 0, "0.5", 0, 1, 0, 1, 0),
        ("0.25", "0.3", "0.2", "0.4", "-0.1", "0.7", "0.1", "-0.2", "0.5"),
        ("0.1", "-0.5", "0.1", "0.05", "0.02", "0.3", 0, 0, "1"),
        ("0.45", "0.1", "-0.6", "0.2", "0.3", "1", "1", "0.01", 0),
        ("0.35", "0.2", 0, 0, 0, "1", "0.5", 0, "2"),
        ("0.2", 0, "0.4", "0.3", 0, "0.02", 0, "1", "0"),
    ]
    for c in cases:
        m = M(c[0])
        vals = [M(x) for x in c[1:]]
        z1 = mp.mpc(vals[0], vals[1])
        z2 = mp.mpc(vals[2], vals[3])
        X = mp.mpc(vals[4], vals[5])
        Y = mp.mpc(vals[6], vals[7])
        k = kappa_point(m, z1, z2, X, Y)
        out.append("    {" + ", ".join([c[0]] + [f(x) for x in vals] + [f(k)]) + "},")
    out.append("};")
    print("\n".join(out))


if __name__ == "__main__":
    main()
