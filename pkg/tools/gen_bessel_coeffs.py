"""Regenerate ``src/phaselab/_bessel_coeffs.py``.

Chebyshev tables for the orders 0 and 1 Bessel kernels are fitted against
mpmath at 40 digits. Run from the repository root::

    python tools/gen_bessel_coeffs.py > src/phaselab/_bessel_coeffs.py
"""
import mpmath as mp

mp.mp.dps = 40

SMALL = 8      # upper end of the power-type region
MID = 25       # upper end of the fitted amplitude/phase region
NODES = 80
CUTOFF = mp.mpf("1e-19")


def chebfit(func, nodes=NODES):
    """Chebyshev coefficients of ``func`` on [-1, 1] (first-kind, c0 halved)."""
    th = [mp.pi * (j + mp.mpf(1) / 2) / nodes for j in range(nodes)]
    fv = [func(mp.cos(t)) for t in th]
    coeffs = []
    for n in range(nodes):
        c = 2 * mp.fsum(fv[j] * mp.cos(n * th[j]) for j in range(nodes)) / nodes
        coeffs.append(c)
    coeffs[0] /= 2
    scale = max(abs(c) for c in coeffs)
    last = max(i for i, c in enumerate(coeffs) if abs(c) > CUTOFF * scale)
    return coeffs[: last + 1]


def small_region(s):
    # s in [-1, 1]  <->  w = x^2 / SMALL^2 in [0, 1]
    return mp.mpf(SMALL) * mp.sqrt((s + 1) / 2)


def j0_s(s):
    return mp.besselj(0, small_region(s))


def j1_over_x(s):
    x = small_region(s)
    if x == 0:
        return mp.mpf(1) / 2
    return mp.besselj(1, x) / x


def r0_s(s):
    x = small_region(s)
    if x == 0:
        return 2 / mp.pi * mp.euler
    return mp.bessely(0, x) - 2 / mp.pi * mp.log(x / 2) * mp.besselj(0, x)


def r1_over_x(s):
    x = small_region(s)
    if x == 0:
        # limit of (Y1 - (2/pi) ln(x/2) J1 + 2/(pi x)) / x
        return (2 * mp.euler - 1) / (2 * mp.pi)
    return (mp.bessely(1, x) - 2 / mp.pi * mp.log(x / 2) * mp.besselj(1, x)
            + 2 / (mp.pi * x)) / x


def mid_region(s):
    # s in [-1, 1]  <->  v = (SMALL/x)^2 in [(SMALL/MID)^2, 1]
    vlo = (mp.mpf(SMALL) / MID) ** 2
    v = vlo + (1 - vlo) * (s + 1) / 2
    return mp.mpf(SMALL) / mp.sqrt(v)


def pq(order, s, which):
    x = mid_region(s)
    chi = x - (mp.mpf(order) / 2 + mp.mpf(1) / 4) * mp.pi
    amp = mp.sqrt(mp.pi * x / 2)
    j, y = mp.besselj(order, x), mp.bessely(order, x)
    if which == "p":
        return amp * (j * mp.cos(chi) + y * mp.sin(chi))
    return amp * (y * mp.cos(chi) - j * mp.sin(chi)) * x


def asymptotic_terms(order, x_min=MID):
    """Hankel coefficients a_k(order) kept until they fall below 1e-18 at x_min."""
    mu = 4 * order * order
    terms = [mp.mpf(1)]
    k = 1
    while True:
        a = terms[-1] * (mu - (2 * k - 1) ** 2) / (k * 8)
        if abs(a) / mp.mpf(x_min) ** k < mp.mpf("1e-18"):
            break
        terms.append(a)
        k += 1
    return terms


def fmt(name, values):
    lines = [f"{name} = ("]
    lines += [f"    {mp.nstr(v, 20, min_fixed=0, max_fixed=0)}," for v in values]
    lines.append(")")
    return "\n".join(lines)


def main():
    print('"""Frozen Chebyshev tables for :mod:`phaselab.specialfun`.')
    print()
    print("Generated by tools/gen_bessel_coeffs.py; do not edit by hand.")
    print('"""')
    print()
    print(f"SMALL = {SMALL}.0")
    print(f"MID = {MID}.0")
    print()
    print(fmt("J0_SMALL", chebfit(j0_s)))
    print(fmt("J1X_SMALL", chebfit(j1_over_x)))
    print(fmt("R0_SMALL", chebfit(r0_s)))
    print(fmt("R1X_SMALL", chebfit(r1_over_x)))
    print(fmt("P0_MID", chebfit(lambda s: pq(0, s, "p"))))
    print(fmt("Q0X_MID", chebfit(lambda s: pq(0, s, "q"))))
    print(fmt("P1_MID", chebfit(lambda s: pq(1, s, "p"))))
    print(fmt("Q1X_MID", chebfit(lambda s: pq(1, s, "q"))))
    print(fmt("HANKEL0", asymptotic_terms(0)))
    print(fmt("HANKEL1", asymptotic_terms(1)))


if __name__ == "__main__":
    main()
