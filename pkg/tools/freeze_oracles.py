"""Compute and freeze independent reference values used by the test-suite.

Everything here runs in mpmath at 40 digits and never imports phaselab, so
the frozen numbers are independent of the code under test. Run from the
repository root::

    python tools/freeze_oracles.py > tests/data/oracle_values.json
"""
import json

import mpmath as mp

mp.mp.dps = 40
EULER = mp.euler


def j_series(order, x):
    """Ascending power series sum (-1)^m (x/2)^(2m+n) / (m! (m+n)!)."""
    x = mp.mpf(x)
    total, m = mp.mpf(0), 0
    while True:
        term = (-1) ** m * (x / 2) ** (2 * m + order) / (mp.factorial(m) * mp.factorial(m + order))
        total += term
        if m > 5 and abs(term) < mp.mpf(10) ** (-45):
            return total
        m += 1


def y_series(order, x):
    """Y_0 and Y_1 from the logarithmic + power series definitions."""
    x = mp.mpf(x)
    if order == 0:
        s, m, harm = mp.mpf(0), 1, mp.mpf(0)
        while True:
            harm += mp.mpf(1) / m
            term = (-1) ** (m + 1) * harm * (x / 2) ** (2 * m) / mp.factorial(m) ** 2
            s += term
            if m > 5 and abs(term) < mp.mpf(10) ** (-45):
                break
            m += 1
        return 2 / mp.pi * ((mp.log(x / 2) + EULER) * j_series(0, x) + s)
    # Y_1 = (2/pi) ln(x/2) J_1 - 2/(pi x) - (1/pi) sum (-1)^m (psi(m+1)+psi(m+2)) (x/2)^(2m+1)/(m!(m+1)!)
    s, m = mp.mpf(0), 0
    while True:
        term = (-1) ** m * (mp.digamma(m + 1) + mp.digamma(m + 2)) * (x / 2) ** (2 * m + 1) / (
            mp.factorial(m) * mp.factorial(m + 1))
        s += term
        if m > 5 and abs(term) < mp.mpf(10) ** (-45):
            break
        m += 1
    return 2 / mp.pi * mp.log(x / 2) * j_series(1, x) - 2 / (mp.pi * x) - s / mp.pi


def bessel_row(x):
    # the alternating series cancels about x / ln(10) digits; carry them
    with mp.workdps(40 + int(x)):
        return {"x": x, "j0": float(j_series(0, x)), "j1": float(j_series(1, x)),
                "y0": float(y_series(0, x)), "y1": float(y_series(1, x))}


def kite_arc_length(tol=mp.mpf("1e-25")):
    def speed(t):
        return mp.sqrt((-mp.sin(t) - 1.3 * mp.sin(2 * t)) ** 2 + (1.5 * mp.cos(t)) ** 2)

    n, prev = 16, None
    while True:
        val = 2 * mp.pi / n * mp.fsum(speed(2 * mp.pi * j / n) for j in range(n))
        if prev is not None and abs(val - prev) < tol:
            return val
        prev, n = val, 2 * n


def soft_disk(k, a, x, source=None, direction=None):
    """Scattered field of a centred soft disk; plane wave or point source."""
    k, a = mp.mpf(k), mp.mpf(a)
    rho, th = mp.sqrt(x[0] ** 2 + x[1] ** 2), mp.atan2(x[1], x[0])
    n_max = int(k * a) + 40
    total = mp.mpc(0)
    for n in range(-n_max, n_max + 1):
        if direction is not None:
            c = mp.mpc(0, 1) ** n * mp.exp(-1j * n * mp.atan2(direction[1], direction[0]))
        else:
            rz, tz = mp.sqrt(source[0] ** 2 + source[1] ** 2), mp.atan2(source[1], source[0])
            c = mp.mpc(0, 0.25) * mp.hankel1(n, k * rz) * mp.exp(-1j * n * tz)
        t = -mp.besselj(n, k * a) / mp.hankel1(n, k * a)
        total += t * c * mp.hankel1(n, k * rho) * mp.exp(1j * n * th)
    return total


def soft_disk_far(k, a, theta, direction):
    k, a = mp.mpf(k), mp.mpf(a)
    n_max = int(k * a) + 40
    td = mp.atan2(direction[1], direction[0])
    total = mp.mpc(0)
    for n in range(-n_max, n_max + 1):
        t = -mp.besselj(n, k * a) / mp.hankel1(n, k * a)
        total += t * mp.mpc(0, 1) ** n * mp.exp(-1j * n * td) * mp.mpc(0, -1) ** n * mp.exp(1j * n * theta)
    return mp.sqrt(2 / (mp.pi * k)) * mp.exp(-1j * mp.pi / 4) * total


def c(z):
    return [float(mp.re(z)), float(mp.im(z))]


def main():
    xs = [1e-8, 1e-3, 0.1, 0.5, 1.0, 2.5, 5.0, 7.99, 8.0, 8.01, 12.0, 24.99, 25.0, 25.01, 40.0, 80.0, 100.0]
    out = {
        "bessel": [bessel_row(x) for x in xs],
        "kite_arc_length": float(kite_arc_length()),
        "soft_disk_point_source": {"k": 1.0, "a": 1.0, "source": [0.0, 3.0], "x": [2.0, 2.0],
                                   "value": c(soft_disk(1, 1, [mp.mpf(2), mp.mpf(2)],
                                                        source=[mp.mpf(0), mp.mpf(3)]))},
        "soft_disk_plane": {"k": 2.0, "a": 1.0, "direction": [1.0, 0.0], "x": [0.0, 1.7],
                            "value": c(soft_disk(2, 1, [mp.mpf(0), mp.mpf("1.7")], direction=[1, 0]))},
        "soft_disk_far": {"k": 1.0, "a": 1.0, "direction": [1.0, 0.0],
                          "theta": [0.0, 1.0, 3.14159265358979],
                          "values": [c(soft_disk_far(1, 1, mp.mpf(t), [1, 0]))
                                     for t in (0.0, 1.0, 3.14159265358979)]},
    }
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
