"""Reference values of a0[g] for the symmetric two-slit map.

g = s (e2 - P(u)), u = log(z sqrt(q)) / (2 pi i), s = 1 / (e1 - e2)^(1/2) (e2 - e3)^(1/2),
with P(u) = e3 + (e1 - e3) / sn^2(u sqrt(e1 - e3), m), m = (e2 - e3)/(e1 - e3).
a0[g] and a0[1/g] are means over the unit circle by mpmath quadrature.
"""
import json
import sys

import mpmath as mp

mp.mp.dps = 40


def row(q):
    q = mp.mpf(q)
    t2, t3, t4 = (mp.jtheta(n, 0, q) for n in (2, 3, 4))
    pi2 = mp.pi ** 2
    e1 = pi2 / 3 * (t3 ** 4 + t4 ** 4)
    e2 = pi2 / 3 * (t2 ** 4 - t4 ** 4)
    e3 = -pi2 / 3 * (t2 ** 4 + t3 ** 4)
    m = (e2 - e3) / (e1 - e3)
    r = mp.sqrt(e1 - e3)
    s = 1 / mp.sqrt((e1 - e2) * (e2 - e3))

    def g(theta):
        z = mp.expjpi(theta / mp.pi)
        u = mp.log(z * mp.sqrt(q)) / (2j * mp.pi)
        sn = mp.ellipfun('sn', u * r, m=m)
        return s * (e2 - (e3 + (e1 - e3) / sn ** 2))

    cuts = [k * mp.pi / 8 for k in range(-8, 9)]
    a = mp.quad(g, cuts) / (2 * mp.pi)
    b = mp.quad(lambda th: 1 / g(th), cuts) / (2 * mp.pi)
    return {
        "q": float(q),
        "lambda": float(mp.re(a)),
        "a0_inv": float(mp.re(b)),
        "imag": float(abs(mp.im(a))),
        "ln_r": float(-mp.log(q) / 2),
    }


if __name__ == "__main__":
    qs = [0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
    json.dump([row(q) for q in qs], sys.stdout, indent=1)
    print()
