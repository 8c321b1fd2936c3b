"""Golden values of the unnormalised ground state psi_0 at sigma = -x0 = V0 = 5.

The level E_0 is located by mpmath root finding on the eigenvalue equation,
then psi_0 is summed from brute-force 1F1 series in 40-digit arithmetic.
Writes ../expected/psi_ground_values.csv.  Run: python3 psi_ground_values.py
"""

from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
SIGMA, X0, V0 = mp.mpf(5), mp.mpf(-5), mp.mpf(5)
XS = [mp.mpf(1), mp.mpf(4), mp.mpf(7), mp.mpf(10)]


def m_series(a, c, z):
    """Plain power series of 1F1, summed until terms fall below 1e-45."""
    term, total, k = mp.mpf(1), mp.mpf(1), 0
    while abs(term) > mp.mpf(10) ** -45 * abs(total) or k < 5:
        term *= (a + k) / (c + k) * z / (k + 1)
        total += term
        k += 1
    return total


def abbrev(E):
    p, q = mp.sqrt(-E), mp.sqrt(V0 - E)
    return -(p - q) ** 2 * SIGMA / (2 * q), 2 * p * SIGMA, 2 * q * SIGMA


def eigen(E):
    a, c, s = abbrev(E)
    return 1 + (s - c) * m_series(a + 1, c + 1, s) / (2 * c * m_series(a, c, s))


def psi(x, E):
    a, c, s = abbrev(E)
    w = mp.lambertw(-mp.exp((X0 - x) / SIGMA)).real
    t = -s * w
    inner = (c - s) / 2 * m_series(a, c, t) + a * s / c * m_series(a + 1, c + 1, t)
    return mp.exp(s * w / 2) * abs(w) ** (c / 2) * inner


E0 = mp.findroot(eigen, (mp.mpf("-3.8424"), mp.mpf("-3.8423")), solver="anderson")
out = Path(__file__).resolve().parent.parent / "expected" / "psi_ground_values.csv"
lines = ["x,psi_0"] + [f"{mp.nstr(x, 15)},{mp.nstr(psi(x, E0), 17)}" for x in XS]
out.write_text("\n".join(lines) + "\n")
print(mp.nstr(E0, 20))
print(out.read_text(), end="")
