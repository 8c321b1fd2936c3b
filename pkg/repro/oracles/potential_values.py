"""Golden values of V(x) at sigma = -x0 = V0 = 5, from a bisection Lambert W in 40-digit arithmetic.

Writes ../expected/potential_values.csv.  Run: python3 potential_values.py
"""

from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
SIGMA, X0, V0 = mp.mpf(5), mp.mpf(-5), mp.mpf(5)
XS = [mp.mpf(1), mp.mpf(5), mp.mpf(9)]


def w0_bisect(z):
    """Principal branch on [-1/e, 0): W e^W is increasing on [-1, 0]."""
    lo, hi = mp.mpf(-1), mp.mpf(0)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid * mp.exp(mid) < z:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def potential(x):
    w = w0_bisect(-mp.exp((X0 - x) / SIGMA))
    return V0 - V0 / (1 + w)


out = Path(__file__).resolve().parent.parent / "expected" / "potential_values.csv"
lines = ["x,V"] + [f"{mp.nstr(x, 15)},{mp.nstr(potential(x), 17)}" for x in XS]
out.write_text("\n".join(lines) + "\n")
print(out.read_text(), end="")
