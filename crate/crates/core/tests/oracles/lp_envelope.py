"""Reference values for the primal envelope on 2-D grids, via scipy's HiGHS.

    python3 lp_envelope.py

Prints the values frozen in the integration tests.
"""
import itertools

import numpy as np
from scipy.optimize import linprog


def group2():
    out = []
    for perm in ((0, 1), (1, 0)):
        for signs in itertools.product((1, -1), repeat=2):
            if signs[0] * signs[1] == 1:
                out.append((perm, signs))
    return out


def lift(nu):
    return np.array([nu[0], nu[1], nu[0] * nu[1]])


def envelope_at(phi, half, count, nu0):
    axis = np.linspace(-half, half, count)
    pts, vals = [], []
    for a in axis:
        for b in axis:
            v = phi((a, b))
            if np.isfinite(v):
                pts.append(lift((a, b)))
                vals.append(v)
    a_eq = np.vstack([np.array(pts).T, np.ones(len(pts))])
    b_eq = np.append(lift(nu0), 1.0)
    res = linprog(np.array(vals), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.fun


def concave(nu):
    return -(nu[0] ** 2 + nu[1] ** 2)


def double_well(nu, a=1.0):
    best = np.inf
    for perm, signs in group2():
        s = [signs[i] * nu[perm[i]] for i in range(2)]
        best = min(best, (s[0] - a) ** 2 + (s[1] - a) ** 2)
    return best


def svk(nu, lam=1.0, mu=1.0):
    x, y = nu
    return lam / 8 * (x * x + y * y - 2) ** 2 + mu / 4 * ((x * x - 1) ** 2 + (y * y - 1) ** 2)


if __name__ == "__main__":
    for name, f in (("concave", concave), ("double_well", double_well), ("svk", svk)):
        for half in (2.0, 3.0):
            print(name, half, "phi(0) =", f((0.0, 0.0)), "env(0) =", repr(envelope_at(f, half, 41, (0.0, 0.0))))
    print("double_well 2.0 env(-0.9, 0.9) =", repr(envelope_at(double_well, 2.0, 41, (-0.9, 0.9))), "phi =", double_well((-0.9, 0.9)))
