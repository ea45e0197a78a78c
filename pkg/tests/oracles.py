"""Independent reference computations used by the test-suite.

Nothing here imports the package: structure matrices are typed in from the
frame formulas and all derivatives are taken symbolically with sympy.
"""
import numpy as np
import sympy as sp

X = sp.symbols("x1:5", real=True)


def frame_phi(case, lam, eps=1, a0=0):
    """Columns phi(e_j) for the three frame families."""
    if case == "phi1":
        c = sp.sqrt(lam**2 - 1)
        cols = [(0, lam, c, 0), (lam, 0, 0, c), (-c, 0, 0, -lam), (0, -c, -lam, 0)]
    elif case == "phi2":
        c = sp.sqrt(1 - lam**2)
        cols = [(0, lam, 0, c), (lam, 0, c, 0), (0, c, 0, -lam), (c, 0, -lam, 0)]
    else:
        r = sp.Rational(eps) / lam if not isinstance(lam, sp.Basic) else eps / lam
        cols = [(0, lam, a0, a0), (lam, 0, -r * a0, -r * a0), (-a0, -r * a0, 0, eps), (a0, r * a0, eps, 0)]
    return sp.Matrix(cols).T


def bracket(v, w):
    return w.jacobian(X) * v - v.jacobian(X) * w


def nijenhuis_sym(phi, v, w):
    pv, pw = phi * v, phi * w
    return bracket(v, w) + bracket(pv, pw) - phi * (bracket(pv, w) + bracket(v, pw))


def nijenhuis_at(phi, v, w, point):
    expr = nijenhuis_sym(phi, v, w)
    subs = dict(zip(X, point))
    return np.array([float(e.evalf(subs=subs)) for e in expr])


def const(*c):
    return sp.Matrix(c)


def example1_frame_sym():
    r = sp.exp(X[0])
    c, s = sp.cos(X[1]), sp.sin(X[1])
    e1 = sp.Matrix([1, 0, 0, 0])
    e2 = sp.Matrix([0, 1, 0, 0])
    e3 = sp.Matrix([0, 0, r * c, -r * s])
    e4 = sp.Matrix([0, 0, r * s, r * c])
    return [e1, e2, e3, e4]


# Lie algebra table: BRACKET[(i, j)] = coefficients of [e_i, e_j] in the frame
BRACKET = {
    (0, 1): (0, 0, 0, 0),
    (2, 3): (0, 0, 0, 0),
    (0, 2): (0, 0, 1, 0),
    (0, 3): (0, 0, 0, 1),
    (1, 2): (0, 0, 0, -1),
    (1, 3): (0, 0, 1, 0),
}


def algebra_bracket(a, b):
    """Bilinear extension of the table to frame-coefficient vectors."""
    out = np.zeros(4)
    for (i, j), c in BRACKET.items():
        out += (a[i] * b[j] - a[j] * b[i]) * np.array(c, dtype=float)
    return out


def algebra_nijenhuis(m, a, b):
    """Torsion of constant frame coefficients m on the Lie algebra."""
    br = algebra_bracket
    return br(a, b) + br(m @ a, m @ b) - m @ (br(m @ a, b) + br(a, m @ b))
