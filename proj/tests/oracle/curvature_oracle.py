"""Independent sympy oracle for the scalar curvature (twice the Gauss curvature)
of g_ij = inverse cometric, via the Christoffel/Riemann route (not Brioschi)."""
import sympy as sp

X, Y = sp.symbols('X Y')


def scalar_curvature(G):
    gi = sp.Matrix(G)
    g = gi.inv()
    vs = [X, Y]
    Gam = [[[sum(gi[k, l] * (sp.diff(g[l, i], vs[j]) + sp.diff(g[l, j], vs[i]) - sp.diff(g[i, j], vs[l]))
                 for l in range(2)) / 2 for j in range(2)] for i in range(2)] for k in range(2)]

    def riem(r, s, m, n):  # R^r_{smn}
        t = sp.diff(Gam[r][n][s], vs[m]) - sp.diff(Gam[r][m][s], vs[n])
        t += sum(Gam[r][m][l] * Gam[l][n][s] - Gam[r][n][l] * Gam[l][m][s] for l in range(2))
        return t
    ric = [[sum(riem(r, s, r, n) for r in range(2)) for n in range(2)] for s in range(2)]
    return sum(gi[s, n] * ric[s][n] for s in range(2) for n in range(2))


h = sp.Rational(1, 2)
models = {
    'coaxial_a0': [[1 - X**2/2, X*(1 - Y)], [X*(1 - Y), 2*(1 - Y**2)]],
    'coaxial_G0_printed': [[2 - X**2, 2*X*(1 - Y)], [2*X*(1 - Y), 4*(1 - Y**2)]],
    'coaxial_a1': [[1 - X**2, -2*X*Y], [-2*X*Y, 4*(1 - X**2 - Y**2)]],
    'coaxial_a3': [[1 - 2*X**2, X*(-2 - 4*Y)], [X*(-2 - 4*Y), 8*(1 - Y**2) - 12*X**2]],
    'parabola_tangent_secant': [[4*X*(1 - X), 8*Y*(1 - X)], [8*Y*(1 - X), 16*Y*(X - Y)]],
    'parabola_two_tangents': [[Y + 1 - 2*X**2, 2*X*(1 - Y)], [2*X*(1 - Y), 4*(2*X**2 - Y - Y**2)]],
    'cuspidal_cubic_secant': [[4*X*(1 - X), 6*Y*(1 - X)], [6*Y*(1 - X), 9*(X**2 - Y**2)]],
    'cuspidal_cubic_tangent': [[8*(X + Y - 2*X**2), 12*(Y - 2*X*Y + X**2)], [12*(Y - 2*X*Y + X**2), 18*(X - Y)*(X + 2*Y)]],
    'swallowtail': [[2 - 8*Y - 9*X**2, -X*(12*Y + 1)], [-X*(12*Y + 1), sp.Rational(3, 2)*X**2 - 16*Y**2 + 4*Y]],
    'deltoid': [[9 + 6*X + Y**2 - 3*X**2, -2*Y*(2*X + 3)], [-2*Y*(2*X + 3), 9 - 6*X + X**2 - 3*Y**2]],
    'disk_001': [[1 - X**2, -X*Y], [-X*Y, 1 - Y**2]],
    'disk_111': [[(1 - X**2 - Y**2) + 1 - X**2, -X*Y], [-X*Y, (1 - X**2 - Y**2) + 1 - Y**2]],
    'nodal_cubic': [[4*X*(1 - X), 2*Y*(2 - 3*X)], [2*Y*(2 - 3*X), 4*X - 3*X**2 - 9*Y**2]],
    'triangle_001': [[X*(1 - X), -X*Y], [-X*Y, Y*(1 - Y)]],
}
pts = {
    'coaxial_a0': [(0, 0), (h, sp.Rational(1, 4))],
    'coaxial_G0_printed': [(0, 0), (h, sp.Rational(1, 4))],
    'coaxial_a1': [(0, 0), (sp.Rational(1, 3), sp.Rational(1, 5))],
    'coaxial_a3': [(0, 0), (sp.Rational(1, 5), sp.Rational(1, 10))],
    'parabola_tangent_secant': [(h, sp.Rational(1, 8)), (sp.Rational(3, 4), sp.Rational(1, 4))],
    'parabola_two_tangents': [(0, -h), (sp.Rational(1, 4), -sp.Rational(1, 4))],
    'cuspidal_cubic_secant': [(h, 0), (sp.Rational(3, 4), sp.Rational(1, 4))],
    'cuspidal_cubic_tangent': [(sp.Rational(1, 4), 0), (sp.Rational(1, 2), sp.Rational(1, 5))],
    'swallowtail': [(0, sp.Rational(1, 8)), (sp.Rational(1, 20), sp.Rational(1, 8))],
    'deltoid': [(0, 0), (1, h)],
    'disk_001': [(0, 0), (h, sp.Rational(1, 4))],
    'disk_111': [(0, 0), (h, sp.Rational(1, 4))],
    'nodal_cubic': [(h, 0), (sp.Rational(3, 4), sp.Rational(1, 8))],
    'triangle_001': [(sp.Rational(1, 4), sp.Rational(1, 4)), (h, sp.Rational(1, 8))],
}
for name, G in models.items():
    R = scalar_curvature(G)
    vals = [sp.nsimplify(sp.simplify(R.subs({X: a, Y: b}))) for a, b in pts[name]]
    print(name, vals)
