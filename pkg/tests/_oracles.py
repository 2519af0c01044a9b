"""Independent numerical oracles used by the tests.

Everything here is deliberately primitive: finite differences with
Richardson extrapolation and hand-expanded closed forms.  None of it calls
into the jet engine, so agreement between the two is a genuine
cross-check rather than a tautology.
"""

import numpy as np

from kkforms import ChartPoint


def richardson_d1(f, x, h=1e-3):
    """First derivative by central differences at steps h, h/2, h/4."""
    d = [(f(x + s) - f(x - s)) / (2.0 * s) for s in (h, h / 2.0, h / 4.0)]
    r1 = (4.0 * d[1] - d[0]) / 3.0
    r2 = (4.0 * d[2] - d[1]) / 3.0
    return (16.0 * r2 - r1) / 15.0


def richardson_d2(f, x, h=1e-3):
    """Second derivative by central differences at steps h, h/2, h/4."""
    d = [(f(x + s) - 2.0 * f(x) + f(x - s)) / s ** 2 for s in (h, h / 2.0, h / 4.0)]
    r1 = (4.0 * d[1] - d[0]) / 3.0
    r2 = (4.0 * d[2] - d[1]) / 3.0
    return (16.0 * r2 - r1) / 15.0


def fd_first_partials(field, p, h=1e-3):
    """All first partials of a tensor field's components, by Richardson FD.

    Returns an array shaped like the component grid with one trailing
    derivative axis, matching the layout of ``field.jet(p, 1).d1``.
    """
    x = np.asarray(p.coords, dtype=float)
    value = field.jet(p, 0).value
    out = np.empty(np.shape(value) + (x.size,))
    for a in range(x.size):
        def component_values(t, a=a):
            q = x.copy()
            q[a] += t
            return field.jet(ChartPoint(tuple(q)), 0).value
        out[..., a] = richardson_d1(component_values, 0.0, h)
    return out


def conformal_christoffel(eta_diag, kappa, coords):
    """Closed-form Christoffel symbols of g = eta / (1 + (kappa/4) <x,x>)^2.

    For a conformal metric g = e^{2 sigma} eta the symbols are
    Gamma^l_{mn} = delta^l_m d_n sigma + delta^l_n d_m sigma
                   - eta_{mn} eta^{lc} d_c sigma,
    here with sigma = -log(1 + (kappa/4) eta_{ab} x^a x^b), expanded by
    hand.  Returned with layout [l, m, n] = Gamma^l_{mn}.
    """
    eta = np.asarray(eta_diag, dtype=float)
    x = np.asarray(coords, dtype=float)
    d = x.size
    phi = 1.0 + 0.25 * kappa * float(np.sum(eta * x * x))
    dsigma = -0.5 * kappa * eta * x / phi
    gamma = np.zeros((d, d, d))
    for l in range(d):
        for m in range(d):
            for n in range(d):
                gamma[l, m, n] = ((l == m) * dsigma[n] + (l == n) * dsigma[m]
                                  - (eta[m] if m == n else 0.0) * (1.0 / eta[l]) * dsigma[l])
    return gamma
