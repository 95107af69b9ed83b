"""Independent reference values for the default configuration (n = 1,
N = 2, r = 1/20, ell = 0). Written against numpy/sympy only; the C++ tests
freeze the printed numbers.

    python3 tests/oracles/reference_values.py
"""
import numpy as np
import sympy as sp

r = 0.05
eta = sp.symbols("eta", real=True)
g = sp.exp(-1 / (1 - (eta / r) ** 2))
phi_hat = -sp.diff(g, eta, 2)            # (-Laplacian) g, ell = 0
phi_hat_d = sp.diff(phi_hat, eta)
f_g = sp.lambdify(eta, g, "numpy")
f_hat = sp.lambdify(eta, phi_hat, "numpy")
f_hat_d = sp.lambdify(eta, phi_hat_d, "numpy")

# Gauss-Legendre on (0, r); every integrand is even in eta
t, w = np.polynomial.legendre.leggauss(6000)
nodes = 0.5 * r * (t + 1.0)
weights = 0.5 * r * w
with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
    G = np.nan_to_num(f_g(nodes))
    H = np.nan_to_num(f_hat(nodes))
    HD = np.nan_to_num(f_hat_d(nodes))

A = 2.0 * np.sum(weights * H * H)        # int phi_hat^2
B = 2.0 * np.sum(weights * HD * HD)      # int phi_hat'^2
phiphi0 = A / (2.0 * np.pi)


def cos_transform(values, x):
    out = np.empty_like(x)
    for i in range(0, x.size, 2000):
        xs = x[i:i + 2000]
        out[i:i + 2000] = 2.0 * np.cos(np.outer(xs, nodes)) @ (weights * values)
    return out


def phi(x):
    return x * x * cos_transform(G, x) / (2.0 * np.pi)


def phiphi(y):
    return cos_transform(H * H, y) / (2.0 * np.pi)


def simpson(y, h):
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


h = 0.25
x = np.arange(0, 240001) * h             # [0, 60000]
ph = phi(x)

a1, a2, a_nu = -2.25, 0.5, -0.875
with np.errstate(divide="ignore"):
    f1_base = np.sqrt(2.0 * simpson(np.where(x > 0, ph * ph * x ** a1, 0.0), h))


def lhs_strong(eps):
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(x > 0, np.abs(phiphi(eps * x)) * np.abs(ph) * x ** a_nu, 0.0)
    return np.sqrt(eps) * 2.0 * simpson(v, h)


def sobolev(eps):
    # ||sigma||_{W^1}^2 = 2 pi (int sigma^2 + int sigma'^2) for sigma = phi_hat((. - 1)/eps)
    return np.sqrt(2 * np.pi * (eps * A + B / eps)) * np.sqrt(2 * np.pi * (A + B))


def smooth_step(u):
    u = np.clip(u, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(u > 0, np.exp(-1.0 / u), 0.0)
        b = np.where(u < 1, np.exp(-1.0 / (1.0 - u)), 0.0)
    return a / (a + b)


tw, ww = np.polynomial.legendre.leggauss(4000)
xi = 0.5 * 2 * r * (tw + 1.0)
wxi = 0.5 * 2 * r * ww
psi_hat = smooth_step((2 * r - xi) / r)
xs = np.arange(0, 8001) * h              # psi decays fast
psi = np.array([2.0 * np.sum(wxi * psi_hat * np.cos(v * xi)) for v in xs]) / (2 * np.pi)
rest = np.sqrt(2.0 * simpson(psi * psi * xs ** a2, h))

print(f"int_phi_hat_sq      {A:.15e}")
print(f"int_phi_hat_d_sq    {B:.15e}")
print(f"phiphi0             {phiphi0:.15e}")
for v in (10.0, 100.0, 500.0):
    print(f"phi({v:g})          {phi(np.array([v]))[0]:.15e}")
print(f"f1_base_norm        {f1_base:.15e}")
print(f"rest_norm           {rest:.15e}")
for e in (0.125, 1 / 64, 1 / 1024):
    print(f"lhs_strong({e:g})   {lhs_strong(e):.15e}")
for e in (0.125, 1 / 1024):
    print(f"sup_sobolev({e:g})  {sobolev(e):.15e}")
