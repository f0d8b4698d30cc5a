"""Reference values for the C++ tests, computed independently of the library.

h(z) = E[|S'(z)|^2 | S(z) = K] * p_{S(z)}(K), with the conditional moment
taken from the joint Gaussian law of (Re S, Im S, Re S', Im S') by a Schur
complement at 50-digit precision.
"""
import mpmath as mp
from scipy import integrate

mp.mp.dps = 50


def gaussian_density(f, df, mu_a, var_a, mu_b, var_b, K):
    n = len(f)
    # a_j contributes (u, v, p, q), b_j contributes (-v, u, -q, p).
    rows_a = [[f[j].real, f[j].imag, df[j].real, df[j].imag] for j in range(n)]
    rows_b = [[-f[j].imag, f[j].real, -df[j].imag, df[j].real] for j in range(n)]
    mean = [mp.mpf(0)] * 4
    cov = mp.zeros(4, 4)
    for j in range(n):
        for r in range(4):
            mean[r] += mu_a[j] * rows_a[j][r] + mu_b[j] * rows_b[j][r]
            for c in range(4):
                cov[r, c] += var_a[j] * rows_a[j][r] * rows_a[j][c] + var_b[j] * rows_b[j][r] * rows_b[j][c]
    sxx = cov[0:2, 0:2]
    spx = cov[2:4, 0:2]
    spp = cov[2:4, 2:4]
    inv = sxx ** -1
    kappa = mp.matrix([K.real - mean[0], K.imag - mean[1]])
    cond_mean = mp.matrix([mean[2], mean[3]]) + spx * inv * kappa
    cond_cov = spp - spx * inv * spx.T
    expect = cond_mean[0] ** 2 + cond_mean[1] ** 2 + cond_cov[0, 0] + cond_cov[1, 1]
    det = mp.det(sxx)
    quad = (kappa.T * inv * kappa)[0]
    return expect * mp.exp(-quad / 2) / (2 * mp.pi * mp.sqrt(det))


def monomial(z, N):
    z = mp.mpc(z)
    return [z ** j for j in range(N + 1)], [j * z ** (j - 1) if j else mp.mpc(0) for j in range(N + 1)]


def prefix(f, df):
    n = len(f)
    return [sum(f[k:], mp.mpc(0)) for k in range(n)], [sum(df[k:], mp.mpc(0)) for k in range(n)]


def show(name, value):
    print(f"{name} = {mp.nstr(value, 20)}")


# Zero means, unequal variances.
f, df = monomial(mp.mpc("0.3", "0.4"), 2)
show("zero_mean_unequal", gaussian_density(f, df, [0] * 3, [1, 2, 3], [0] * 3, [2, 1, 2], mp.mpc(1, "0.5")))

# Nonzero means.
f, df = monomial(mp.mpc("0.7", "-0.2"), 3)
show("nonzero_mean",
     gaussian_density(f, df, [mp.mpf("0.5"), mp.mpf("-0.3"), mp.mpf("0.2"), mp.mpf("0.1")],
                      [1, 2, mp.mpf("0.5"), mp.mpf("1.5")],
                      [mp.mpf("0.4"), mp.mpf("0.1"), mp.mpf("-0.2"), mp.mpf("0.3")],
                      [mp.mpf("0.5"), 1, 2, 1], mp.mpc(1, "0.5")))

# Common mean 0.5, equal variances 1, N = 2, K = 0, z = 0.
f, df = monomial(mp.mpc(0), 2)
show("common_mean_origin", gaussian_density(f, df, [mp.mpf("0.5")] * 3, [1] * 3, [mp.mpf("0.5")] * 3, [1] * 3, mp.mpc(0)))

# Brownian observations at times 0.5, 1.5, 3.0: prefix sums of z^j, increment variances 0.5, 1, 1.5.
f, df = prefix(*monomial(mp.mpc("0.2", "0.1"), 2))
gaps = [mp.mpf("0.5"), 1, mp.mpf("1.5")]
show("brownian", gaussian_density(f, df, [0] * 3, gaps, [0] * 3, gaps, mp.mpc(0)))

# Weighted monomial, w = (1, 2, 0.5), zero means, var_a = 1.5, var_b = 0.5, K = -0.4 + 0.9i.
z = mp.mpc("-0.6", "0.8")
w = [1, 2, mp.mpf("0.5")]
f = [w[j] * z ** j for j in range(3)]
df = [w[j] * j * z ** (j - 1) if j else mp.mpc(0) for j in range(3)]
show("weighted", gaussian_density(f, df, [0] * 3, [mp.mpf("1.5")] * 3, [0] * 3, [mp.mpf("0.5")] * 3, mp.mpc("-0.4", "0.9")))


def kac2(y, x):
    f, df = monomial(mp.mpc(x, y), 2)
    return float(gaussian_density(f, df, [0] * 3, [1] * 3, [0] * 3, [1] * 3, mp.mpc(0)))


mp.mp.dps = 20
val, err = integrate.dblquad(kac2, -1, 1, -1, 1, epsabs=1e-11, epsrel=1e-11)
print(f"kac2_unit_square = {val:.15g} (+- {err:.1e})")
