"""Independent high-precision reference values frozen into the C++ tests.

Every number here is computed with mpmath by a route that does not share code
or algebra with the C++ implementation: roots by mpmath.findroot, integrals by
mpmath.quad, and protocol probabilities by direct integration over the heralded
position density instead of the closed-form envelope.

Run:  python3 tests/oracles/golden_values.py
"""
import mpmath as mp

mp.mp.dps = 40

HBAR = mp.mpf("1.054571817e-34")
KB = mp.mpf("1.380649e-23")
G = mp.mpf("6.67430e-11")
AMU = mp.mpf("1.66053907e-27")
M_A = mp.mpf("26.9815") * AMU
OMEGA_P = 2 * mp.pi * mp.mpf("3e12")


def clamped_root():
    f = lambda x: mp.cos(x / 2) * mp.sinh(x / 2) + mp.cosh(x / 2) * mp.sin(x / 2)
    return mp.findroot(f, 4.73)


def beta0(kl):
    c, ch = mp.cos(kl / 2), mp.cosh(kl / 2)
    norm = mp.sqrt(c * c + ch * ch)
    u = lambda z: -mp.sqrt(2) * (c * mp.cosh(kl * z) - ch * mp.cos(kl * z)) / norm
    return mp.quad(u, [-0.5, 0, 0.5]), mp.quad(lambda z: u(z) ** 2, [-0.5, 0, 0.5])


def gamma1(x):
    x = mp.mpf(x)
    return 2 / x**2 * (mp.exp(-x * x / 2) - 1 + mp.sqrt(mp.pi / 2) * x * mp.erf(x / mp.sqrt(2)))


def heralded_cos(beta, alpha, nbar):
    """<cos(beta x)> over the cos^2(alpha x)-weighted thermal Gaussian."""
    v = 2 * nbar + 1
    w = lambda x: mp.cos(alpha * x) ** 2 * mp.exp(-x * x / (2 * v))
    lim = 12 * mp.sqrt(v)
    num = mp.quad(lambda x: mp.cos(beta * x) * w(x), mp.linspace(-lim, lim, 200))
    den = mp.quad(w, mp.linspace(-lim, lim, 200))
    return num / den


def probability(alpha, nbar, k, omega, gamma, d_dimless):
    """P(k, D) from direct integration; noise strength on x is 2*D (see docs)."""
    t = k * mp.pi / omega
    var = 2 * d_dimless * mp.quad(
        lambda s: mp.exp(gamma * s) * mp.sin(omega * (t - s)) ** 2,
        [t * j / (4 * k) for j in range(4 * k + 1)] if k > 0 else [0, 0])
    shrink = mp.exp(-gamma * t / 2)
    beta = 2 * alpha * shrink
    return mp.mpf(1) / 2 + heralded_cos(beta, alpha, nbar) * mp.exp(-beta**2 * var / 2) / 2


if __name__ == "__main__":
    kl = clamped_root()
    b0, norm = beta0(kl)
    print("k_ell", mp.nstr(kl, 17))
    print("freq prefactor (k_ell)^2/sqrt(12)", mp.nstr(kl**2 / mp.sqrt(12), 17))
    print("beta0", mp.nstr(b0, 17), "norm", mp.nstr(norm, 17))
    print("single-atom zpa", mp.nstr(mp.sqrt(HBAR / (2 * M_A * OMEGA_P)), 17))
    for x in ["1e-3", "0.05", "0.1", "1", "7.0710678118654752", "10", "100"]:
        print("gamma1", x, mp.nstr(gamma1(x), 17))
    print("gamma1 series x^4 coefficient", mp.nstr(mp.taylor(lambda x: gamma1(x) if x != 0 else 1, 0, 4)[4], 17))
    print("heralding(nbar=0, alpha=1)", mp.nstr((1 + mp.exp(-2)) / 2, 17))
    # Protocol probabilities at a dissipative, diffusive point (both devices' Q).
    omega, q = mp.mpf(1000), mp.mpf("1.1e6")
    for (alpha, nbar, k, d) in [(1, 0, 1, 0), (1, 3, 3, 50), (mp.mpf("0.5"), 10, 5, 200)]:
        p = probability(mp.mpf(alpha), nbar, k, omega, omega / q, mp.mpf(d))
        print("P", alpha, nbar, k, d, mp.nstr(p, 17))
    # Strongly damped point exercising the envelope's decay direction.
    omega, gamma = mp.mpf(1), mp.mpf("0.2")
    for (alpha, nbar, k, d) in [(mp.mpf("0.7"), 1, 2, 0), (mp.mpf("0.7"), 1, 2, mp.mpf("0.05")), (mp.mpf("0.3"), 2, 7, mp.mpf("0.01"))]:
        p = probability(alpha, nbar, k, omega, gamma, d)
        print("P damped", alpha, nbar, k, d, mp.nstr(p, 17))
