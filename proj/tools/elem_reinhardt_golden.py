"""Reference values for the elementary Reinhardt table, computed directly
from the closed forms with mpmath. Independent of the C++ code: the
normalization (C -> 0, alpha -> coprime integers or min positive entry 1)
is done by hand per case.

Run: python3 tools/elem_reinhardt_golden.py
"""

from mpmath import mp, mpf, mpc, sqrt, exp, log, fabs

mp.dps = 40


def gamma_disc(z, x):
    return fabs(x) / (1 - fabs(z) ** 2)


def kappa_punctured(z, x):
    z = fabs(z)
    return fabs(x) / (2 * z * log(1 / z))


def modpow(a, alpha):
    out = mpf(1)
    for aj, al in zip(a, alpha):
        out *= fabs(aj) ** al
    return out


def linear(alpha, a, x):
    return sum(al * xj / aj for al, aj, xj in zip(alpha, a, x))


cases = []

# Rational, l < n, s = n. alpha = (1, 3/2) ~ (2, 3) with C' = 2 C; t_l = 2.
alpha, c, a, x = (mpf(1), mpf(3) / 2), mpf("0.3"), (mpf("0.5"), mpf("0.6")), (mpc(1), mpc("-0.5", "0.2"))
norm = (2, 3)
w = modpow(a, norm) * exp(-2 * c)
L = linear(norm, a, x)
cases.append(("gamma", w * fabs(L) / (1 - w * w), "eta"))
t = 2
cases.append(("kappa", gamma_disc(w ** (mpf(1) / t), w ** (mpf(1) / t) * L / t), "eta"))

# Rational, l < n, s = n - 1: alpha = (-1, 2), a = (2, 0). Phi_1(a) = 0, r = 2.
cases.append(("gamma", mpf(0), "eta"))
cases.append(("kappa", sqrt(fabs(mpf(2)) ** -1 * fabs(mpc("0.7", "-0.1")) ** 2), "eta"))

# Rational, l = n: alpha = (-1, -2), a = (2, 1), X = (0.3, 0.1i).
alpha, a, x = (-1, -2), (mpf(2), mpf(1)), (mpc("0.3"), mpc(0, "0.1"))
w = modpow(a, alpha)
L = linear(alpha, a, x)
cases.append(("gamma", gamma_disc(w, w * L), "eta"))
cases.append(("kappa", kappa_punctured(w, w * L), "eta"))

# Irrational, l < n, s = n: alpha = (1, sqrt 2), t_l = 1 already.
alpha, a, x = (mpf(1), sqrt(2)), (mpf("0.3"), mpf("0.4")), (mpc("0.2", "0.1"), mpc("-1"))
w = modpow(a, alpha)
cases.append(("gamma", mpf(0), "eta"))
cases.append(("kappa", gamma_disc(w, w * linear(alpha, a, x)), "eta"))

# Irrational, l < n, s = 1 < n - 1: alpha = (1, sqrt 2, 1), a = (0.5, 0, 0).
alpha, x = (mpf(1), sqrt(2), mpf(1)), (mpc("0.4"), mpc("0.3", "0.3"), mpc("-0.6"))
r = alpha[1] + alpha[2]
cases.append(("gamma", mpf(0), "zero"))
cases.append(("kappa", (mpf("0.5") * fabs(x[1]) ** alpha[1] * fabs(x[2])) ** (1 / r), "zero"))

# Irrational, l = n: alpha = (-1, -sqrt 2), a = (2, 1.5), X = (1, 0.5 - 0.5i).
alpha, a, x = (mpf(-1), -sqrt(2)), (mpf(2), mpf("1.5")), (mpc(1), mpc("0.5", "-0.5"))
w = modpow(a, alpha)
cases.append(("gamma", mpf(0), "eta"))
cases.append(("kappa", kappa_punctured(w, w * linear(alpha, a, x)), "eta"))

for i, (kind, value, hat) in enumerate(cases, 1):
    print(f"{i:2d} {kind:6s} {mp.nstr(value, 20):>26s} hat={hat}")
