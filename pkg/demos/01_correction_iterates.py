"""Walk through the correction-functional iteration term by term.

The radial deposition equation

    r^2 w'' - r w' = w^2/2 + lam r^4/2

is solved by repeatedly adding the kernel-weighted equation defect to the
current polynomial guess.  Starting from w0 = a r^2 the first two iterates
have tidy closed forms; this script prints them and checks a few of the
famous coefficients (1/24, 1/18, 1/720, 1/64512).
"""

import numpy as np

from epibvp import (
    RPoly,
    VimProblem,
    apply_vim_kernel,
    iterate,
    ode_defect,
    symbolic_iterate,
    vim_step,
)

a, lam = 1.0, 0.0
w0 = RPoly([0.0, 0.0, a])

print("start:            w0 =", w0.coeffs.tolist())
defect = ode_defect(w0, lam)
print("equation defect:  F(w0) =", defect.coeffs.tolist(),
      "   (the linear operator annihilates r^2, leaving -(a^2+lam)/2 r^4)")
correction = apply_vim_kernel(defect)
print("kernel output:    K[F] =", correction.coeffs.tolist(),
      "   (monomial rule t^k -> -r^k / (k(k-1)))")

w1 = vim_step(w0, lam)
print("\nfirst iterate:    w1 =", w1.coeffs.tolist())
print("                  r^4 coefficient is (a^2+lam)/24 =", (a * a + lam) / 24)

w2 = iterate(VimProblem(lam=lam, a=a, n_iter=2))
print("\nsecond iterate:   w2 =", w2.coeffs.tolist())
print("                  expected [0, 0, 1, 0, 1/18, 0, 1/720, 0, 1/64512]")

print("\nsymbolic mode keeps a and lam as symbols;")
print("terms of the second iterate as (a_pow, lam_pow, r_pow) -> coeff:")
for key in sorted(symbolic_iterate(2).terms):
    print(f"   {key}: {symbolic_iterate(2).terms[key]:.12g}")

print("\nspecialising the symbols reproduces the numeric path exactly:")
spec = symbolic_iterate(2).specialize(2.0, 5.0)
num = iterate(VimProblem(lam=5.0, a=2.0, n_iter=2))
print("   max coefficient difference:",
      float(np.max(np.abs(spec.coeffs - num.coeffs))))
