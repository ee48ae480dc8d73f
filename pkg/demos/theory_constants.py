"""
Power integrals behind the jump-bias constants
==============================================

chi(beta) = int_0^inf (1 - cos x) / x**(1+beta) dx on (0, 2)
chi'(beta) = int_0^inf sin x / x**beta dx            on (1, 3)

Both reduce to Gamma-function closed forms; chi(1) = chi'(2) = pi/2, and
chi(beta) = beta * chi'(beta + 1) ties the two families together.
"""

import math

import numpy as np

from charvol.theory import cosine_power_integral, jump_bias_cf, sine_power_integral

print(f"{'beta':>5}{'chi':>12}{'chi_prime':>12}")
for beta in (0.5, 1.0, 1.25, 1.5, 1.75, 1.9):
    chi = sine_power_integral(beta)
    chip = cosine_power_integral(beta) if beta > 1.0 else float("nan")
    print(f"{beta:>5.2f}{chi:>12.6f}{chip:>12.6f}")

print()
print(f"chi(1)  - pi/2 = {sine_power_integral(1.0) - math.pi / 2:+.2e}")
print(f"chi'(2) - pi/2 = {cosine_power_integral(2.0) - math.pi / 2:+.2e}")
for beta in (1.1, 1.5, 1.9):
    lhs = abs(sine_power_integral(beta))
    rhs = beta * cosine_power_integral(beta + 1.0)
    print(f"|chi({beta})| - {beta}*chi'({beta}+1) = {lhs - rhs:+.2e}")

# the bias shrinks like delta**(1 - beta/2): slowly when beta is near 2
print()
print(f"{'delta':>10}{'bias beta=1.25':>16}{'bias beta=1.75':>16}")
for delta in (1.0 / 390, 1.0 / 2400, 1.0 / 4800, 1.0 / 23400):
    b125 = jump_bias_cf(2.0, 1.25, 1.0, delta, 1.0).symmetrized
    b175 = jump_bias_cf(2.0, 1.75, 1.0, delta, 1.0).symmetrized
    print(f"{delta:>10.2e}{b125:>16.6f}{b175:>16.6f}")
