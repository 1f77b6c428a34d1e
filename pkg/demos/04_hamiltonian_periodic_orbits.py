# Existence certificates for periodic solutions of dz/dt = J grad H(z):
# a nonzero degree of f(z) = -J z' - lambda grad H(z) on a loop-space ball
# proves a solution of period 2 pi lambda exists.

from eqdeg import (
    HamiltonianSpec,
    NearSingular,
    degree_jump,
    periodic_existence,
    quadratic_spectral_degree,
)
from eqdeg.errors import DegreeError

# H = |z|^2 / 2 on R^2: the linear benchmark with spectrum Z
H = HamiltonianSpec.from_terms(1, [((2, 0), 0.5), ((0, 2), 0.5)], lam=0.5)

print("== subcritical lambda = 1/2 ==")
cert = periodic_existence(H, radius=1.0)
print("degree:", cert.result.value)
print(cert.message)

print()
print("== lambda = 1 hits the mode-1 eigenvalue ==")
try:
    periodic_existence(HamiltonianSpec.from_terms(1, [((2, 0), 0.5), ((0, 2), 0.5)], 1.0), 1.0)
except DegreeError as exc:
    print(f"rejected ({type(exc).__name__}): the zero set meets every ball boundary")

print()
print("== the degree jumps across the crossing ==")
table = degree_jump(H, [0.5, 1.5], radius=1.0)
for lam, value in table.entries:
    print(f"lambda = {lam}: degree = {value}")
for jump in table.jumps:
    print(f"jump between {jump['from_lambda']} and {jump['to_lambda']}")

print()
print("== quadratic Hamiltonians have a spectral closed form ==")
S_coupled = HamiltonianSpec.from_terms(1, [((2, 0), 0.8), ((0, 2), 0.3), ((1, 1), 0.25)], 0.9)
pipeline = periodic_existence(S_coupled, 1.0).result.value
closed = quadratic_spectral_degree(S_coupled)
print("pipeline:", pipeline, " closed form:", closed, " equal:", pipeline == closed)

print()
print("== a nonlinear Hamiltonian ==")
quartic = HamiltonianSpec.from_terms(
    1, [((2, 0), 0.5), ((0, 2), 0.5), ((4, 0), 0.1)], lam=0.4
)
cert = periodic_existence(quartic, radius=0.8)
print("degree:", cert.result.value, " level:", cert.result.level)
print("tail bound:", f"{cert.result.tail_bound:.2e}", "< epsilon:", f"{cert.result.epsilon:.3f}")
print(cert.message)
