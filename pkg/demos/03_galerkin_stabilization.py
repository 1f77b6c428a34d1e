# The truncation pipeline: restrict f = Ax - F(x) to the cumulative
# eigenspaces V_n, correct by the inverted shell degrees m_n, and watch the
# corrected value stay put while the raw truncated degree keeps changing.

from eqdeg import (
    LocalMapSpec,
    RegionSpec,
    certify_margin,
    correction_factor,
    deg_infinite,
    grad_degree,
    loop_operator,
    normalization_map,
    scalar_nonlinearity,
    shell_field,
)

op = loop_operator(1)  # spectrum Z, kernel R^2, one mode-k plane per eigenvalue +-k
f = LocalMapSpec(op, scalar_nonlinearity(0.5), RegionSpec.ball(1.0), name="A - id/2")

print("== margin certification ==")
for n in (1, 2, 3):
    eps, tail = certify_margin(f, n)
    print(f"level {n}: epsilon = {eps:.4f}, tail bound = {tail:.2e}")

print()
print("== raw versus corrected truncated degrees ==")
for n in (1, 2, 3, 4):
    raw = grad_degree(shell_field(f, n))
    corrected = correction_factor(op, n) * raw
    print(f"n = {n}:  deg(f_n) = {raw}")
    print(f"        m_n * deg(f_n) = {corrected}")

print()
print("== the stabilized result ==")
res = deg_infinite(f, stabilization_depth=2)
print("value:", res.value)
print("level:", res.level, " epsilon:", f"{res.epsilon:.4f}", " tail:", f"{res.tail_bound:.2e}")
print("stabilization evidence:", [str(v) for v in res.stabilization])
print("limit class: level", res.limit_class.level, "representative", res.limit_class.value)

print()
print("== normalization: A + P0 always has degree one ==")
print(deg_infinite(normalization_map(op)).value)

print()
print("== domain independence ==")
small = deg_infinite(f.with_region(RegionSpec.ball(0.6))).value
large = deg_infinite(f.with_region(RegionSpec.ball(2.5))).value
print("radius 0.6:", small, " radius 2.5:", large, " equal:", small == large)
