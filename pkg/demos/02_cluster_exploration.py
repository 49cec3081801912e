"""
Anatomy of one cluster exploration
==================================

The simulator grows the cluster of a point at the origin lazily: it
draws fresh Poisson points only inside the connection ball of the point
being processed, thinned against the region already covered, so no
points outside the cluster's reach are ever materialized. A run ends
when the cluster is exhausted (contained) or a point lands outside the
observation window (escaped).
"""

from rcmperc import Gilbert, SimParams, explore_cluster, trial_stream

model = Gilbert(radius=2.0)

# one exploration per intensity, all from the same master seed
for gamma in (0.05, 0.20, 0.34, 0.50):
    params = SimParams(
        dim=2,
        gamma=gamma,
        system_size=40.0,
        max_steps=100_000,
        max_generated_points=1_000_000,
    )
    rng = trial_stream(1729, eval_index=0, trial_index=0)
    out = explore_cluster(params, model, rng)
    status = "ESCAPED " if out.escaped else "contained"
    print(
        f"gamma={gamma:5.2f}  {status}  cluster={out.cluster_size:5d}"
        f"  generated={out.generated_points:6d}  steps={out.steps:5d}"
        f"  max|x|={out.max_norm:7.3f}"
    )

# near the percolation point the cluster size explodes; an escaped run
# stops early, so its step count is below its cluster size

print()
print("the same seed always reproduces the same trajectory:")
params = SimParams(dim=2, gamma=0.3, system_size=40.0)
a = explore_cluster(params, model, trial_stream(1729, 0, 7))
b = explore_cluster(params, model, trial_stream(1729, 0, 7))
print(f"run A: cluster={a.cluster_size}, max|x|={a.max_norm!r}")
print(f"run B: cluster={b.cluster_size}, max|x|={b.max_norm!r}")
print(f"identical: {a == b}")
