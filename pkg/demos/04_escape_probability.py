"""
Escape probability against intensity
====================================

Sweeping the intensity and recording how often the origin's cluster
reaches the window boundary traces the finite-size signature of the
phase transition: near zero below the critical point, rising steeply
above it.
"""

from rcmperc import Gilbert, SimParams, percolation_verdict

model = Gilbert(radius=2.0)
params = SimParams(dim=2, gamma=0.0, system_size=60.0)
runs = 400

# full_runs finishes every trial instead of stopping at the first
# escape, so the escape count is a proper frequency
print(f"escape frequency out of {runs} runs, window radius {params.system_size}")
for gamma in (0.10, 0.20, 0.30, 0.35, 0.40, 0.50, 0.60):
    verdict = percolation_verdict(params, model, gamma, runs, master_seed=1729, full_runs=True)
    freq = verdict.escapes / verdict.runs
    bar = "#" * round(50 * freq)
    print(f"gamma={gamma:4.2f}  {verdict.escapes:4d}/{runs}  {freq:5.3f}  {bar}")

# the sharpening of this curve as the window grows is what the
# bracketing search exploits: one escape is enough to call a level
# percolating, so subcritical levels are cheap to rule out
