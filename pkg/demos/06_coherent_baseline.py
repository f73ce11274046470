"""The coherent-state comparison amplifier, the device this one descends from.

With a correct guess the comparison arm is exactly dark and the survivor is
the amplified coherent state; with the opposite guess the detector fires
with high probability and, at 50:50, whatever survives a dark detector is
exact vacuum, which the subtraction stage then filters out entirely.  Run
from the repository root:

    python3 demos/06_coherent_baseline.py
"""

import math

from catscamp import PipelineConfig, run_coherent_scamp
from catscamp.pipeline import T2_99

cfg = PipelineConfig(alpha=1.0, t2=T2_99, engine="both")

correct = run_coherent_scamp(1.0, +1, cfg)
print("correct guess (amplitude +t1 a / r1):")
print(f"  P(comparison dark)   = {correct.p_noclick_stage1:.12f}")
print(f"  P(subtraction click) = {correct.p_click_stage2:.6f}")
print(f"  nominal output       = |{correct.nominal_amplitude:.4f}>  "
      f"(amplitude gain {correct.nominal_amplitude:.4f} = sqrt(2))")
print(f"  fidelity with it     = {correct.fidelity_nominal:.6f}")

wrong = run_coherent_scamp(1.0, -1, PipelineConfig(alpha=1.0, t2=T2_99, engine="chi"))
print("\nopposite guess (amplitude -t1 a / r1):")
print(f"  P(comparison dark)   = {wrong.p_noclick_stage1:.6f}   "
      f"(exp(-2) = {math.exp(-2):.6f}: the leak is 2 t1 a)")
print(f"  P(subtraction click) = {wrong.p_click_stage2:.1f}   "
      f"(the 50:50 survivor is vacuum; nothing can click)")

print("\nSo postselecting on dark-then-click passes only correctly amplified")
print("states; the cat version inherits this two-stage herald unchanged.")
