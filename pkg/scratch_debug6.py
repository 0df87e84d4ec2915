"""Dev: why does the mixture validator reject the true branch?"""
import numpy as np

from otd import (
    AttemptsExhausted, DeconvolutionConfig, NoiseSpec, blind_deconvolve,
    gen_mixture, sample_mixture, k3_fast, center, ComponentMatrix,
    DecompositionConfig, decompose, decouple,
)
from otd.exceptions import NonPositiveSingularVector, RankTooLow

N = 500_000
d, seed = 5, 2
truth = gen_mixture(d, seed=seed, weight_floor=0.19, norm_range=(0.8, 1.5), tau=20.0)
noise = NoiseSpec.uniform_box(np.full(d, 0.2 * np.sqrt(3.0)))
samples = sample_mixture(truth, noise, N, seed=seed + 50)
cumulant = k3_fast(center(samples))

inner = DecompositionConfig(epsilon=0.02, rank_n=d, overcompleteness_k=1,
                            norm_bound_M=1.6, seed=seed + 90, max_attempts=60000)
res = decompose(cumulant, inner)  # no validator
print("accepted at", res.attempts_used, "resid", res.residual_frobenius)
print("xi:", res.scales_xi)
try:
    w, mc = decouple(res.components, res.scales_xi)
    print("weights:", w)
    print("rho:", mc.column_norms())
    print("min w check (>= 0.075):", np.min(w) >= 0.075)
    print("rho check (<= 2.0):", np.max(mc.column_norms()) <= 2.0)
except (NonPositiveSingularVector, RankTooLow) as exc:
    print("decouple failed:", type(exc).__name__, exc)
