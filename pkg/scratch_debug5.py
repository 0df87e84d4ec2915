"""Dev: inspect the early-accept wrong-branch failure at d=5."""
import numpy as np

from otd import (
    DeconvolutionConfig, NoiseSpec, blind_deconvolve, gen_mixture,
    match_components, sample_mixture, k3_fast, center, from_components,
    frobenius_distance, ComponentMatrix,
)

N = 500_000
for seed in (1, 3):
    d = 5
    truth = gen_mixture(d, seed=seed, weight_floor=0.19, norm_range=(0.8, 1.5), tau=20.0)
    noise = NoiseSpec.uniform_box(np.full(d, 0.2 * np.sqrt(3.0)))
    samples = sample_mixture(truth, noise, N, seed=seed + 50)
    cumulant = k3_fast(center(samples))
    target = from_components(truth.means, truth.weights)
    floor = frobenius_distance(cumulant, target)
    print(f"seed {seed}: ||T~ - T_true||_F = {floor:.4e}  ||T~|| = {cumulant.frobenius_norm():.4e}")
    cfg = DeconvolutionConfig(rho_max=1.6, seed=seed + 90, epsilon=0.02,
                              w_min=0.15, tau=20.0, max_attempts=60000)
    est, diag = blind_deconvolve(samples, cfg)
    rep = match_components(truth.means, est.means)
    print(f"  accepted residual {diag['residual_frobenius']:.4e} attempts {diag['attempts_used']}")
    print(f"  mu errors {['%.3f' % e for e in rep.per_component_error]}")
    print(f"  w true   {['%.3f' % w for w in truth.weights[rep.permutation]]}")
    print(f"  w est    {['%.3f' % w for w in est.weights]}")
    print(f"  xi       {['%.3f' % x for x in diag['xi']]}")
    print(f"  sum w~mu~ (centered) = {diag['weighted_mean_norm_centered']:.3e}")
    # distance of estimated decomposition to the noisy tensor vs truth-fit
    est_c = ComponentMatrix(np.column_stack(diag['means_centered']))
    recon = from_components(est_c, est.weights)
    print(f"  ||recon(est) - T~|| = {frobenius_distance(recon, cumulant):.4e}")
