"""Dev calibration: blind deconvolution and GMM end-to-end at N=5e5."""
import sys
import time
import numpy as np

from otd import (
    AttemptsExhausted, DeconvolutionConfig, NoiseSpec, blind_deconvolve,
    estimate_gmm, gen_mixture, match_components, sample_mixture,
)

N = 500_000


def run_deconv(d, seed, kind, eps, attempts):
    truth = gen_mixture(d, seed=seed, weight_floor=min(0.19, 0.9 / d), norm_range=(0.8, 1.5), tau=20.0)
    std = 0.2
    if kind == "uniform":
        noise = NoiseSpec.uniform_box(np.full(d, std * np.sqrt(3.0)))
    else:
        noise = NoiseSpec.laplace(np.full(d, std / np.sqrt(2.0)))
    samples = sample_mixture(truth, noise, N, seed=seed + 50)
    cfg = DeconvolutionConfig(rho_max=1.6, seed=seed + 90, epsilon=eps,
                              w_min=0.15, tau=20.0, max_attempts=attempts)
    t0 = time.time()
    try:
        est, diag = blind_deconvolve(samples, cfg)
    except AttemptsExhausted as exc:
        print(f"  d={d} seed={seed} {kind}: EXHAUSTED best={exc.best_residual:.3e} t={time.time()-t0:.0f}s")
        return None
    rep = match_components(truth.means, est.means)
    w_err = np.max(np.abs(truth.weights[rep.permutation] - est.weights))
    print(f"  d={d} seed={seed} {kind}: w_err={w_err:.4f} mu_err={rep.max_error:.4f} "
          f"resid={diag['residual_frobenius']:.3e} attempts={diag['attempts_used']} t={time.time()-t0:.0f}s")
    return w_err, rep.max_error


def run_gmm(d, seed, eps, attempts):
    rng = np.random.default_rng(seed + 777)
    truth = gen_mixture(d, seed=seed, weight_floor=min(0.19, 0.9 / d), norm_range=(0.8, 1.5), tau=20.0)
    evals = np.array([0.04, 0.09, 0.01][:d] if d <= 3 else [0.04, 0.09, 0.01, 0.06])
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    sigma = (q * evals) @ q.T
    samples = sample_mixture(truth, NoiseSpec.gaussian(sigma), N, seed=seed + 50)
    cfg = DeconvolutionConfig(rho_max=1.6, seed=seed + 90, epsilon=eps,
                              w_min=0.15, tau=20.0, max_attempts=attempts)
    t0 = time.time()
    try:
        est, diag = estimate_gmm(samples, cfg)
    except AttemptsExhausted as exc:
        print(f"  gmm d={d} seed={seed}: EXHAUSTED best={exc.best_residual:.3e} t={time.time()-t0:.0f}s")
        return None
    rel = np.linalg.norm(est.covariance - sigma) / np.linalg.norm(sigma)
    rep = match_components(truth.means, est.mixture.means)
    raw = np.asarray(diag["covariance_raw"])
    rel_raw = np.linalg.norm(raw - sigma) / np.linalg.norm(sigma)
    print(f"  gmm d={d} seed={seed}: rel_psd={rel:.3f} rel_raw={rel_raw:.3f} mu_err={rep.max_error:.4f} t={time.time()-t0:.0f}s")
    return rel


mode = sys.argv[1] if len(sys.argv) > 1 else "deconv"
eps = float(sys.argv[2]) if len(sys.argv) > 2 else 0.02
attempts = int(sys.argv[3]) if len(sys.argv) > 3 else 60000

if mode == "deconv":
    for d, kind in ((3, "uniform"), (4, "laplace")):
        for seed in range(1, 6):
            run_deconv(d, seed, kind, eps, attempts)
elif mode == "deconv5":
    for d, kind in ((5, "uniform"), (6, "laplace")):
        for seed in range(1, 6):
            run_deconv(d, seed, kind, eps, attempts)
else:
    for seed in range(1, 6):
        run_gmm(3, seed, eps, attempts)
