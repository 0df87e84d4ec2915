"""Dev calibration: end-to-end decompose() on the d=6,n=7 instance."""
import time
import numpy as np

from otd import (
    AttemptsExhausted, ComponentMatrix, DecompositionConfig, decompose,
    from_components, match_components, perturb_tensor,
)


def build_instance(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((6, 6))
    a /= np.linalg.norm(a, axis=0)[None, :]
    s = a.sum(axis=1)
    a7 = -s / np.linalg.norm(s)
    comp = ComponentMatrix(np.column_stack([a, a7]))
    return comp, from_components(comp)


for eps in [0.05, 0.1, 0.2]:
    print(f"--- epsilon = {eps}")
    for seed in range(5):
        truth, tensor = build_instance(seed)
        cfg = DecompositionConfig(epsilon=eps, rank_n=7, overcompleteness_k=1,
                                  norm_bound_M=1.0, seed=seed, max_attempts=10000)
        t0 = time.time()
        try:
            res = decompose(tensor, cfg)
            err = match_components(truth, res.components).max_error
            print(f"  seed {seed}: attempts={res.attempts_used:5d} resid={res.residual_frobenius:.3e} err={err:.3e} t={time.time()-t0:.1f}s")
        except AttemptsExhausted as exc:
            print(f"  seed {seed}: EXHAUSTED best={exc.best_residual:.3e} t={time.time()-t0:.1f}s counts={exc.failure_counts}")
