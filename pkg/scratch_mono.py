"""Dev check: noise monotonicity with coupled attempt streams."""
import numpy as np

from otd import (
    ComponentMatrix, DecompositionConfig, decompose, from_components,
    match_components, perturb_tensor,
)


def build_instance(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((6, 6))
    a /= np.linalg.norm(a, axis=0)[None, :]
    s = a.sum(axis=1)
    a7 = -s / np.linalg.norm(s)
    comp = ComponentMatrix(np.column_stack([a, a7]))
    return comp, from_components(comp)


for trial in range(3):
    errs = {}
    for eps_in in (1e-6, 1e-3):
        errors = []
        for seed in range(5):
            truth, tensor = build_instance(seed + 100 * trial)
            noisy = perturb_tensor(tensor, eps_in, seed=7000 + seed)
            cfg = DecompositionConfig(epsilon=max(0.05, 400 * eps_in),
                                      rank_n=7, overcompleteness_k=1,
                                      norm_bound_M=1.0, seed=seed, max_attempts=20000)
            res = decompose(noisy, cfg)
            errors.append(match_components(truth, res.components).max_error)
        errs[eps_in] = np.median(errors)
        print(f" trial {trial} eps_in={eps_in:.0e}: median={np.median(errors):.4e} errors={['%.3e' % e for e in errors]}")
    print(f" trial {trial}: monotone={errs[1e-6] < errs[1e-3]}")
