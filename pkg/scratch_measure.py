"""Dev measurement: residual vs probe leakage for the d=6, n=7 instance."""
import numpy as np

from otd import (
    ComponentMatrix, DecompositionConfig, JennrichConfig, contract, deflate,
    diagonalize, estimate_scales, from_components, frobenius_distance,
)
from otd.decompose import _unit_probe


def build_instance(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((6, 6))
    a /= np.linalg.norm(a, axis=0)[None, :]
    s = a.sum(axis=1)
    a7 = -s / np.linalg.norm(s)
    cols = np.column_stack([a, a7])
    comp = ComponentMatrix(cols)
    return comp, from_components(comp)


def forced_attempt(tensor, truth, theta, rng):
    """Run one attempt with probes forced to leakage exactly theta onto a7."""
    a7 = truth.matrix[:, 6]
    d = tensor.dim

    def probe():
        z = rng.standard_normal(d)
        z -= (z @ a7) * a7
        z /= np.linalg.norm(z)
        v = z + theta * a7  # |<v, a7>| = theta up to normalization
        return v / np.linalg.norm(v)

    x, y = probe(), probe()
    first = diagonalize(contract(tensor, x), contract(tensor, y), JennrichConfig(rank=6))
    xi1 = estimate_scales(tensor, x, first)
    resid_t = deflate(tensor, first, xi1)
    x2, y2 = _unit_probe(rng, d), _unit_probe(rng, d)
    second = diagonalize(contract(resid_t, x2), contract(resid_t, y2), JennrichConfig(rank=1))
    xi2 = estimate_scales(resid_t, x2, second)
    allc = ComponentMatrix(np.hstack([first.matrix, second.matrix]))
    xi = np.concatenate([xi1, xi2])
    rec = from_components(allc, xi)
    resid = frobenius_distance(rec, tensor)
    # matched component error
    est = ComponentMatrix(allc.matrix * np.cbrt(xi)[None, :])
    from otd import match_components
    err = match_components(truth, est).max_error
    return resid, err


truth, tensor = build_instance(0)
rng = np.random.default_rng(123)
print(f"{'theta':>10} {'residual':>12} {'comp_err':>12}")
for theta in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 0.0]:
    rs, es = [], []
    for _ in range(5):
        try:
            r, e = forced_attempt(tensor, truth, theta, rng)
            rs.append(r); es.append(e)
        except Exception as exc:
            print(f"  fail at theta={theta}: {type(exc).__name__}")
    if rs:
        print(f"{theta:>10.1e} {np.median(rs):>12.3e} {np.median(es):>12.3e}")
