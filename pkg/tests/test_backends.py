"""The numba kernels and the numpy fallback must agree."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from princerank import _kernels as K
from princerank.core import DEFAULT_PARAMS

from conftest import random_discrete_structure, random_structure

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")

SCRIPT = """
import json
from princerank import BACKEND
from princerank.corpus import corpus_get, corpus_ids
from princerank.scenarios import materialize
from princerank.valuation import princerank
out = {"backend": BACKEND}
for cid in corpus_ids():
    doc = corpus_get(cid)
    out[cid] = princerank(materialize(doc), doc.params).tolist()
print(json.dumps(out))
"""


def corpus_values(disable: bool) -> dict:
    env = dict(os.environ)
    env["PRINCERANK_DISABLE_NUMBA"] = "1" if disable else "0"
    res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


@needs_numba
def test_env_flag_switches_backend_and_values_agree():
    fast, slow = corpus_values(False), corpus_values(True)
    assert (fast.pop("backend"), slow.pop("backend")) == ("numba", "numpy")
    for cid in fast:
        np.testing.assert_allclose(fast[cid], slow[cid], rtol=0, atol=1e-9, err_msg=cid)


@needs_numba
def test_kernels_agree_directly(rng):
    p = DEFAULT_PARAMS
    for _ in range(50):
        n = int(rng.integers(1, 6))
        ps = random_structure(rng, n)
        W_np = K.weighted_matrix_np(ps.tactics, p.beta, p.mu, p.lambda_)
        W_nb = K._weighted_matrix_loop(np.ascontiguousarray(ps.tactics), p.beta, p.mu, p.lambda_)
        np.testing.assert_allclose(W_np, W_nb, atol=1e-15)
        np.testing.assert_allclose(K.step_np(W_np, ps.sizes), K._step_loop(W_np, ps.sizes.copy()), atol=1e-12)
        np.testing.assert_allclose(K.utility_np(ps.sizes, 2.25), K._utility_loop(ps.sizes.copy(), 2.25), rtol=1e-12)
    for _ in range(20):
        ps = random_discrete_structure(rng, int(rng.integers(1, 5)))
        W = K.weighted_matrix_np(ps.tactics, p.beta, p.mu, p.lambda_)
        args = (W, ps.sizes.copy(), p.alpha, p.delta, p.discount_ratio, 1e-9, 10_000, 0)
        a, b = K.discounted_np(*args), K._discounted_loop(*args)
        np.testing.assert_allclose(a[0], b[0], atol=1e-9)
        assert a[1] == b[1] and a[3] == b[3]


def test_active_backend_reported():
    import princerank

    assert princerank.BACKEND in ("numba", "numpy")
