"""Numba and fallback modes must agree to rounding."""

import json
import os
import subprocess
import sys

import numpy as np

import dirgeo
from dirgeo.families import family
from dirgeo.geodesics import geodesic_ivp
from dirgeo.geometry import metric
from dirgeo.families import superadditive_gap

_PROBE = """
import json
import numpy as np
import dirgeo
from dirgeo.families import family
from dirgeo.geodesics import geodesic_ivp
from dirgeo.geometry import metric
from dirgeo.families import superadditive_gap

mf = family("trigamma")
path = geodesic_ivp(mf, [1.0, 2.0], [0.4, -0.3], 3.0, samples=5)
print(json.dumps({
    "numba": dirgeo.NUMBA_ENABLED,
    "endpoint": path.points[-1].tolist(),
    "metric": metric(mf, np.array([0.7, 1.9])).tolist(),
    "gap": superadditive_gap(mf, np.array([5.0, 1e-9])),
}))
"""


def _probe(disable):
    env = dict(os.environ)
    env["DIRGEO_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run(
        [sys.executable, "-c", _PROBE],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def test_fallback_mode_matches_numba():
    fast = _probe(disable=False)
    slow = _probe(disable=True)
    assert fast["numba"] is True
    assert slow["numba"] is False
    assert np.allclose(slow["endpoint"], fast["endpoint"], rtol=1e-12)
    assert np.allclose(slow["metric"], fast["metric"], rtol=1e-12)
    assert slow["gap"] == fast["gap"]


def test_in_process_values_match_subprocess():
    # Guards against import-order effects: the running process (numba on,
    # unless the suite itself was launched with the flag) must agree with
    # a fresh interpreter.
    ref = _probe(disable=not dirgeo.NUMBA_ENABLED)
    mf = family("trigamma")
    path = geodesic_ivp(mf, [1.0, 2.0], [0.4, -0.3], 3.0, samples=5)
    assert np.allclose(path.points[-1], ref["endpoint"], rtol=1e-12)
    g = metric(mf, np.array([0.7, 1.9]))
    assert np.allclose(g, ref["metric"], rtol=1e-12)
    assert superadditive_gap(mf, np.array([5.0, 1e-9])) == ref["gap"]
