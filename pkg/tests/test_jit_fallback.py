"""The pure-numpy path (numba disabled) must agree with the compiled one."""

import json
import os
import subprocess
import sys

import numpy as np

from wptfair import NUMBA_ENABLED
from wptfair.simulator import SimConfig, run

SCRIPT = """
import json, sys
from wptfair import NUMBA_ENABLED
from wptfair.simulator import SimConfig, run
out = {"jit": NUMBA_ENABLED}
for alloc in ("crpm", "trpm", "epd", "lcrpm", "ltrpm"):
    tr = run(SimConfig(iterations=60, batch_size=20, allocator=alloc, seed=2))
    out[alloc] = tr.final_u.tolist()
json.dump(out, sys.stdout)
"""


def test_numpy_fallback_agrees():
    env = dict(os.environ, WPTFAIR_DISABLE_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True,
                         text=True, check=True, timeout=600)
    ref = json.loads(res.stdout)
    assert ref.pop("jit") is False
    for alloc, u in ref.items():
        tr = run(SimConfig(iterations=60, batch_size=20, allocator=alloc, seed=2))
        np.testing.assert_allclose(tr.final_u, u, rtol=1e-9, atol=1e-15)


def test_flag_read_in_this_process():
    assert NUMBA_ENABLED == (os.environ.get("WPTFAIR_DISABLE_NUMBA", "") == "")
