import os
import subprocess
import sys

import pytest

SNIPPET = """
import gencok
from gencok.catalog import catalog_get
from gencok.structures import classify_contact
t = catalog_get("su2_normal_contact_metric").payload
print(gencok.BACKEND, classify_contact(t.base).strong, classify_contact(t.gphi).strong)
"""


def run(backend):
    env = dict(os.environ, GENCOK_BACKEND=backend)
    return subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True)


def test_fraction_fallback_gives_same_answers():
    r = run("fraction")
    assert r.returncode == 0, r.stderr
    assert r.stdout.split() == ["fraction", "True", "False"]


def test_gmpy2_backend():
    pytest.importorskip("gmpy2")
    r = run("gmpy2")
    assert r.stdout.split() == ["gmpy2", "True", "False"]


def test_unknown_backend_fails_loudly():
    r = run("floats")
    assert r.returncode != 0 and "ImportError" in r.stderr
