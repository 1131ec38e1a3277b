"""Rational number backend, chosen once at import time.

``gmpy2.mpq`` (GMP-backed, compiled) is used when importable; otherwise the
pure-Python ``fractions.Fraction``.  Set ``GENCOK_BACKEND=fraction`` to force
the fallback or ``GENCOK_BACKEND=gmpy2`` to require the compiled one.
"""

import os

_requested = os.environ.get("GENCOK_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "gmpy2", "fraction"):
    raise ImportError(f"unknown GENCOK_BACKEND {_requested!r}")

Rational = None
NAME = "fraction"

if _requested in ("auto", "gmpy2"):
    try:
        from gmpy2 import mpq as Rational  # type: ignore[no-redef]

        NAME = "gmpy2"
    except ImportError:
        if _requested == "gmpy2":
            raise

if Rational is None:
    from fractions import Fraction as Rational  # type: ignore[no-redef]

    NAME = "fraction"

__all__ = ["Rational", "NAME"]
