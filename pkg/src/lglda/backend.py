"""Sweep-kernel backend selection.

The compiled Cython kernels are used when the extension module built from
``_sampler_cy.pyx`` is importable; otherwise the pure-Python twins take
over.  ``LGLDA_BACKEND=python|compiled`` forces a choice (``compiled``
raises if the extension is missing), and :func:`use` does the same
programmatically, which the benchmark uses to time both paths in one
process.
"""

from __future__ import annotations

import os

from lglda import _sampler_py

try:
    from lglda import _sampler_cy
except ImportError:
    _sampler_cy = None

_forced: str | None = None


def available() -> list[str]:
    names = ["python"]
    if _sampler_cy is not None:
        names.append("compiled")
    return names


def use(name: str | None) -> None:
    """Force a backend by name ('python' or 'compiled'); None restores auto."""
    global _forced
    if name is not None and name not in ("python", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    _forced = name


def _resolve(name: str):
    if name == "python":
        return _sampler_py
    if name == "compiled":
        if _sampler_cy is None:
            raise RuntimeError(
                "compiled backend requested but lglda._sampler_cy is not built; "
                "run `python setup.py build_ext --inplace` or reinstall"
            )
        return _sampler_cy
    raise ValueError(f"unknown backend {name!r}")


def kernels():
    """Return the active kernel module."""
    if _forced is not None:
        return _resolve(_forced)
    env = os.environ.get("LGLDA_BACKEND", "auto")
    if env == "auto":
        return _sampler_cy if _sampler_cy is not None else _sampler_py
    return _resolve(env)


def active_name() -> str:
    return "compiled" if kernels() is _sampler_cy and _sampler_cy is not None else "python"
