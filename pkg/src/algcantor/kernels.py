"""Backend selection for the interval Horner kernel.

The compiled extension is used when it was built; otherwise, or when
``ALGCANTOR_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
pure-Python kernel is used.  Both return identical integer pairs.
"""
import os

from . import _horner_py

python_horner_enclosure = _horner_py.horner_enclosure

try:
    from ._horner_c import horner_enclosure as compiled_horner_enclosure
except ImportError:  # extension not built
    compiled_horner_enclosure = None

_force_python = os.environ.get("ALGCANTOR_PURE_PYTHON", "") not in ("", "0")

if compiled_horner_enclosure is not None and not _force_python:
    horner_enclosure = compiled_horner_enclosure
    BACKEND = "cython"
else:
    horner_enclosure = python_horner_enclosure
    BACKEND = "python"
