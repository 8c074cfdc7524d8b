"""Build the optional compiled kernel.

The package works without it: ``algcantor.kernels`` falls back to the
pure-Python kernel when ``_horner_c`` cannot be imported.  Set
``ALGCANTOR_NO_EXT=1`` to skip the extension entirely.
"""
import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, Cython missing, ...
            print(f"warning: skipping compiled kernel ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc})")


ext_modules = []
if not os.environ.get("ALGCANTOR_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/algcantor/_horner_c.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
