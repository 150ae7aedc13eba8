"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
kernel module is selected at import time); set FEEDGAME_PURE=1 to skip
compilation entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FEEDGAME_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "feedgame._kernels",
                    ["src/feedgame/_kernels.pyx"],
                    # -ffp-contract=off keeps the compiled kernels bit-identical
                    # to the pure-Python fallback (no FMA contraction).
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
