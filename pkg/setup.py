"""Build script for the compiled matching kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), but the compiled kernel is strongly recommended for the
Monte Carlo experiments: see benchmarks/matching_bench.py.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "matchspread._matching_cy",
                ["src/matchspread/_matching_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
