"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python backend is selected at
import time), so the build degrades gracefully when Cython is unavailable.
The compiled tables must agree bit for bit with the reference kernels, hence
the flag forbidding fused multiply-add contraction.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "treegames._approx_cy",
                ["src/treegames/_approx_cy.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
