"""Build script for the optional compiled tree-building kernel.

The package works without the extension: bvrsim.gbt falls back to a numpy
implementation of the same kernel interface at import time.  Building the
extension makes training and batch prediction roughly an order of magnitude
faster (see benchmarks/bench_backends.py).
"""

import os

import numpy
from setuptools import setup
from setuptools.extension import Extension

try:
    if not os.path.exists("src/bvrsim/gbt/_kernel.pyx"):
        raise ImportError("kernel source not present")
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "bvrsim.gbt._kernel",
                ["src/bvrsim/gbt/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
