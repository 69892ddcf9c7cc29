"""Build script.

The elimination core lives in trophodge/_kernels.pyx and is compiled when
Cython is available.  Without Cython (or if compilation fails) the package
falls back to the pure-Python twin in trophodge._kernels_py, selected at
import time by trophodge._core.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/trophodge/_kernels.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
