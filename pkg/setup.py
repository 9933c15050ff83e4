"""Build script: compiles the frontier-sweep kernel when Cython is available.

The package works without the extension (a NumPy fallback is selected at
import time), so a missing compiler only costs speed, not functionality.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("bccrates._sweep", ["src/bccrates/_sweep.pyx"])],
        language_level="3",
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
