from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("padpart._speedups", ["src/padpart/_speedups.pyx"])],
        language_level=3,
    )
except ImportError:
    # No Cython: install without the compiled kernels; the package falls
    # back to the pure-Python implementation at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
