"""Build script for the optional compiled kernels.

The package is fully functional without the extension: NumPy fallbacks are
selected at import time, so the build tolerates a missing compiler or a
missing Cython installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "scisumm._core._kernels",
                ["src/scisumm/_core/_kernels.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
