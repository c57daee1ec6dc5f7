"""Build hooks for the optional compiled kernel backend.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); set HARDMAP_SKIP_EXT=1 to force a pure build.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HARDMAP_SKIP_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "hardmap.kernels._ckern",
                    ["src/hardmap/kernels/_ckern.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
