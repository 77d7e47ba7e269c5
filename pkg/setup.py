import os

import numpy as np
from setuptools import setup

ext_modules = []
if not os.environ.get("TORUSSKEIN_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            Extension(
                "torusskein._kernels",
                ["src/torusskein/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            ),
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        # no Cython: the numpy fallback is used at import time
        ext_modules = []

setup(ext_modules=ext_modules)
