import os

from setuptools import Extension, setup

import numpy as np


def _numpy_lib_dirs():
    base = os.path.dirname(np.__file__)
    dirs = [os.path.join(base, "random", "lib"), os.path.join(base, "_core", "lib")]
    return [d for d in dirs if os.path.isdir(d)]


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    kernel = Extension(
        "msbandits._kernel",
        sources=["src/msbandits/_kernel.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=_numpy_lib_dirs(),
        libraries=["npyrandom", "npymath"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        # A failed compile leaves the pure-Python backend in charge.
        optional=True,
    )
    ext_modules = cythonize([kernel], language_level="3")

setup(ext_modules=ext_modules)
