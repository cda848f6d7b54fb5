import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "lglda._sampler_cy",
        sources=["src/lglda/_sampler_cy.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

# The compiled sampler is optional: without Cython the package falls back to
# the pure-Python kernels in lglda._sampler_py.
setup(ext_modules=cythonize(extensions, language_level="3") if cythonize else [])
