import numpy as np
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("laacsim._kernels._detect_cy",
                   ["src/laacsim/_kernels/_detect_cy.pyx"],
                   include_dirs=[np.get_include()],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except ImportError:
    # pure-Python fallback kernel is selected at import time
    ext_modules = []

setup(ext_modules=ext_modules)
