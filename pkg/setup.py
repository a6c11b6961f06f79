import os
import warnings

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("LANGBIAS_NO_EXTENSIONS"):
    extensions = cythonize(
        [Extension("langbias.models._dual_cd",
                   ["src/langbias/models/_dual_cd.pyx"],
                   include_dirs=[np.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
else:
    warnings.warn("Cython not available; langbias will use its pure-Python SVM kernel.")

setup(ext_modules=extensions)
