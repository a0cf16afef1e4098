import os

from setuptools import setup

ext_modules = []
if os.environ.get("BLM_NO_EXTENSION", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:  # build the pure-Python package only
        pass
    else:
        ext_modules = cythonize(
            Extension(
                "blm._ckernels",
                ["src/blm/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            ),
            language_level="3",
        )

setup(ext_modules=ext_modules)
