"""Build script for the optional compiled kernels.

The extension is skipped when Cython is unavailable; ``abring`` then runs on
its numpy fallback.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ABRING_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("abring._ckernels", ["src/abring/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
