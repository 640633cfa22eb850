import os

from setuptools import setup

# The compiled scanner kernel is optional: the package falls back to the
# pure-Python twin at import time. Set WWHO_NO_EXT=1 to skip the build.
ext_modules = []
if os.environ.get("WWHO_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/wwho/_kernels.pyx"],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
