"""Build script.

The only compiled piece is the fraction-free elimination kernel
(src/drcalc/_elim_c.pyx).  If Cython is unavailable the build silently
skips the extension and the package falls back to the pure-Python kernel
(drcalc/_elim_py.py) at import time; everything still works, just slower.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("drcalc._elim_c", ["src/drcalc/_elim_c.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
