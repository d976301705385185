"""Build script: compiles the optional evaluation-kernel extension.

The package is fully functional without the extension (a numpy fallback
is selected at import time), so any failure to cythonize or compile is
tolerated and reported, not fatal.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/pcompact/_kernels_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
except Exception as exc:  # missing toolchain: fall back to pure python
    print(f"skipping compiled kernels ({exc}); using the numpy fallback",
          file=sys.stderr)

setup(ext_modules=ext_modules)
