"""Build script for the optional compiled scoring kernels.

The package is fully functional without the extension; if Cython or a C
compiler is unavailable the build falls back to the pure-Python kernels.
"""

import sys

from setuptools import setup


def ext_modules():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "gestmap._fastkernels",
        ["src/gestmap/_fastkernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


try:
    setup(ext_modules=ext_modules())
except SystemExit:
    raise
except Exception as exc:  # the extension is optional, never fail the install
    print(f"warning: compiled kernels skipped ({exc}); using pure-Python fallback",
          file=sys.stderr)
    setup(ext_modules=[])
