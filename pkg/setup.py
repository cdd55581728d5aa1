import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "hgmrf._kernels",
                ["src/hgmrf/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: install the pure-Python fallback kernels only.
    print("Cython not available; skipping compiled kernel build", file=sys.stderr)

setup(ext_modules=ext_modules)
