"""Build script: compiles the Cython kernels when a toolchain is available.

Set NONTWIST_PURE_PYTHON=1 to skip the extension entirely; the package then
runs on the pure-Python kernel fallback selected at import time.
"""
import os
import sys

from setuptools import setup


def run_setup(with_extension):
    ext_modules = []
    if with_extension:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/nontwist/_kernels.pyx"],
            compiler_directives={"language_level": "3"},
        )
        for ext in ext_modules:
            ext.extra_compile_args = ["-O3"]
    setup(ext_modules=ext_modules)


if os.environ.get("NONTWIST_PURE_PYTHON"):
    run_setup(False)
else:
    try:
        run_setup(True)
    except Exception as exc:  # no compiler / no Cython: install without kernels
        sys.stderr.write(
            "nontwist: compiled kernels unavailable (%s); "
            "installing with the pure-Python fallback\n" % exc
        )
        run_setup(False)
