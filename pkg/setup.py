"""Build the optional Cython kernel; the package works without it."""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        sys.stderr.write(f"warning: compiled kernel not built ({exc}); using pure-Python fallback\n")


def extensions():
    if os.environ.get("QJACOBI_NO_EXT"):
        return []
    try:
        import gmpy2
        from Cython.Build import cythonize
    except ImportError:
        return []
    gmpy2_dir = os.path.dirname(gmpy2.__file__)
    ext = Extension(
        "qjacobi._ckernels",
        ["src/qjacobi/_ckernels.pyx"],
        include_dirs=[gmpy2_dir],
        libraries=["gmp"],
        language="c++",
        extra_compile_args=["-O2"],
    )
    try:
        return cythonize(
            [ext],
            compiler_directives={"language_level": "3"},
            include_path=[os.path.dirname(gmpy2_dir)],
        )
    except Exception as exc:  # noqa: BLE001
        OptionalBuildExt._warn(exc)
        return []


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
