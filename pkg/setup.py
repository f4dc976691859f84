"""Build script.

The compiled residue-enumeration kernel is optional: if Cython or a C
compiler is unavailable the build proceeds and the package falls back to
the pure-Python implementation at import time.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension
    except ImportError:
        warnings.warn("Cython not available; building without the compiled kernel")
        return []
    return cythonize(
        [Extension("quadtwist._scan32", ["src/quadtwist/_scan32.pyx"])],
        language_level=3,
    )


class optional_build_ext(build_ext):
    """Never fail the install because the extension would not compile."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel {ext.name} skipped: {exc}")


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
