"""Build script for the optional compiled row-reduction kernel.

The package is fully functional without the extension; linalg falls back to
the pure-Python kernel when the import fails.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "lieq._rref_c",
                ["src/lieq/_rref_c.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
