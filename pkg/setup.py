"""Build the optional compiled kernels.

The package works without them: ``mmmvol.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("MMMVOL_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "mmmvol._kernels",
                    ["src/mmmvol/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                    libraries=["m"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
