import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QMCANNEAL_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qmcanneal._core",
                    ["src/qmcanneal/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
