import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COMPLEXOPT_PURE") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "complexopt._witness",
                ["src/complexopt/_witness.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
