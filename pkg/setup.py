from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [Extension("varqite._kernels", sources=["src/varqite/_kernels.pyx"])],
        compiler_directives={"language_level": 3},
    ),
)
