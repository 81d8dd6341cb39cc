from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "spinmultipoles._kernels._ckern",
                ["src/spinmultipoles/_kernels/_ckern.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # source tree without Cython/numpy at build time: the pure-python
    # kernels are selected at import instead
    extensions = []

setup(ext_modules=extensions)
