from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("tmotive._kernels", ["src/tmotive/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # the package works without the compiled kernels (pure-Python fallback)
    ext_modules = []

setup(ext_modules=ext_modules)
