"""Build the optional compiled integrator; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy  # noqa: F401  (the extension uses numpy memoryviews only)
except ImportError:
    pass
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("annulus_minimizers._kernel", ["src/annulus_minimizers/_kernel.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
