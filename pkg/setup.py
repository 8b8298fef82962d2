from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(["src/eckit/engine/_kernel.pyx"], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
