from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; mlh.scalar falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("mlh.scalar._cdual", ["src/mlh/scalar/_cdual.pyx"], optional=True)],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
