"""Build hook: compiles the optional scoring kernel when Cython is available.

The package works without the compiled extension; crowdsent.sentiment falls
back to the pure-Python kernel at import time.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/crowdsent/_scoring.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
