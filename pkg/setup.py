import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TYPED_CONTRACTS_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # fall back to the pure-Python kernels
        pass
    else:
        ext_modules = cythonize(
            [Extension("typed_contracts.lp._kernels", ["src/typed_contracts/lp/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
