import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("KSTAB_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("kstab._kernels", ["src/kstab/_kernels.pyx"], include_dirs=[np.get_include()])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
