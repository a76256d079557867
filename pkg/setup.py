import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; runtime falls back to _fallback.py
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "entsuper._kernels",
                [os.path.join("src", "entsuper", "_kernels.pyx")],
                # keep sin/cos as separate libm calls: the fused sincos() can differ in
                # the last bit, which would make the fallback's trajectories diverge
                extra_compile_args=["-O3", "-fno-builtin-sin", "-fno-builtin-cos"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
