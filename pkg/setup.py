"""Build the optional compiled kernel; the package falls back to pure Python without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "weibulltail._kernels",
                ["src/weibulltail/_kernels.pyx"],
                # no fused multiply-add: the pure-Python twin must match bit for bit
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
