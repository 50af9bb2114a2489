import os

from setuptools import Extension, setup


def extensions():
    """Build the compiled kernel core when Cython is available.

    The package runs fine without it (pure-numpy fallback is selected at
    import time), so any build problem just drops the extension.
    Set CLOZESUM_PURE=1 to skip the extension on purpose.
    """
    if os.environ.get("CLOZESUM_PURE") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "clozesum.kernels._core",
        sources=["src/clozesum/kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
