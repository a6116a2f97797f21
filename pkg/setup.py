import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "phasest._kernels",
        ["src/phasest/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off: no FMA contraction, so compiled results match the
        # pure-Python backend bit for bit
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
