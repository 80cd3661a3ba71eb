from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = [
    "src/bindings.cpp",
    "src/util.cpp",
    "src/special.cpp",
    "src/arithmetic.cpp",
    "src/forms.cpp",
    "src/afe.cpp",
    "src/lfunc.cpp",
    "src/zeros.cpp",
    "src/exponents.cpp",
]

setup(
    ext_modules=[
        Pybind11Extension(
            "lzero._core",
            sources,
            include_dirs=["include", "vendor"],
            cxx_std=20,
            extra_compile_args=["-O2"],
        )
    ],
    cmdclass={"build_ext": build_ext},
)
