from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "ancient_heat._core",
    sources=[
        "src/numerics.cpp",
        "src/domain.cpp",
        "src/io.cpp",
        "src/oracle.cpp",
        "src/ladder.cpp",
        "src/series.cpp",
        "src/inequalities.cpp",
        "src/tychonov.cpp",
        "src/cli.cpp",
        "src/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    libraries=["gmpxx", "gmp", "mpfr"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
