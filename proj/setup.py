import os
import subprocess
import sys

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    override = os.environ.get("EIGEN3_INCLUDE_DIR")
    if override:
        return override
    try:
        flags = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True, text=True, check=True,
        ).stdout.split()
        for flag in flags:
            if flag.startswith("-I"):
                return flag[2:]
    except (OSError, subprocess.CalledProcessError):
        pass
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    sys.exit("Eigen headers not found; set EIGEN3_INCLUDE_DIR")


core_sources = [
    "src/numkernel.cpp",
    "src/io.cpp",
    "src/omp.cpp",
    "src/ric.cpp",
    "src/bounds.cpp",
    "src/infotheory.cpp",
    "src/experiments.cpp",
]

ext_modules = [
    Pybind11Extension(
        "ompbound._core",
        sorted(core_sources + ["bindings/module.cpp"]),
        include_dirs=["include", "vendor", eigen_include()],
        cxx_std=20,
    )
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
