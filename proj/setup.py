import subprocess

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

CORE_SOURCES = [
    "src/entry_process.cpp",
    "src/wigner.cpp",
    "src/observables.cpp",
    "src/theory.cpp",
    "src/kernel.cpp",
    "src/stats.cpp",
    "src/montecarlo.cpp",
    "src/config.cpp",
]


def eigen_include():
    try:
        flags = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            check=True, capture_output=True, text=True,
        ).stdout.split()
        for flag in flags:
            if flag.startswith("-I"):
                return flag[2:]
    except (OSError, subprocess.CalledProcessError):
        pass
    return "/usr/include/eigen3"


setup(
    ext_modules=[
        Pybind11Extension(
            "dysonclt._core",
            sources=["bindings/module.cpp"] + CORE_SOURCES,
            include_dirs=["include", "vendor", eigen_include()],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
