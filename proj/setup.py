"""Build the _core extension through the project's CMake tree.

The wheel contains python/aclab plus the compiled aclab/_core module; the
C++ CLI and test suites are not part of the wheel (build them with CMake
directly).
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).parent.resolve()
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        package_dir = ext_path.parent  # .../aclab
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        import pybind11

        cmake_args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={package_dir}",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            "-DSKBUILD=ON",
            "-DACLAB_BUILD_PYTHON=ON",
            "-DACLAB_BUILD_TESTS=OFF",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        jobs = os.cpu_count() or 2
        subprocess.run(["cmake", "-S", str(source_dir), "-B", str(build_dir), *cmake_args], check=True)
        subprocess.run(["cmake", "--build", str(build_dir), "--target", "_core", f"-j{jobs}"], check=True)


setup(
    ext_modules=[CMakeExtension("aclab._core")],
    cmdclass={"build_ext": CMakeBuild},
)
