# Builds the pybind11 extension by delegating to the project's CMake
# tree, then drops the module next to the pure-Python package.

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        # The extension lands in <out>/feamkit/_core*.so.
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.parent.resolve()

        cfg = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DFEAM_BUILD_CLI=OFF",
            "-DFEAM_BUILD_TESTS=OFF",
            "-DFEAM_BUILD_PYTHON=ON",
            f"-DPython_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(cfg, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "feamkit_core",
             "--parallel"],
            check=True,
        )

        module_dir = out_dir / "feamkit"
        module_dir.mkdir(parents=True, exist_ok=True)
        for so in (build_dir / "python" / "feamkit").glob("_core*"):
            (module_dir / so.name).write_bytes(so.read_bytes())


setup(
    ext_modules=[CMakeExtension("feamkit._core")],
    cmdclass={"build_ext": CMakeBuild},
)
