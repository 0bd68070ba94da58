import os

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
if os.environ.get("PERMSTAB_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/permstab/kernels/_fast.pyx"],
            language_level="3",
        )
    except Exception as exc:  # missing Cython: fall back to pure Python
        print(f"permstab: building without compiled kernels ({exc})")


class OptionalBuildExt(build_ext):
    """Treat extension build failures as a downgrade, not an error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"permstab: building without compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"permstab: skipping {ext.name} ({exc})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
