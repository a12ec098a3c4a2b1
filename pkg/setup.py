"""Packaging for block_sparse_mac"""

from pathlib import Path

from setuptools import find_packages, setup  # type: ignore

ROOT = Path(__file__).parent


def read(*parts: str) -> str:
    return ROOT.joinpath(*parts).read_text(encoding="utf8").strip()


def read_requirements(name: str) -> list[str]:
    """Requirement lines without comments, pip options or VCS links"""
    return [
        line.strip()
        for line in read(name).splitlines()
        if line.strip() and not line.startswith(("#", "-", "git+"))
    ]


setup(
    name="block_sparse_mac",
    version=read("block_sparse_mac", "VERSION"),
    description="Precoded block-sparse uplink multiple access: BOMP/ICBOMP detection, guarantees and Monte-Carlo experiments",
    long_description=read("README.md"),
    long_description_content_type="text/markdown",
    python_requires=">=3.10",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"block_sparse_mac": ["VERSION"]},
    install_requires=read_requirements("requirements.txt"),
    extras_require={"test": read_requirements("requirements-test.txt")},
    entry_points={"console_scripts": ["block_sparse_mac = block_sparse_mac.__main__:main"]},
)
