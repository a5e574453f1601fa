import re
from pathlib import Path

from setuptools import setup, find_packages

VERSION = re.search(r'ROBUSTHT_VERSION = "([^"]+)"', (Path(__file__).parent / "robustht" / "version.py").read_text()).group(1)

setup(
    name="robustht",
    version=VERSION,
    packages=find_packages(exclude=("tests", "tests.*", "examples", "examples.*")),
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
    ],
    extras_require={
        "tests": [
            "pytest>=7.0.0",
            "pytest-asyncio>=0.21.0",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "robustht=robustht.cli:main",
        ],
    },
    python_requires=">=3.8",
)
