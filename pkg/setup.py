"""A setuptools based setup module.
See:
https://packaging.python.org/guides/distributing-packages-using-setuptools/
https://github.com/pypa/sampleproject
"""

# Always prefer setuptools over distutils
from setuptools import setup, find_packages
import os.path

# Get midfea's version number
# See https://packaging.python.org/guides/single-sourcing-package-version/
def get_version(rel_path):
    here = os.path.abspath(os.path.dirname(__file__))
    with open(os.path.join(here, rel_path), "r") as fp:
        for line in fp.read().splitlines():
            if line.startswith("__version__"):
                delim = '"' if '"' in line else "'"
                return line.split(delim)[1]
        else:
            raise RuntimeError("Unable to find version string.")


setup(
    name="midfea",
    version=get_version("midfea/__init__.py"),
    description="Learn mid-level image features and a Neuron-Selectivity layer for classification",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Image Recognition",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
    ],
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8, <4",
    install_requires=[
        "numpy>=1.20",
        "opencv-python-headless>=4.5",
        "scikit-learn>=1.0",
        "scipy>=1.6",
        "tqdm>=4.56",
    ],
    extras_require={
        "dev": ["pytest>=6.2"],
        "docs": ["sphinx>=3.4", "sphinx_rtd_theme>=0.5"],
    },
    entry_points={
        "console_scripts": [
            "midfea=midfea.__main__:main",
        ],
    },
)
