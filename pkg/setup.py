#!/usr/bin/env python3
"""
Setup script for Equal Spin-Spin Interaction spectra (ESSI)
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read the contents of README file
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding='utf-8')

# Read requirements
requirements = []
try:
    with open('requirements.txt', 'r', encoding='utf-8') as f:
        requirements = [line.strip() for line in f if line.strip() and not line.startswith('#')]
except FileNotFoundError:
    requirements = [
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'pandas>=2.1.4',
        'jinja2>=3.1.6',
        'pyyaml>=6.0.1',
        'rich>=13.7.0',
        'jsonschema>=4.17.0'
    ]

setup(
    name="essi",
    version="1.0.0",
    author="ESSI Development Team",
    description="Closed-form and numerical spectra of equally coupled spin-1/2 systems",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["essi_cli"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Scientific/Engineering :: Chemistry",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={
        'dev': [
            'pytest>=7.0.0',
            'pytest-cov>=4.0.0',
            'black>=22.0.0',
            'flake8>=5.0.0',
            'mypy>=1.0.0',
            'isort>=5.10.0',
        ],
    },
    entry_points={
        "console_scripts": [
            "essi=essi_cli:main",
        ],
    },
    include_package_data=True,
    package_data={
        'essi': [
            'schemas/*.json',
            'templates/*.html',
        ],
    },
    keywords=[
        "spin", "nmr", "hamiltonian", "exact diagonalization", "johnson graph",
        "dipolar coupling", "spectroscopy"
    ],
    zip_safe=False,
)
