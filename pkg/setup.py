"""Setup configuration for erpic package"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="erpic",
    version="1.0.0",
    author="erpic Development Team",
    description="Energy-relaxed particle-in-cell solver for the strongly magnetized Vlasov-Poisson system",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"erpic.integrators": ["*.md"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
    install_requires=[
        "pandas>=1.5.0",
        "numpy>=1.22.0",
        "plotly>=5.0.0",
        "scipy>=1.8.0",
        "tomli>=1.1.0; python_version<'3.11'",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "pytest-cov>=2.0",
            "black>=21.0",
            "flake8>=3.9",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "erpic=erpic.runner.cli:main",
        ],
    },
)
