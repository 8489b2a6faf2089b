"""
Setup script for symdom
"""

from setuptools import setup, find_packages

setup(
    name="symdom",
    version="0.1.0",
    packages=find_packages(include=["symdom", "symdom.*"]),
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "python-dotenv>=1.0.0",
        "pydantic>=2.0.0",
    ],
    entry_points={"console_scripts": ["symdom=symdom.cli:main"]},
)
