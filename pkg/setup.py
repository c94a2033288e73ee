#!/usr/bin/env python3

from setuptools import setup, find_packages

setup(
    name="proper-subspaces",
    packages=find_packages(
        include=[
            "proper_subspaces",
            "proper_subspaces.*",
        ]
    ),
    setup_requires=[
        "pytest-runner",
    ],
    tests_require=["pytest", "pytest-mock", "hypothesis"],
)
