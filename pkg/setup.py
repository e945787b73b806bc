from setuptools import setup, find_packages

setup(
    name="form_analyzer",
    version="0.1.0",
    description="Weight-training motion analysis over depth-sensor skeleton streams",
    author="Form Analyzer Team",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20.0",
        "pandas>=1.0.0",
        "pydantic>=2.0.0",
        "matplotlib>=3.5.0",
    ],
    extras_require={
        "dev": ["pytest>=6.0.0", "pytest-cov>=2.10.0"],
    },
    entry_points={
        "console_scripts": [
            "form-analyze=form_analyzer.main:main",
        ],
    },
)
