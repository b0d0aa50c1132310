from setuptools import setup, find_packages

setup(
    name="lstransforms",
    version="0.1.0",
    description="Discrete Lebedev-Skalskaya index transforms",
    packages=find_packages(include=["lstransforms", "lstransforms.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0.0",
            "scipy>=1.10.0",
            "mpmath>=1.3.0",
        ],
    },
    entry_points={
        "console_scripts": ["lstransforms = lstransforms.main:main"],
    },
    python_requires=">=3.10",
)
