from setuptools import setup, find_packages

setup(
    name="orbiweight",
    version="0.1",
    packages=find_packages(exclude=["tests"]),
    py_modules=["main"],
    install_requires=[
        "sympy==1.13.0",
        "pandas==2.0.2",
        "pydantic==1.10.17",
        "tqdm==4.65.0",
        "pyyaml==6.0",
        "python-dotenv==1.0.1",
    ],
    extras_require={
        "test": ["pytest==8.2.2", "pytest-mock==3.14.0"],
    },
    entry_points={
        "console_scripts": ["orbiweight=main:main"],
    },
    description="Exact arithmetic and group-theoretic checks on the weight of knot groups and Seifert fibred knot manifolds",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
)
