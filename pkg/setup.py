from setuptools import setup

with open("requirements.txt") as f:
    requirements = f.read().splitlines()

with open("README.md", "r") as f:
    long_description = f.read()

packages = [
    "besovkit",
    "besovkit.types"
]

extras_require = {
    "test": [
        "pytest>=7.0",
        "pytest-asyncio>=0.21",
    ]
}

if __name__ == "__main__":
    setup(
        name="besovkit",
        author="besovkit developers",
        version="0.1.0",
        packages=packages,
        license="MIT",
        description="Numerical checks of composition operators on analytic Besov and Bergman spaces.",
        install_requires=requirements,
        extras_require=extras_require,
        python_requires=">=3.9",
        entry_points={"console_scripts": ["besovkit=besovkit.cli:main"]},
        long_description=long_description,
        long_description_content_type="text/markdown",
    )
